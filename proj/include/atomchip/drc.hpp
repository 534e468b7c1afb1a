#ifndef ATOMCHIP_DRC_HPP
#define ATOMCHIP_DRC_HPP

// Fabrication design rules: current density, per-technique feature limits,
// mirror and pad lint, bonding, resistive power, technique choice and process
// recipes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "atomchip/errors.hpp"
#include "atomchip/layout.hpp"
#include "atomchip/units.hpp"

namespace atomchip {

enum class Technique { wet_etch, ion_mill, lift_off, electroplating };
enum class MaskKind { transparency, chrome };

inline constexpr Technique all_techniques[] = {Technique::wet_etch, Technique::ion_mill, Technique::lift_off,
                                               Technique::electroplating};

inline std::string_view to_string(Technique t) {
  switch (t) {
    case Technique::wet_etch: return "wet_etch";
    case Technique::ion_mill: return "ion_mill";
    case Technique::lift_off: return "lift_off";
    case Technique::electroplating: return "electroplating";
  }
  return "?";
}

inline std::string_view to_string(MaskKind m) { return m == MaskKind::transparency ? "transparency" : "chrome"; }

inline std::optional<Technique> parse_technique(std::string_view s) {
  for (auto t : all_techniques) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

inline std::optional<MaskKind> parse_mask(std::string_view s) {
  if (s == "transparency") return MaskKind::transparency;
  if (s == "chrome") return MaskKind::chrome;
  return std::nullopt;
}

namespace drc_limits {
inline constexpr double transparency_min_feature = 30e-6;
inline constexpr double wet_etch_undercut_band = 30e-6;  // below this, isotropic etching narrows wires noticeably
inline constexpr double evaporation_soft_height = 1e-6;  // thicker evaporated gold gets costly
inline constexpr double structure_max_height = 5e-6;     // anything taller shadows the mirror beam
inline constexpr double mirror_min_gap = 10e-6;
inline constexpr double mirror_min_area = 5e-4;          // 5 cm^2
inline constexpr double pad_edge_clearance = 1e-3;
inline constexpr double gold_resistivity = 2.44e-8;      // ohm m, 20 C
inline constexpr double bond_current = 0.2;              // A per wire bond
}  // namespace drc_limits

struct TechniqueSpec {
  Technique name = Technique::wet_etch;
  double min_width = 0.0;
  double max_height = 0.0;
  double min_spacing = 0.0;
  MaskKind mask = MaskKind::chrome;
  double height_tolerance = 0.0;
  double demonstrated_height = 0.0;  // tallest height known to work; above it is a warning
  bool evaporated = true;            // wire height set by thermal evaporation
  std::string notes;

  static TechniqueSpec of(Technique t) {
    TechniqueSpec s;
    s.name = t;
    switch (t) {
      case Technique::wet_etch:
        s.min_width = 10e-6;
        s.max_height = 1e-6;
        s.min_spacing = 30e-6;
        s.mask = MaskKind::transparency;
        s.height_tolerance = 0.0;
        s.demonstrated_height = 1e-6;
        s.notes = "positive resist over evaporated gold; gold and chromium etched away";
        break;
      case Technique::ion_mill:
        s.min_width = 1e-6;
        s.max_height = 1.5e-6;
        s.min_spacing = 1e-6;
        s.mask = MaskKind::chrome;
        s.demonstrated_height = 1.5e-6;
        s.notes = "argon ions remove uncovered gold; resolution set by the resist; keep the substrate cool";
        break;
      case Technique::lift_off:
        s.min_width = 1e-6;
        s.max_height = 1.5e-6;
        s.min_spacing = 1e-6;
        s.mask = MaskKind::chrome;
        s.demonstrated_height = 1.5e-6;
        s.notes = "gold evaporated into undercut trenches of image-reversed resist";
        break;
      case Technique::electroplating:
        s.min_width = 1e-6;
        s.max_height = drc_limits::structure_max_height;
        s.min_spacing = 1e-6;
        s.mask = MaskKind::chrome;
        s.height_tolerance = 0.5e-6;
        s.demonstrated_height = 4e-6;
        s.evaporated = false;
        s.notes = "gold plated from a seed layer between thick resist walls; about 75% yield";
        break;
    }
    return s;
  }
};

enum class Severity { error, warning };

inline std::string_view to_string(Severity s) { return s == Severity::error ? "error" : "warning"; }

struct DrcViolation {
  std::string rule_id;
  Severity severity = Severity::error;
  std::string subject;
  double measured = 0.0;
  double limit = 0.0;
  std::string unit;  // shared by measured and limit
  std::string message;

  friend bool operator==(const DrcViolation&, const DrcViolation&) = default;
};

namespace drc_detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline DrcViolation make(std::string rule, Severity sev, std::string subject, double measured, double limit,
                         std::string unit, std::string message) {
  return {std::move(rule), sev, std::move(subject), measured, limit, std::move(unit), std::move(message)};
}

inline std::string um_text(double m) { return num(units::to_um(m)) + " um"; }

}  // namespace drc_detail

/// Orders violations by rule id, then subject, then the rest of the record,
/// so equal inputs always print identically.
inline void sort_violations(std::vector<DrcViolation>& v) {
  std::sort(v.begin(), v.end(), [](const DrcViolation& a, const DrcViolation& b) {
    return std::tie(a.rule_id, a.subject, a.severity, a.message, a.measured) <
           std::tie(b.rule_id, b.subject, b.severity, b.message, b.measured);
  });
}

inline bool has_errors(const std::vector<DrcViolation>& v) {
  return std::any_of(v.begin(), v.end(), [](const DrcViolation& d) { return d.severity == Severity::error; });
}

/// One tab-separated line per violation.
inline void write_drc_report(std::ostream& os, const std::vector<DrcViolation>& v) {
  using drc_detail::num;
  for (const auto& d : v) {
    os << d.rule_id << '\t' << to_string(d.severity) << '\t' << d.subject << '\t' << num(d.measured) << ' ' << d.unit
       << '\t' << num(d.limit) << ' ' << d.unit << '\t' << d.message << '\n';
  }
}

// ---------------------------------------------------------------------------
// Rules

/// |I| / (w h) against the substrate limit, per path.
inline std::vector<DrcViolation> check_current_density(const ChipLayout& layout) {
  std::vector<DrcViolation> out;
  const double jmax = layout.substrate.j_max;
  for (const auto& p : layout.paths) {
    const double j = std::abs(p.current) / p.cross_section();
    if (j > jmax) {
      out.push_back(drc_detail::make("DENSITY-JMAX", Severity::error, p.id, j, jmax, "A/m2",
                                     "current density exceeds the " + std::string(to_string(layout.substrate.material)) +
                                         " limit; widen or thicken the wire or lower the current"));
    }
  }
  sort_violations(out);
  return out;
}

/// Width, height and spacing of every path against one technique.
inline std::vector<DrcViolation> check_feature_rules(const ChipLayout& layout, const TechniqueSpec& t) {
  using drc_detail::make;
  using drc_detail::um_text;
  namespace lim = drc_limits;
  std::vector<DrcViolation> out;
  const std::string tech(to_string(t.name));
  const auto um = [](double m) { return units::to_um(m); };

  for (const auto& p : layout.paths) {
    if (p.width < t.min_width) {
      out.push_back(make("FEATURE-WIDTH", Severity::error, p.id, um(p.width), um(t.min_width), "um",
                         "narrower than " + tech + " can pattern"));
    } else if (t.name == Technique::wet_etch && p.width < lim::wet_etch_undercut_band) {
      out.push_back(make("WETETCH-UNDERCUT", Severity::warning, p.id, um(p.width), um(lim::wet_etch_undercut_band), "um",
                         "isotropic etch undercut is a noticeable fraction of this width"));
    }
    if (t.mask == MaskKind::transparency && p.width < lim::transparency_min_feature) {
      out.push_back(make("MASK-RESOLUTION", Severity::error, p.id, um(p.width), um(lim::transparency_min_feature), "um",
                         "transparency masks cannot resolve this width; use a chrome mask"));
    }
    if (p.height > t.max_height) {
      out.push_back(make("FEATURE-HEIGHT", Severity::error, p.id, um(p.height), um(t.max_height), "um",
                         "taller than " + tech + " can build"));
    } else if (p.height > t.demonstrated_height) {
      out.push_back(make("HEIGHT-DEMONSTRATED", Severity::warning, p.id, um(p.height), um(t.demonstrated_height), "um",
                         "taller than heights " + tech + " has been shown to reach (tolerance " +
                             um_text(t.height_tolerance) + ")"));
    }
    if (t.evaporated && p.height > lim::evaporation_soft_height && p.height <= t.max_height) {
      out.push_back(make("EVAP-HEIGHT", Severity::warning, p.id, um(p.height), um(lim::evaporation_soft_height), "um",
                         "evaporating this much gold is slow and costly and roughens the surface"));
    }
  }

  for (std::size_t i = 0; i < layout.paths.size(); ++i) {
    for (std::size_t j = i + 1; j < layout.paths.size(); ++j) {
      const auto& a = layout.paths[i];
      const auto& b = layout.paths[j];
      const double gap = edge_clearance(a, b);
      if (gap > 0.0 && gap < t.min_spacing) {
        out.push_back(make("FEATURE-SPACING", Severity::error, a.id + "/" + b.id, um(gap), um(t.min_spacing), "um",
                           "gap between wires is below the " + tech + " minimum"));
      } else if (gap > 0.0 && t.mask == MaskKind::transparency && gap < lim::transparency_min_feature) {
        out.push_back(make("MASK-RESOLUTION", Severity::error, a.id + "/" + b.id, um(gap),
                           um(lim::transparency_min_feature), "um",
                           "transparency masks cannot resolve this gap; use a chrome mask"));
      }
    }
  }
  sort_violations(out);
  return out;
}

/// Shorts and self-crossings found by the layout geometry check.
inline std::vector<DrcViolation> check_geometry(const ChipLayout& layout) {
  std::vector<DrcViolation> out;
  for (const auto& f : validate_geometry(layout)) {
    if (f.kind == GeometryFinding::Kind::short_circuit) {
      out.push_back(drc_detail::make("GEOM-SHORT", Severity::error, f.path_a + "/" + f.path_b,
                                     units::to_um(f.clearance), 0.0, "um", f.message()));
    } else {
      out.push_back(drc_detail::make("GEOM-SELF", Severity::error, f.path_a, 0.0, 0.0, "um", f.message()));
    }
  }
  sort_violations(out);
  return out;
}

/// Mirror gap and area, pad distance from the substrate edge, and the height
/// of everything standing on the surface.
inline std::vector<DrcViolation> mirror_lint(const ChipLayout& layout) {
  using drc_detail::make;
  namespace lim = drc_limits;
  std::vector<DrcViolation> out;
  const auto um = [](double m) { return units::to_um(m); };
  if (layout.mirror) {
    const auto& m = *layout.mirror;
    if (m.gap_to_wires <= lim::mirror_min_gap) {
      out.push_back(make("MIRROR-GAP", Severity::error, "mirror", um(m.gap_to_wires), um(lim::mirror_min_gap), "um",
                         "mirror must clear the wires by more than this to avoid shorts"));
    }
    const double cm2 = m.region.area() * 1e4;
    if (m.region.area() < lim::mirror_min_area) {
      out.push_back(make("MIRROR-AREA", Severity::warning, "mirror", cm2, lim::mirror_min_area * 1e4, "cm2",
                         "mirror smaller than the reflected MOT beams"));
    }
    if (m.coating_height > lim::structure_max_height) {
      out.push_back(make("HEIGHT-MIRROR", Severity::error, "mirror", um(m.coating_height),
                         um(lim::structure_max_height), "um", "mirror coating stands too tall"));
    }
  }
  const Rect& ext = layout.substrate.extent;
  for (const auto& pad : layout.pads) {
    const Vec2 lo = pad.region.lo() - ext.lo();
    const Vec2 hi = ext.hi() - pad.region.hi();
    const double d = std::min({lo.x(), lo.y(), hi.x(), hi.y()});
    if (d < lim::pad_edge_clearance) {
      out.push_back(make("PAD-EDGE", Severity::warning, pad.id, um(d), um(lim::pad_edge_clearance), "um",
                         "resist beads near the edge; the pad may not develop cleanly"));
    }
  }
  for (const auto& p : layout.paths) {
    if (p.height > lim::structure_max_height) {
      out.push_back(make("HEIGHT-MIRROR", Severity::error, p.id, um(p.height), um(lim::structure_max_height), "um",
                         "structure would block the beams reflected off the surface"));
    }
  }
  sort_violations(out);
  return out;
}

/// Every rule for one technique, sorted.
inline std::vector<DrcViolation> run_drc(const ChipLayout& layout, const TechniqueSpec& t) {
  std::vector<DrcViolation> all;
  for (auto part : {check_current_density(layout), check_feature_rules(layout, t), mirror_lint(layout),
                    check_geometry(layout)}) {
    all.insert(all.end(), part.begin(), part.end());
  }
  sort_violations(all);
  return all;
}

// ---------------------------------------------------------------------------
// Technique choice

/// First matching region wins: wide and thin -> wet etch; narrow and at most
/// 1.5 um -> lift-off; taller than 1.5 um -> electroplating; the rest -> ion
/// milling. Heights above 5 um are infeasible.
inline TechniqueSpec recommend_technique(double width, double height) {
  if (!(width > 0.0 && height > 0.0)) throw ValidationError("technique", "width and height must be positive");
  if (height > drc_limits::structure_max_height) {
    throw Infeasible("height " + drc_detail::um_text(height) + " exceeds the " +
                     drc_detail::um_text(drc_limits::structure_max_height) + " limit for structures near the mirror");
  }
  if (width >= 30e-6 && height <= 1e-6) return TechniqueSpec::of(Technique::wet_etch);
  if (width < 10e-6 && height <= 1.5e-6) return TechniqueSpec::of(Technique::lift_off);
  if (height > 1.5e-6) return TechniqueSpec::of(Technique::electroplating);
  return TechniqueSpec::of(Technique::ion_mill);
}

/// Recommendation for the narrowest and tallest wires of a layout.
inline TechniqueSpec recommend_technique(const ChipLayout& layout) {
  if (layout.paths.empty()) throw ValidationError("technique", "layout has no wires");
  double w = std::numeric_limits<double>::infinity(), h = 0.0;
  for (const auto& p : layout.paths) w = std::min(w, p.width), h = std::max(h, p.height);
  return recommend_technique(w, h);
}

// ---------------------------------------------------------------------------
// Power and bonding

struct PathPower {
  std::string path_id;
  double length = 0.0;      // m
  double resistance = 0.0;  // ohm
  double power = 0.0;       // W
};

struct PowerReport {
  std::vector<PathPower> paths;
  double total_power = 0.0;
  double conductivity_ratio = 0.0;  // AlN over sapphire
  std::string thermal_note;
};

/// Centerline length with arcs measured exactly rather than by chords.
inline double exact_length(const WirePath& path) {
  double len = 0.0;
  std::optional<Vec2> last;
  for (const auto& e : path.centerline) {
    if (last) len += (element_start(e) - *last).norm();
    if (const auto* arc = std::get_if<Arc>(&e)) len += arc->length();
    last = element_end(e);
  }
  return len;
}

inline PowerReport power_report(const ChipLayout& layout, double resistivity = drc_limits::gold_resistivity) {
  PowerReport r;
  for (const auto& p : layout.paths) {
    PathPower pp;
    pp.path_id = p.id;
    pp.length = exact_length(p);
    pp.resistance = resistivity * pp.length / p.cross_section();
    pp.power = p.current * p.current * pp.resistance;
    r.total_power += pp.power;
    r.paths.push_back(pp);
  }
  r.conductivity_ratio = materials::aln_thermal_conductivity / materials::sapphire_thermal_conductivity;
  const auto& s = layout.substrate;
  char buf[256];
  if (s.material == SubstrateMaterial::aluminum_nitride) {
    std::snprintf(buf, sizeof buf,
                  "substrate aln: thermal conductivity %.4g W/(m K), %.3g times that of sapphire", s.thermal_conductivity,
                  r.conductivity_ratio);
  } else {
    std::snprintf(buf, sizeof buf,
                  "substrate sapphire: thermal conductivity %.4g W/(m K); aln would conduct heat %.3g times better",
                  s.thermal_conductivity, r.conductivity_ratio);
  }
  r.thermal_note = buf;
  return r;
}

struct PadBonds {
  std::string pad_id;
  double current = 0.0;
  int bonds = 0;
};

/// Bonds to carry `current`: enough to share it at bond_current each, at
/// least one, plus one spare whenever current flows.
inline int bonds_for(double current, double bond_current = drc_limits::bond_current) {
  if (!(current >= 0.0)) throw ValidationError("bond plan", "pad current must be non-negative");
  if (!(bond_current > 0.0)) throw ValidationError("bond plan", "bond current must be positive");
  // the small slack keeps 1.0 / 0.2 from rounding up to 6
  const int carry = std::max(1, static_cast<int>(std::ceil(current / bond_current - 1e-9)));
  return carry + (current > 0.0 ? 1 : 0);
}

inline std::vector<PadBonds> bond_plan(const std::vector<PadSpec>& pads, double bond_current = drc_limits::bond_current) {
  std::vector<PadBonds> out;
  for (const auto& p : pads) {
    if (!(p.current >= 0.0)) throw ValidationError("pad " + p.id, "pad current must be non-negative");
    out.push_back({p.id, p.current, bonds_for(p.current, bond_current)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Process recipes

/// A printed quantity, kept in its printed unit. lo == hi unless a range.
struct Quantity {
  double lo = 0.0;
  double hi = 0.0;
  std::string unit;

  static Quantity of(double v, std::string u) { return {v, v, std::move(u)}; }
  static Quantity range(double a, double b, std::string u) { return {a, b, std::move(u)}; }

  bool is_range() const { return lo != hi; }

  /// SI scale of the printed unit.
  double scale() const {
    if (unit == "min") return 60.0;
    if (unit == "h") return 3600.0;
    if (unit == "mA") return 1e-3;
    if (unit == "nm") return 1e-9;
    if (unit == "um") return 1e-6;
    return 1.0;  // s, C, rpm, A
  }
  double si_lo() const { return lo * scale(); }
  double si_hi() const { return hi * scale(); }

  std::string text() const {
    return is_range() ? drc_detail::num(lo) + " to " + drc_detail::num(hi) + " " + unit
                      : drc_detail::num(lo) + " " + unit;
  }

  friend bool operator==(const Quantity&, const Quantity&) = default;
};

struct RecipeStep {
  int ordinal = 0;
  std::string action;
  std::string material;  // resist, solution or source
  std::optional<Quantity> temperature;  // C
  std::optional<Quantity> duration;     // s, min or h
  std::optional<Quantity> speed;        // rpm
  std::optional<Quantity> current;      // mA
  std::optional<Quantity> thickness;    // nm or um
  std::string note;

  std::optional<double> duration_s() const { return duration ? std::optional(duration->si_lo()) : std::nullopt; }
  std::optional<double> temperature_c() const { return temperature ? std::optional(temperature->lo) : std::nullopt; }
  std::optional<double> speed_rpm() const { return speed ? std::optional(speed->lo) : std::nullopt; }
  std::optional<double> current_a() const { return current ? std::optional(current->si_lo()) : std::nullopt; }
};

struct Recipe {
  Technique technique = Technique::wet_etch;
  std::vector<RecipeStep> steps;
  std::vector<std::string> notes;
};

namespace drc_detail {

struct StepBuilder {
  std::vector<RecipeStep> steps;

  RecipeStep& add(std::string action, std::string material = {}) {
    RecipeStep s;
    s.ordinal = static_cast<int>(steps.size()) + 1;
    s.action = std::move(action);
    s.material = std::move(material);
    steps.push_back(std::move(s));
    return steps.back();
  }
};

}  // namespace drc_detail

/// Step-by-step process for a technique, parameters as originally printed.
inline Recipe emit_process_recipe(Technique t) {
  using Q = Quantity;
  drc_detail::StepBuilder b;
  Recipe r;
  r.technique = t;

  const auto positive_front_end = [&]() {
    auto& clean = b.add("clean", "ozone dry stripper");
    clean.temperature = Q::of(65, "C");
    clean.duration = Q::of(5, "min");
    clean.note = "removes organics before chromium and gold";
    b.add("evaporate", "chromium then gold").note = "gold thickness set by the current density the wires must carry";
    auto& adhesion = b.add("bake");
    adhesion.temperature = Q::of(180, "C");
    adhesion.duration = Q::of(5, "min");
    adhesion.note = "resist adhesion to gold";
    auto& spin = b.add("spin", "AZ5214");
    spin.speed = Q::of(5000, "rpm");
    spin.duration = Q::of(50, "s");
    auto& bake = b.add("bake");
    bake.temperature = Q::of(95, "C");
    bake.duration = Q::of(2, "min");
    auto& expose = b.add("expose", "photomask, wires opaque");
    expose.duration = Q::range(10, 20, "s");
    expose.note = "at 16 mW/cm2 lamp intensity; times approximate";
    auto& develop = b.add("develop", "AZ327 MIF");
    develop.duration = Q::of(30, "s");
  };

  switch (t) {
    case Technique::wet_etch: {
      positive_front_end();
      b.add("etch", "Gold Etchant TFA").note = "a few tens of seconds, until only dull gray chromium remains";
      b.add("etch", "CR-7S chrome etchant");
      b.add("strip", "acetone");
      r.notes.push_back("transparency mask; wires no narrower than 30-40 um and under 1 um tall");
      break;
    }
    case Technique::ion_mill: {
      positive_front_end();
      b.add("mill", "argon ions").note = "resist must stay thicker than the gold; do not let the substrate overheat";
      b.add("strip", "acetone");
      r.notes.push_back("features limited by resist resolution; height by the evaporated gold");
      break;
    }
    case Technique::lift_off: {
      auto& spin = b.add("spin", "AZ5214");
      spin.speed = Q::of(5000, "rpm");
      spin.duration = Q::of(45, "s");
      spin.note = "2000 rpm gives resist thick enough for 1.5 um wires";
      auto& bake1 = b.add("bake");
      bake1.temperature = Q::of(100, "C");
      bake1.duration = Q::of(45, "s");
      auto& expose = b.add("expose", "photomask, wires opaque");
      expose.duration = Q::of(10, "s");
      auto& bake2 = b.add("bake");
      bake2.temperature = Q::of(123, "C");
      bake2.duration = Q::of(45, "s");
      bake2.note = "image reversal";
      auto& flood = b.add("flood expose", "no mask");
      flood.duration = Q::of(2.1, "min");
      auto& develop = b.add("develop");
      develop.duration = Q::range(25, 35, "s");
      develop.note = "done when the wire pattern shows; undercut appears as a bright outline";
      auto& clean = b.add("clean", "ozone dry stripper");
      clean.temperature = Q::of(65, "C");
      clean.duration = Q::of(5, "min");
      auto& evap = b.add("evaporate", "gold");
      evap.note = "height limited by resist thickness; 1.5 um took three to four hours of boats";
      b.add("lift off", "heated acetone").note = "spray while submerged; remove all gold flakes before drying";
      r.notes.push_back("wires need not exceed 1 um height and are narrower than 10 um");
      break;
    }
    case Technique::electroplating: {
      b.add("clean", "ozone dry stripper");
      auto& seed = b.add("evaporate", "gold seed on chromium");
      seed.thickness = Q::range(100, 150, "nm");
      seed.note = "50 A chromium adhesion layer";
      auto& spin = b.add("spin", "AZ9200");
      spin.thickness = Q::range(4, 24, "um");
      spin.note = "resist must stay taller than the plated wires";
      auto& expose = b.add("expose", "photomask, wires transparent");
      expose.duration = Q::of(60, "s");
      expose.note = "longer for thicker resist";
      b.add("develop", "AZ400K:water 1:4").note = "a minute or more; exposed resist turns hazy, then dissolves";
      auto& dry = b.add("dry etch", "ozone");
      dry.duration = Q::of(18, "s");
      dry.note = "room temperature; clears masking films between wires spaced by 3 um";
      auto& plate = b.add("plate", "TG-25E sodium gold sulfite");
      plate.temperature = Q::of(60, "C");
      plate.current = Q::range(0.1, 0.2, "mA");
      plate.duration = Q::range(10, 30, "min");
      plate.note = "platinum anode, magnetic stirring, agitate gently";
      b.add("strip", "acetone").note = "room temperature; brief ultrasound if resist sticks between wires";
      b.add("rinse", "IPA then methanol");
      auto& seed_etch = b.add("etch", "gold etchant");
      seed_etch.duration = Q::of(15, "s");
      seed_etch.note = "removes the seed layer";
      b.add("etch", "chrome etchant");
      r.notes.push_back("75% yield, height accuracy +/-0.5 um");
      break;
    }
  }
  r.steps = std::move(b.steps);
  return r;
}

/// "# technique", "# note" lines, then one line per step:
/// ordinal<TAB>action<TAB>material<TAB>key=value; ...
inline void write_recipe(std::ostream& os, const Recipe& r) {
  os << "# recipe " << to_string(r.technique) << '\n';
  for (const auto& n : r.notes) os << "# note: " << n << '\n';
  for (const auto& s : r.steps) {
    std::string params;
    const auto put = [&](const char* key, const std::optional<Quantity>& q) {
      if (!q) return;
      if (!params.empty()) params += "; ";
      params += std::string(key) + "=" + q->text();
    };
    put("temperature", s.temperature);
    put("speed", s.speed);
    put("duration", s.duration);
    put("current", s.current);
    put("thickness", s.thickness);
    if (!s.note.empty()) params += (params.empty() ? "" : "; ") + std::string("note=") + s.note;
    os << s.ordinal << '\t' << s.action << '\t' << (s.material.empty() ? "-" : s.material) << '\t'
       << (params.empty() ? "-" : params) << '\n';
  }
}

}  // namespace atomchip

#endif  // ATOMCHIP_DRC_HPP
