// atomchip: analyze, check and generate atom-chip wire layouts.
//
// Exit status: 0 success, 1 input error, 2 negative result (no trap, DRC
// errors, infeasible technique).

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "atomchip/drc.hpp"
#include "atomchip/layout_io.hpp"
#include "atomchip/magnetostatics.hpp"
#include "atomchip/patterns.hpp"
#include "atomchip/trap.hpp"

using namespace atomchip;
using json = nlohmann::ordered_json;

namespace {

enum ExitCode { exit_ok = 0, exit_input = 1, exit_negative = 2 };

/// Controlled early exit carrying a status and a message for stderr.
struct Exit {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, std::string message) { throw Exit{code, std::move(message)}; }

struct Globals {
  std::string layout_path;
  std::string species = "cesium";
  std::string out_path;
  bool json = false;
};

// ---------------------------------------------------------------------------
// Parsing helpers

std::optional<double> to_number(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// suffix -> units per SI unit; dividing keeps "15um" identical to units::from_um(15)
using UnitTable = std::vector<std::pair<std::string, double>>;

const UnitTable length_units = {{"um", 1e6}, {"mm", 1e3}, {"nm", 1e9}, {"m", 1.0}};
const UnitTable current_units = {{"A", 1.0}, {"mA", 1e3}};
const UnitTable field_units = {{"G", 1e4}, {"mT", 1e3}, {"T", 1.0}};
const UnitTable angle_units = {{"deg", 1.0}};

/// "10um", "0.5mm", "136.97G", or a bare number in the first listed unit.
double quantity(const std::string& text, const UnitTable& table, const std::string& what) {
  auto by_length = table;
  std::stable_sort(by_length.begin(), by_length.end(),
                   [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
  for (const auto& [suffix, scale] : by_length) {
    if (text.size() > suffix.size() && text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0) {
      if (auto v = to_number(std::string_view(text).substr(0, text.size() - suffix.size()))) return *v / scale;
    }
  }
  if (auto v = to_number(text)) return *v / table.front().second;
  fail(exit_input, "bad " + what + " '" + text + "' (expected a number with unit " + table.front().first + ")");
}

std::vector<double> number_list(const std::string& text, std::size_t count, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    auto v = to_number(item);
    if (!v) fail(exit_input, "bad " + what + " '" + text + "'");
    out.push_back(*v);
  }
  if (count && out.size() != count) {
    fail(exit_input, what + " needs " + std::to_string(count) + " comma-separated numbers, got '" + text + "'");
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(exit_input, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

ChipLayout load_layout(const Globals& g) {
  if (g.layout_path.empty()) fail(exit_input, "--layout is required");
  return parse_layout(read_file(g.layout_path));
}

/// Writes to --out when given, otherwise stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) fail(exit_input, "cannot write '" + path + "'");
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }
  void finish() {
    os().flush();
    if (!os()) fail(exit_input, "write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

json scalar(const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  if (auto d = to_number(v)) return *d;
  return v;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeArgs {
  std::string seed;
  std::string box;
  std::size_t grid = 21;
};

/// Traps are only sought above the tops of the wires.
double search_floor(const ChipLayout& layout) {
  double tallest = 0.0;
  for (const auto& p : layout.paths) tallest = std::max(tallest, p.height);
  return std::max(0.1e-6, tallest);
}

SeedBox default_box(const ChipLayout& layout) {
  if (layout.paths.empty()) return {Vec3(-1e-3, -1e-3, 1e-6), Vec3(1e-3, 1e-3, 1e-3)};
  geometry::Box2 bb;
  for (const auto& p : layout.paths) {
    for (const auto& v : centerline_polyline(p, 1e-6)) bb.expand(v);
  }
  const Vec2 span = bb.hi - bb.lo;
  const double pad = std::max(0.1 * span.maxCoeff(), 50e-6);
  const double z_hi = std::max(span.maxCoeff(), 100e-6);
  return {Vec3(bb.lo.x() - pad, bb.lo.y() - pad, 1.05 * search_floor(layout)),
          Vec3(bb.hi.x() + pad, bb.hi.y() + pad, z_hi)};
}

int cmd_analyze(const Globals& g, const AnalyzeArgs& a) {
  const auto species = find_species(g.species);
  if (!species) fail(exit_input, "unknown species '" + g.species + "' (cesium, rubidium87, sodium23)");
  const ChipLayout layout = load_layout(g);
  const FieldModel model(layout);

  std::vector<Vec3> seeds;
  if (!a.seed.empty()) {
    const auto s = number_list(a.seed, 3, "--seed");
    seeds.push_back(Vec3(units::from_um(s[0]), units::from_um(s[1]), units::from_um(s[2])));
  } else {
    SeedBox box = default_box(layout);
    if (!a.box.empty()) {
      const auto b = number_list(a.box, 6, "--box");
      box.lo = Vec3(units::from_um(b[0]), units::from_um(b[1]), units::from_um(b[2]));
      box.hi = Vec3(units::from_um(b[3]), units::from_um(b[4]), units::from_um(b[5]));
    }
    if (!(box.lo.z() > 0.0 && box.hi.z() > box.lo.z())) fail(exit_input, "--box needs 0 < zlo < zhi");
    box.count = a.grid;
    seeds = coarse_seeds(model, box);
    if (seeds.empty()) fail(exit_negative, "no trap found: no local minimum of |B| on the seeding grid");
  }

  MinimizerOptions opt;
  opt.z_floor = search_floor(layout);
  TrapReport report;
  try {
    // a single user seed keeps its own diagnostics
    const auto tp = seeds.size() == 1 ? find_minimum(model, seeds.front(), opt) : find_minimum(model, seeds, opt);
    report = characterize_trap(model, *species, tp);
  } catch (const SeedInsideWire& e) {
    fail(exit_input, std::string("bad seed: ") + e.what());
  } catch (const NoTrapFound& e) {
    fail(exit_negative, std::string("no trap found: ") + e.what());
  } catch (const NotAMinimum& e) {
    fail(exit_negative, std::string("no trap found: ") + e.what());
  }

  Sink out(g.out_path);
  if (g.json) {
    json j;
    for (const auto& [k, v] : report_fields(report)) {
      if (k.rfind("axis_", 0) == 0) {
        j[k] = json::array();
        for (double c : number_list(v, 3, k)) j[k].push_back(c);
      } else {
        j[k] = scalar(v);
      }
    }
    out.os() << j.dump(2) << '\n';
  } else {
    out.os() << render_report_text(report);
  }
  out.finish();
  return exit_ok;
}

// ---------------------------------------------------------------------------
// drc

struct DrcArgs {
  std::string technique = "auto";
  std::string mask;
  double bond_current = drc_limits::bond_current;
  double resistivity = drc_limits::gold_resistivity;
};

TechniqueSpec technique_from(const std::string& name) {
  const auto t = parse_technique(name);
  if (!t) fail(exit_input, "unknown technique '" + name + "' (wet_etch, ion_mill, lift_off, electroplating)");
  return TechniqueSpec::of(*t);
}

int cmd_drc(const Globals& g, const DrcArgs& a) {
  const ChipLayout layout = load_layout(g);
  TechniqueSpec tech;
  std::string how = "declared";
  if (a.technique == "auto") {
    try {
      tech = recommend_technique(layout);
      how = "recommended";
    } catch (const Infeasible& e) {
      tech = TechniqueSpec::of(Technique::electroplating);
      how = std::string("no technique fits: ") + e.what();
    }
  } else {
    tech = technique_from(a.technique);
  }
  if (!a.mask.empty()) {
    const auto m = parse_mask(a.mask);
    if (!m) fail(exit_input, "unknown mask '" + a.mask + "' (transparency, chrome)");
    tech.mask = *m;
  }

  const auto violations = run_drc(layout, tech);
  const auto bonds = bond_plan(layout.pads, a.bond_current);
  const auto power = power_report(layout, a.resistivity);
  const auto errors = std::count_if(violations.begin(), violations.end(),
                                    [](const DrcViolation& d) { return d.severity == Severity::error; });
  const auto warnings = static_cast<long>(violations.size()) - errors;

  Sink out(g.out_path);
  if (g.json) {
    json j;
    j["technique"] = to_string(tech.name);
    j["technique_source"] = how;
    j["mask"] = to_string(tech.mask);
    j["violations"] = json::array();
    for (const auto& d : violations) {
      j["violations"].push_back({{"rule_id", d.rule_id},
                                 {"severity", to_string(d.severity)},
                                 {"subject", d.subject},
                                 {"measured", d.measured},
                                 {"limit", d.limit},
                                 {"unit", d.unit},
                                 {"message", d.message}});
    }
    j["bonds"] = json::array();
    for (const auto& b : bonds) j["bonds"].push_back({{"pad", b.pad_id}, {"current_A", b.current}, {"bonds", b.bonds}});
    j["power"] = json::array();
    for (const auto& p : power.paths) {
      j["power"].push_back({{"path", p.path_id}, {"length_um", units::to_um(p.length)}, {"resistance_ohm", p.resistance},
                            {"power_W", p.power}});
    }
    j["total_power_W"] = power.total_power;
    j["thermal_note"] = power.thermal_note;
    j["errors"] = errors;
    j["warnings"] = warnings;
    out.os() << j.dump(2) << '\n';
  } else {
    auto& os = out.os();
    write_drc_report(os, violations);
    const auto n = [](double v) { return drc_detail::num(v); };
    os << "# technique " << to_string(tech.name) << " (" << how << "), " << to_string(tech.mask) << " mask\n";
    for (const auto& b : bonds) os << "# bonds " << b.pad_id << ' ' << n(b.current) << " A: " << b.bonds << '\n';
    for (const auto& p : power.paths) {
      os << "# power " << p.path_id << ' ' << n(p.resistance) << " ohm " << n(p.power) << " W\n";
    }
    os << "# power total " << n(power.total_power) << " W\n";
    os << "# thermal " << power.thermal_note << '\n';
    os << "# summary " << errors << " errors, " << warnings << " warnings\n";
  }
  out.finish();
  return errors > 0 ? exit_negative : exit_ok;
}

// ---------------------------------------------------------------------------
// fieldmap

struct FieldmapArgs {
  std::string grid;
  unsigned threads = 0;
};

GridSpec parse_grid(const std::string& text) {
  GridSpec grid;
  std::stringstream ss(text);
  int axis = 0;
  for (std::string part; std::getline(ss, part, ',');) {
    if (axis > 2) fail(exit_input, "--grid has more than three axes");
    std::stringstream ps(part);
    std::vector<std::string> f;
    for (std::string t; std::getline(ps, t, ':');) f.push_back(t);
    std::optional<double> lo, hi, n;
    if (f.size() == 3) lo = to_number(f[0]), hi = to_number(f[1]), n = to_number(f[2]);
    if (!lo || !hi || !n || *n < 1 || *n != std::floor(*n)) {
      fail(exit_input, "bad --grid axis '" + part + "' (expected lo:hi:count in um)");
    }
    if (*n == 1 && *lo != *hi) fail(exit_input, "--grid axis '" + part + "' has one sample but lo != hi");
    grid.lo[axis] = units::from_um(*lo);
    grid.hi[axis] = units::from_um(*hi);
    grid.count[static_cast<std::size_t>(axis)] = static_cast<std::size_t>(*n);
    ++axis;
  }
  if (axis != 3) fail(exit_input, "--grid needs x, y and z axes: xlo:xhi:nx,ylo:yhi:ny,zlo:zhi:nz");
  if (grid.size() > 50'000'000) fail(exit_input, "--grid is too large");
  return grid;
}

int cmd_fieldmap(const Globals& g, const FieldmapArgs& a) {
  const ChipLayout layout = load_layout(g);
  const GridSpec grid = parse_grid(a.grid);
  const FieldModel model(layout);
  const auto samples = field_grid(model, grid, a.threads);
  Sink out(g.out_path);
  if (g.json) {
    json arr = json::array();
    for (const auto& s : samples) {
      json row = {{"x_um", units::to_um(s.position.x())}, {"y_um", units::to_um(s.position.y())},
                  {"z_um", units::to_um(s.position.z())}};
      if (s.valid) {
        row["Bx_G"] = units::to_gauss(s.field.x());
        row["By_G"] = units::to_gauss(s.field.y());
        row["Bz_G"] = units::to_gauss(s.field.z());
        row["Bmag_G"] = units::to_gauss(s.field.norm());
      } else {
        row["excluded"] = true;
      }
      arr.push_back(row);
    }
    out.os() << arr.dump() << '\n';
  } else {
    write_field_csv(out.os(), samples);
  }
  out.finish();
  return exit_ok;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
  std::string pattern;
  bool defaults = false;
  std::map<std::string, std::string> values;  // option name -> raw text
  std::string currents;
};

SubstrateMaterial material_from(const std::string& s) {
  if (s == "aln") return SubstrateMaterial::aluminum_nitride;
  if (s == "sapphire") return SubstrateMaterial::sapphire;
  fail(exit_input, "unknown substrate '" + s + "' (aln, sapphire)");
}

int cmd_generate(const Globals& g, const GenerateArgs& a) {
  const auto has = [&](const char* k) { return a.values.count(k) > 0; };
  const auto len = [&](const char* k, double& dst) {
    if (has(k)) dst = quantity(a.values.at(k), length_units, std::string("--") + k);
  };
  const auto amp = [&](const char* k, double& dst) {
    if (has(k)) dst = quantity(a.values.at(k), current_units, std::string("--") + k);
  };
  const auto tesla = [&](const char* k, double& dst) {
    if (has(k)) dst = quantity(a.values.at(k), field_units, std::string("--") + k);
  };
  const auto substrate = [&](SubstrateMaterial& m, double& size) {
    if (has("substrate")) m = material_from(a.values.at("substrate"));
    len("substrate-size", size);
  };
  const auto reject = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [k, v] : a.values) {
      if (std::find_if(allowed.begin(), allowed.end(), [&](const char* x) { return k == x; }) == allowed.end()) {
        fail(exit_input, "--" + k + " does not apply to " + a.pattern);
      }
    }
  };

  // every pattern starts from the reference parameters; flags override them
  GeneratedLayout out_layout;
  if (a.pattern == "u-trap") {
    reject({"width", "height", "current", "base", "arm", "bias", "substrate", "substrate-size"});
    auto p = UTrapParams::reference_defaults();
    len("width", p.width), len("height", p.height), amp("current", p.current);
    len("base", p.base_length), len("arm", p.arm_length), tesla("bias", p.bias);
    substrate(p.material, p.substrate_size);
    out_layout = gen_u_trap(p);
  } else if (a.pattern == "side-guide") {
    reject({"width", "height", "current", "length", "bias", "substrate", "substrate-size"});
    SideGuideParams p;
    len("width", p.width), len("height", p.height), amp("current", p.current);
    len("length", p.length), tesla("bias", p.bias);
    substrate(p.material, p.substrate_size);
    out_layout = gen_side_guide(p);
  } else if (a.pattern == "ioffe") {
    reject({"r-inner", "r-outer", "current", "bias", "width", "height", "span", "lead-length", "lead-pitch",
            "outer-gap", "substrate", "substrate-size"});
    auto p = IoffeParams::reference_defaults();
    len("r-inner", p.r_inner), len("r-outer", p.r_outer), amp("current", p.current);
    if (has("bias")) p.bias = Vec3(0.0, 0.0, quantity(a.values.at("bias"), field_units, "--bias"));
    len("width", p.wire_width), len("height", p.wire_height);
    if (has("span")) p.inner_span_deg = quantity(a.values.at("span"), angle_units, "--span");
    len("lead-length", p.lead_length), len("lead-pitch", p.lead_pitch), len("outer-gap", p.outer_gap);
    substrate(p.material, p.substrate_size);
    out_layout = gen_wl_ioffe(p);
  } else if (a.pattern == "splitter") {
    reject({"wires", "width", "height", "spacing", "length", "substrate", "substrate-size"});
    auto p = SplitterParams::reference_defaults();
    if (has("wires")) {
      const auto n = to_number(a.values.at("wires"));
      if (!n || *n < 1 || *n != std::floor(*n) || *n > 1000) fail(exit_input, "bad --wires '" + a.values.at("wires") + "'");
      p.wire_count = static_cast<int>(*n);
    }
    len("width", p.width), len("height", p.height), len("spacing", p.spacing), len("length", p.length);
    if (!a.currents.empty()) {
      std::stringstream ss(a.currents);
      for (std::string item; std::getline(ss, item, ',');) p.currents.push_back(quantity(item, current_units, "--currents"));
    }
    substrate(p.material, p.substrate_size);
    out_layout = gen_five_wire_splitter(p);
  } else {
    fail(exit_input, "unknown pattern '" + a.pattern + "' (u-trap, side-guide, ioffe, splitter)");
  }
  if (!a.currents.empty() && a.pattern != "splitter") fail(exit_input, "--currents applies to splitter only");

  for (const auto& w : out_layout.warnings) std::cerr << "warning: " << w << '\n';
  Sink out(g.out_path);
  if (g.json) {
    json j;
    j["pattern"] = a.pattern;
    j["notes"] = out_layout.notes;
    j["warnings"] = out_layout.warnings;
    j["layout"] = serialize_layout(out_layout.layout);
    out.os() << j.dump(2) << '\n';
  } else {
    out.os() << render_generated(out_layout);
  }
  out.finish();
  return exit_ok;
}

// ---------------------------------------------------------------------------
// recipe, recommend

int cmd_recipe(const Globals& g, const std::string& technique) {
  const auto recipe = emit_process_recipe(technique_from(technique).name);
  Sink out(g.out_path);
  if (g.json) {
    json j;
    j["technique"] = to_string(recipe.technique);
    j["notes"] = recipe.notes;
    j["steps"] = json::array();
    for (const auto& s : recipe.steps) {
      json step = {{"ordinal", s.ordinal}, {"action", s.action}};
      if (!s.material.empty()) step["material"] = s.material;
      const auto put = [&](const char* key, const std::optional<Quantity>& q) {
        if (q) step[key] = {{"min", q->lo}, {"max", q->hi}, {"unit", q->unit}};
      };
      put("temperature", s.temperature);
      put("speed", s.speed);
      put("duration", s.duration);
      put("current", s.current);
      put("thickness", s.thickness);
      if (s.duration_s()) step["duration_s"] = *s.duration_s();
      if (!s.note.empty()) step["note"] = s.note;
      j["steps"].push_back(step);
    }
    out.os() << j.dump(2) << '\n';
  } else {
    write_recipe(out.os(), recipe);
  }
  out.finish();
  return exit_ok;
}

struct RecommendArgs {
  std::string width;
  std::string height;
};

int cmd_recommend(const Globals& g, const RecommendArgs& a) {
  TechniqueSpec t;
  try {
    if (!a.width.empty() || !a.height.empty()) {
      if (a.width.empty() || a.height.empty()) fail(exit_input, "give both --width and --height, or --layout");
      t = recommend_technique(quantity(a.width, length_units, "--width"), quantity(a.height, length_units, "--height"));
    } else {
      t = recommend_technique(load_layout(g));
    }
  } catch (const Infeasible& e) {
    fail(exit_negative, std::string("infeasible: ") + e.what());
  }
  const std::vector<std::pair<std::string, std::string>> kv = {
      {"technique", std::string(to_string(t.name))},
      {"min_width_um", drc_detail::num(units::to_um(t.min_width))},
      {"max_height_um", drc_detail::num(units::to_um(t.max_height))},
      {"min_spacing_um", drc_detail::num(units::to_um(t.min_spacing))},
      {"mask", std::string(to_string(t.mask))},
      {"height_tolerance_um", drc_detail::num(units::to_um(t.height_tolerance))},
      {"notes", t.notes},
  };
  Sink out(g.out_path);
  if (g.json) {
    json j;
    for (const auto& [k, v] : kv) j[k] = k == "technique" || k == "mask" || k == "notes" ? json(v) : scalar(v);
    out.os() << j.dump(2) << '\n';
  } else {
    for (const auto& [k, v] : kv) out.os() << k << '=' << v << '\n';
  }
  out.finish();
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Atom-chip layout analysis, design rules and pattern generation"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  Globals g;
  app.add_option("--layout", g.layout_path, "Layout file");
  app.add_option("--species", g.species, "Atomic species (cesium, rubidium87, sodium23)");
  app.add_option("--out", g.out_path, "Write output here instead of stdout");
  app.add_flag("--json", g.json, "Machine-readable JSON output");

  AnalyzeArgs analyze_args;
  auto* analyze = app.add_subcommand("analyze", "Find and characterize the trap minimum");
  analyze->add_option("--seed", analyze_args.seed, "Start point x,y,z in um (skips the coarse scan)");
  analyze->add_option("--box", analyze_args.box, "Coarse-scan box xlo,ylo,zlo,xhi,yhi,zhi in um");
  analyze->add_option("--grid", analyze_args.grid, "Coarse-scan samples per axis")->check(CLI::Range(2, 201));

  DrcArgs drc_args;
  auto* drc = app.add_subcommand("drc", "Run fabrication design rules");
  drc->add_option("--technique", drc_args.technique, "wet_etch, ion_mill, lift_off, electroplating or auto");
  drc->add_option("--mask", drc_args.mask, "Override the mask kind (transparency, chrome)");
  drc->add_option("--bond-current", drc_args.bond_current, "Current per wire bond (A)")->check(CLI::PositiveNumber);
  drc->add_option("--resistivity", drc_args.resistivity, "Wire resistivity (ohm m)")->check(CLI::PositiveNumber);

  FieldmapArgs field_args;
  auto* fieldmap = app.add_subcommand("fieldmap", "Sample the field on a grid and write CSV");
  fieldmap->add_option("--grid", field_args.grid, "xlo:xhi:nx,ylo:yhi:ny,zlo:zhi:nz in um")->required();
  fieldmap->add_option("--threads", field_args.threads, "Worker threads (0 = all cores)");

  GenerateArgs gen_args;
  auto* generate = app.add_subcommand("generate", "Write a parametric layout");
  generate->add_option("pattern", gen_args.pattern, "u-trap, side-guide, ioffe or splitter")->required();
  generate->add_flag("--paper-defaults", gen_args.defaults, "Reference parameters (also the starting point for overrides)");
  for (const char* name : {"width", "height", "current", "base", "arm", "bias", "length", "r-inner", "r-outer", "span",
                           "lead-length", "lead-pitch", "outer-gap", "wires", "spacing", "substrate", "substrate-size"}) {
    const std::string key = name;
    generate->add_option_function<std::string>(
        std::string("--") + name, [&gen_args, key](const std::string& v) { gen_args.values[key] = v; },
        "Override " + key + " (units as in layout files, e.g. 10um, 1A, 20G)");
  }
  generate->add_option("--currents", gen_args.currents, "Per-wire splitter currents, comma separated");

  std::string recipe_technique;
  auto* recipe = app.add_subcommand("recipe", "Print the process recipe for a technique");
  recipe->add_option("technique,--technique", recipe_technique, "wet_etch, ion_mill, lift_off, electroplating")
      ->required();

  RecommendArgs rec_args;
  auto* recommend = app.add_subcommand("recommend", "Choose a fabrication technique");
  recommend->add_option("--width", rec_args.width, "Wire width (e.g. 5um)");
  recommend->add_option("--height", rec_args.height, "Wire height (e.g. 1um)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_input;
  }

  try {
    if (*analyze) return cmd_analyze(g, analyze_args);
    if (*drc) return cmd_drc(g, drc_args);
    if (*fieldmap) return cmd_fieldmap(g, field_args);
    if (*generate) return cmd_generate(g, gen_args);
    if (*recipe) return cmd_recipe(g, recipe_technique);
    if (*recommend) return cmd_recommend(g, rec_args);
  } catch (const Exit& e) {
    if (!e.message.empty()) std::cerr << "atomchip: " << e.message << '\n';
    return e.code;
  } catch (const ParseError& e) {
    std::cerr << "atomchip: " << g.layout_path << ": " << e.what() << '\n';
    return exit_input;
  } catch (const ValidationError& e) {
    std::cerr << "atomchip: invalid input: " << e.what() << '\n';
    return exit_input;
  } catch (const Infeasible& e) {
    std::cerr << "atomchip: infeasible: " << e.what() << '\n';
    return exit_negative;
  } catch (const std::exception& e) {
    std::cerr << "atomchip: " << e.what() << '\n';
    return exit_input;
  }
  return exit_input;
}
