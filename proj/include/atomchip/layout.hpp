#ifndef ATOMCHIP_LAYOUT_HPP
#define ATOMCHIP_LAYOUT_HPP

// Chip layout data model: substrate, wire paths, bias fields, mirror and pads.
//
// Coordinates: the substrate top surface is the z = 0 plane and the chip
// extent is centred on the origin. Wires occupy 0 <= z <= height; their
// current filament runs at z = height / 2. All quantities are SI.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <limits>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <type_traits>
#include <variant>
#include <vector>

#include "atomchip/errors.hpp"
#include "atomchip/geometry.hpp"
#include "atomchip/units.hpp"

namespace atomchip {

enum class SubstrateMaterial { sapphire, aluminum_nitride };

inline std::string_view to_string(SubstrateMaterial m) {
  return m == SubstrateMaterial::sapphire ? "sapphire" : "aln";
}

/// Handbook-style defaults for the two supported substrates.
namespace materials {
inline constexpr double aln_max_current_density = 2e11;        // A/m^2
inline constexpr double sapphire_max_current_density = 1e11;   // A/m^2, half of AlN
inline constexpr double aln_thermal_conductivity = 175.0;      // W/(m K), middle of 170-180
inline constexpr double aln_to_sapphire_conductivity = 4.5;
inline constexpr double sapphire_thermal_conductivity = aln_thermal_conductivity / aln_to_sapphire_conductivity;

constexpr double default_max_current_density(SubstrateMaterial m) {
  return m == SubstrateMaterial::aluminum_nitride ? aln_max_current_density : sapphire_max_current_density;
}
constexpr double default_thermal_conductivity(SubstrateMaterial m) {
  return m == SubstrateMaterial::aluminum_nitride ? aln_thermal_conductivity : sapphire_thermal_conductivity;
}
}  // namespace materials

/// Axis-aligned rectangle in the substrate plane, stored as centre and size.
struct Rect {
  Vec2 middle = Vec2::Zero();
  Vec2 size = Vec2::Zero();

  static Rect centered(const Vec2& center, double width, double height) { return {center, Vec2(width, height)}; }

  double width() const { return size.x(); }
  double height() const { return size.y(); }
  double area() const { return width() * height(); }
  Vec2 center() const { return middle; }
  Vec2 lo() const { return middle - size / 2.0; }
  Vec2 hi() const { return middle + size / 2.0; }
  bool contains(const Vec2& p) const {
    const Vec2 l = lo(), h = hi();
    return p.x() >= l.x() && p.x() <= h.x() && p.y() >= l.y() && p.y() <= h.y();
  }
  bool contains(const Rect& r) const { return contains(r.lo()) && contains(r.hi()); }

  friend bool operator==(const Rect&, const Rect&) = default;
};

struct SubstrateSpec {
  SubstrateMaterial material = SubstrateMaterial::aluminum_nitride;
  double thickness = 0.5e-3;
  Rect extent = Rect::centered(Vec2::Zero(), 25e-3, 25e-3);
  double j_max = materials::aln_max_current_density;
  double thermal_conductivity = materials::aln_thermal_conductivity;

  static SubstrateSpec make(SubstrateMaterial material, double width, double height, double thickness) {
    SubstrateSpec s;
    s.material = material;
    s.thickness = thickness;
    s.extent = Rect::centered(Vec2::Zero(), width, height);
    s.j_max = materials::default_max_current_density(material);
    s.thermal_conductivity = materials::default_thermal_conductivity(material);
    return s;
  }

  friend bool operator==(const SubstrateSpec&, const SubstrateSpec&) = default;
};

/// Circular arc element. Angles in degrees, counter-clockwise from +x; the
/// sign of (end_deg - start_deg) gives the traversal direction.
struct Arc {
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
  double start_deg = 0.0;
  double end_deg = 0.0;

  double sweep_deg() const { return end_deg - start_deg; }
  bool full_circle() const { return std::abs(sweep_deg()) == 360.0; }
  Vec2 point_at_deg(double deg) const {
    const double a = units::deg_to_rad(deg);
    return center + radius * Vec2(std::cos(a), std::sin(a));
  }
  Vec2 start_point() const { return point_at_deg(start_deg); }
  Vec2 end_point() const { return full_circle() ? start_point() : point_at_deg(end_deg); }
  double length() const { return radius * units::deg_to_rad(std::abs(sweep_deg())); }

  friend bool operator==(const Arc&, const Arc&) = default;
};

/// A centerline element: either a vertex or an arc. Consecutive elements are
/// joined by straight segments.
using PathElement = std::variant<Vec2, Arc>;

inline Vec2 element_start(const PathElement& e) {
  return std::visit([](const auto& v) -> Vec2 {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, Arc>) return v.start_point();
    else return v;
  }, e);
}

inline Vec2 element_end(const PathElement& e) {
  return std::visit([](const auto& v) -> Vec2 {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, Arc>) return v.end_point();
    else return v;
  }, e);
}

struct WirePath {
  std::string id;
  std::vector<PathElement> centerline;
  double width = 0.0;
  double height = 0.0;
  double current = 0.0;  // signed, along the centerline direction

  double cross_section() const { return width * height; }
  double filament_z() const { return height / 2.0; }
  /// Radius around the filament inside which the thin-wire model is meaningless.
  double exclusion_radius() const { return std::max(width, height) / 2.0 + 1e-9; }

  friend bool operator==(const WirePath&, const WirePath&) = default;
};

struct BiasField {
  Vec3 vector = Vec3::Zero();  // tesla

  friend bool operator==(const BiasField&, const BiasField&) = default;
};

struct MirrorSpec {
  Rect region;
  double gap_to_wires = 0.0;
  double coating_height = 0.0;

  friend bool operator==(const MirrorSpec&, const MirrorSpec&) = default;
};

struct PadSpec {
  std::string id;
  Rect region;
  std::string connected_path;
  double current = 0.0;

  friend bool operator==(const PadSpec&, const PadSpec&) = default;
};

struct ChipLayout {
  SubstrateSpec substrate;
  std::vector<WirePath> paths;
  std::vector<BiasField> bias_fields;
  std::optional<MirrorSpec> mirror;
  std::vector<PadSpec> pads;

  Vec3 total_bias() const {
    Vec3 b = Vec3::Zero();
    for (const auto& f : bias_fields) b += f.vector;
    return b;
  }

  const WirePath* find_path(std::string_view id) const {
    const auto it = std::find_if(paths.begin(), paths.end(), [&](const WirePath& p) { return p.id == id; });
    return it == paths.end() ? nullptr : &*it;
  }

  friend bool operator==(const ChipLayout&, const ChipLayout&) = default;
};

// ---------------------------------------------------------------------------
// Discretization

struct Segment {
  Vec3 a;
  Vec3 b;

  double length() const { return (b - a).norm(); }
};

/// Number of chords needed so that the sagitta r(1 - cos(theta/2)) of each
/// chord stays at or below max_chord_error. Chords never span more than 90 deg.
inline std::size_t arc_chord_count(const Arc& arc, double max_chord_error) {
  const double sweep = units::deg_to_rad(std::abs(arc.sweep_deg()));
  const double ratio = std::min(max_chord_error / arc.radius, 1.0);
  const double max_half_angle = std::acos(1.0 - ratio);
  const double max_angle = std::min(2.0 * max_half_angle, std::numbers::pi / 2.0);
  const auto n = static_cast<std::size_t>(std::ceil(sweep / max_angle - 1e-12));
  return std::max<std::size_t>(n, 1);
}

/// Centerline as a planar polyline. Arc endpoints are reproduced exactly and a
/// full circle closes on its first point.
inline std::vector<Vec2> centerline_polyline(const WirePath& path, double max_chord_error) {
  std::vector<Vec2> pts;
  for (const auto& element : path.centerline) {
    if (const auto* arc = std::get_if<Arc>(&element)) {
      const std::size_t n = arc_chord_count(*arc, max_chord_error);
      pts.push_back(arc->start_point());
      for (std::size_t i = 1; i < n; ++i) {
        pts.push_back(arc->point_at_deg(arc->start_deg + arc->sweep_deg() * static_cast<double>(i) / static_cast<double>(n)));
      }
      pts.push_back(arc->end_point());
    } else {
      pts.push_back(std::get<Vec2>(element));
    }
  }
  return pts;
}

/// Straight filament segments at z = height/2 replacing the centerline.
inline std::vector<Segment> discretize(const WirePath& path, double max_chord_error) {
  const auto pts = centerline_polyline(path, max_chord_error);
  const double z = path.filament_z();
  std::vector<Segment> segs;
  segs.reserve(pts.size());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    segs.push_back({Vec3(pts[i].x(), pts[i].y(), z), Vec3(pts[i + 1].x(), pts[i + 1].y(), z)});
  }
  return segs;
}

inline double path_length(const WirePath& path, double max_chord_error = 1e-9) {
  double len = 0.0;
  for (const auto& s : discretize(path, max_chord_error)) len += s.length();
  return len;
}

// ---------------------------------------------------------------------------
// Invariant checks

namespace detail {
inline bool finite(const Vec2& v) { return v.allFinite(); }
inline bool finite(double v) { return std::isfinite(v); }
}  // namespace detail

/// Throws ValidationError naming the offending entity when any data-model
/// invariant is violated.
inline void validate_layout(const ChipLayout& layout) {
  const auto& sub = layout.substrate;
  if (!(sub.thickness > 0.0)) throw ValidationError("substrate", "thickness must be positive");
  if (!(sub.extent.width() > 0.0 && sub.extent.height() > 0.0)) throw ValidationError("substrate", "size must be positive");
  if (!(sub.j_max > 0.0)) throw ValidationError("substrate", "j_max must be positive");
  if (!(sub.thermal_conductivity > 0.0)) throw ValidationError("substrate", "thermal conductivity must be positive");

  std::set<std::string> ids;
  for (const auto& p : layout.paths) {
    const std::string who = "wire '" + p.id + "'";
    if (p.id.empty()) throw ValidationError("wire", "missing id");
    if (!ids.insert(p.id).second) throw ValidationError(who, "duplicate id");
    if (!(p.width > 0.0)) throw ValidationError(who, "width must be positive");
    if (!(p.height > 0.0)) throw ValidationError(who, "height must be positive");
    if (!std::isfinite(p.current)) throw ValidationError(who, "current must be finite");
    if (p.centerline.empty()) throw ValidationError(who, "empty centerline");

    bool has_arc = false;
    for (const auto& e : p.centerline) {
      if (const auto* arc = std::get_if<Arc>(&e)) {
        has_arc = true;
        if (!(arc->radius > 0.0)) throw ValidationError(who, "arc radius must be positive");
        if (!detail::finite(arc->center) || !detail::finite(arc->start_deg) || !detail::finite(arc->end_deg)) {
          throw ValidationError(who, "arc parameters must be finite");
        }
        if (arc->sweep_deg() == 0.0 || std::abs(arc->sweep_deg()) > 360.0) {
          throw ValidationError(who, "arc sweep must be non-zero and at most 360 degrees");
        }
      } else if (!detail::finite(std::get<Vec2>(e))) {
        throw ValidationError(who, "vertex coordinates must be finite");
      }
    }
    if (!has_arc && p.centerline.size() < 2) throw ValidationError(who, "a straight path needs at least two vertices");
    for (std::size_t i = 0; i + 1 < p.centerline.size(); ++i) {
      if (element_end(p.centerline[i]) == element_start(p.centerline[i + 1])) {
        throw ValidationError(who, "consecutive vertices coincide (element " + std::to_string(i + 1) + ")");
      }
    }
    for (const auto& v : centerline_polyline(p, 1e-7)) {
      if (!sub.extent.contains(v)) throw ValidationError(who, "centerline leaves the substrate extent");
    }
  }

  for (const auto& b : layout.bias_fields) {
    if (!b.vector.allFinite()) throw ValidationError("bias", "components must be finite");
  }

  if (layout.mirror) {
    const auto& m = *layout.mirror;
    if (!(m.gap_to_wires >= 0.0)) throw ValidationError("mirror", "gap must be non-negative");
    if (!(m.coating_height >= 0.0)) throw ValidationError("mirror", "coating height must be non-negative");
    if (!(m.region.width() > 0.0 && m.region.height() > 0.0)) throw ValidationError("mirror", "region must have positive size");
  }

  std::set<std::string> pad_ids;
  for (const auto& pad : layout.pads) {
    const std::string who = "pad '" + pad.id + "'";
    if (pad.id.empty()) throw ValidationError("pad", "missing id");
    if (!pad_ids.insert(pad.id).second) throw ValidationError(who, "duplicate id");
    if (!(pad.region.width() > 0.0 && pad.region.height() > 0.0)) throw ValidationError(who, "size must be positive");
    if (!sub.extent.contains(pad.region)) throw ValidationError(who, "region lies outside the substrate extent");
    if (!layout.find_path(pad.connected_path)) throw ValidationError(who, "unknown wire '" + pad.connected_path + "'");
    if (!(pad.current >= 0.0)) throw ValidationError(who, "current must be non-negative");
  }
}

// ---------------------------------------------------------------------------
// Geometric checks

struct GeometryFinding {
  enum class Kind { short_circuit, self_intersection };

  Kind kind;
  std::string path_a;
  std::string path_b;  // empty for self intersections
  Vec2 location;
  double clearance;  // edge-to-edge distance (negative when outlines overlap)

  std::string message() const {
    if (kind == Kind::self_intersection) return "centerline of '" + path_a + "' crosses itself";
    return "outlines of '" + path_a + "' and '" + path_b + "' touch or overlap";
  }
};

inline constexpr double geometry_chord_error = 10e-9;

namespace detail {

struct PathOutline {
  const WirePath* path;
  std::vector<Vec2> pts;
  geometry::Box2 box;
};

inline std::vector<PathOutline> outlines(const ChipLayout& layout, double chord_error) {
  std::vector<PathOutline> out;
  for (const auto& p : layout.paths) {
    PathOutline o{&p, centerline_polyline(p, chord_error), {}};
    for (const auto& v : o.pts) o.box.expand(v);
    out.push_back(std::move(o));
  }
  return out;
}

/// Minimum centerline distance between two polylines and the midpoint of the
/// closest pair.
inline std::pair<double, Vec2> closest_approach(const PathOutline& a, const PathOutline& b, double cutoff) {
  double best = std::numeric_limits<double>::infinity();
  Vec2 where = Vec2::Zero();
  for (std::size_t i = 0; i + 1 < a.pts.size(); ++i) {
    geometry::Box2 sa;
    sa.expand(a.pts[i]);
    sa.expand(a.pts[i + 1]);
    if (!sa.inflated(cutoff).overlaps(b.box)) continue;
    for (std::size_t j = 0; j + 1 < b.pts.size(); ++j) {
      geometry::Box2 sb;
      sb.expand(b.pts[j]);
      sb.expand(b.pts[j + 1]);
      if (!sa.inflated(cutoff).overlaps(sb)) continue;
      const double d = geometry::segment_segment_distance(a.pts[i], a.pts[i + 1], b.pts[j], b.pts[j + 1]);
      if (d < best) {
        best = d;
        where = (a.pts[i] + a.pts[i + 1] + b.pts[j] + b.pts[j + 1]) / 4.0;
      }
    }
  }
  return {best, where};
}

}  // namespace detail

/// Reports every pair of distinct paths whose inflated outlines touch or
/// overlap, and every path whose centerline crosses itself. Each unordered
/// pair is reported once, ids in lexicographic order.
inline std::vector<GeometryFinding> validate_geometry(const ChipLayout& layout) {
  std::vector<GeometryFinding> findings;
  const auto outs = detail::outlines(layout, geometry_chord_error);

  for (const auto& o : outs) {
    const auto& pts = o.pts;
    const bool closed = pts.size() > 3 && pts.front() == pts.back();
    bool found = false;
    for (std::size_t i = 0; i + 1 < pts.size() && !found; ++i) {
      for (std::size_t j = i + 2; j + 1 < pts.size(); ++j) {
        if (closed && i == 0 && j + 2 == pts.size()) continue;  // first and last share the closing vertex
        if (geometry::segments_intersect(pts[i], pts[i + 1], pts[j], pts[j + 1])) {
          findings.push_back({GeometryFinding::Kind::self_intersection, o.path->id, "", pts[j], 0.0});
          found = true;
          break;
        }
      }
    }
  }

  for (std::size_t i = 0; i < outs.size(); ++i) {
    for (std::size_t j = i + 1; j < outs.size(); ++j) {
      const double reach = (outs[i].path->width + outs[j].path->width) / 2.0;
      if (!outs[i].box.inflated(reach).overlaps(outs[j].box)) continue;
      const auto [d, where] = detail::closest_approach(outs[i], outs[j], reach);
      if (d <= reach) {
        std::string a = outs[i].path->id;
        std::string b = outs[j].path->id;
        if (b < a) std::swap(a, b);
        findings.push_back({GeometryFinding::Kind::short_circuit, a, b, where, d - reach});
      }
    }
  }

  std::sort(findings.begin(), findings.end(), [](const GeometryFinding& x, const GeometryFinding& y) {
    return std::tie(x.path_a, x.path_b) < std::tie(y.path_a, y.path_b);
  });
  return findings;
}

/// Smallest edge-to-edge distance between two distinct paths.
inline double edge_clearance(const WirePath& a, const WirePath& b) {
  ChipLayout tmp;
  tmp.paths = {a, b};
  const auto outs = detail::outlines(tmp, geometry_chord_error);
  const auto [d, where] = detail::closest_approach(outs[0], outs[1], std::numeric_limits<double>::infinity());
  (void)where;
  return d - (a.width + b.width) / 2.0;
}

}  // namespace atomchip

#endif  // ATOMCHIP_LAYOUT_HPP
