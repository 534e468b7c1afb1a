#ifndef ATOMCHIP_PATTERNS_HPP
#define ATOMCHIP_PATTERNS_HPP

// Parametric layouts for common atom-chip structures: U-shaped quadrupole
// trap, side guide, planar Ioffe trap and a parallel-wire splitter.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "atomchip/errors.hpp"
#include "atomchip/layout.hpp"
#include "atomchip/layout_io.hpp"
#include "atomchip/units.hpp"

namespace atomchip {

struct GeneratedLayout {
  ChipLayout layout;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;  // geometric assumptions, emitted as comments
};

/// Layout text preceded by the generator's notes and warnings as comments.
inline std::string render_generated(const GeneratedLayout& g) {
  std::string out;
  for (const auto& n : g.notes) out += "# " + n + "\n";
  for (const auto& w : g.warnings) out += "# warning: " + w + "\n";
  return out + serialize_layout(g.layout);
}

namespace pattern_detail {
inline std::string fmt(const char* f, double v) {
  char buf[192];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}
inline Vec2 polar(double r, double deg) {
  const double a = units::deg_to_rad(deg);
  return {r * std::cos(a), r * std::sin(a)};
}
}  // namespace pattern_detail

// ---------------------------------------------------------------------------
// U-trap

struct UTrapParams {
  double width = 300e-6;
  double height = 1e-6;
  double current = 2.0;
  double base_length = 2e-3;  // centre-to-centre distance of the arms
  double arm_length = 3e-3;
  double bias = 20e-4;        // T, applied perpendicular to the base in the plane
  SubstrateMaterial material = SubstrateMaterial::sapphire;
  double substrate_size = 25e-3;

  static UTrapParams reference_defaults() { return {}; }
};

/// One U-shaped path: base along x through the origin, arms running to -y.
/// The bias cancels the base field above the wire, giving a quadrupole trap.
inline GeneratedLayout gen_u_trap(const UTrapParams& p) {
  if (!(p.width > 0 && p.height > 0 && p.base_length > 0 && p.arm_length > 0)) {
    throw ValidationError("u-trap", "dimensions must be positive");
  }
  if (!(p.base_length > p.width)) throw ValidationError("u-trap", "arms overlap: base length must exceed the width");
  GeneratedLayout g;
  auto& l = g.layout;
  l.substrate = SubstrateSpec::make(p.material, p.substrate_size, p.substrate_size, 0.5e-3);
  WirePath w;
  w.id = "u";
  w.width = p.width;
  w.height = p.height;
  w.current = p.current;
  const double b = p.base_length / 2.0;
  w.centerline = {Vec2(-b, -p.arm_length), Vec2(-b, 0.0), Vec2(b, 0.0), Vec2(b, -p.arm_length)};
  l.paths.push_back(w);
  const double sign = p.current >= 0.0 ? 1.0 : -1.0;
  l.bias_fields.push_back({Vec3(0.0, sign * p.bias, 0.0)});
  canonicalize(l);
  validate_layout(l);
  g.notes.push_back("u-trap: base along x at y = 0, arms toward -y, bias along y");
  if (p.bias > 0.0) {
    g.notes.push_back(pattern_detail::fmt("long-wire estimate of trap height: %.6g um",
                                          units::to_um(constants::mu0 * std::abs(p.current) /
                                                       (2.0 * std::numbers::pi * p.bias))));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Side guide

struct SideGuideParams {
  double current = 1.0;
  double bias = 20e-4;  // T
  double length = 20e-3;
  double width = 10e-6;
  double height = 1e-6;
  SubstrateMaterial material = SubstrateMaterial::aluminum_nitride;
  double substrate_size = 25e-3;
};

inline double side_guide_height(const SideGuideParams& p) {
  return constants::mu0 * std::abs(p.current) / (2.0 * std::numbers::pi * p.bias);
}

/// Straight wire along x plus an in-plane bias along z x t (t the current
/// direction), which cancels the wire field at height mu0 I / (2 pi B).
inline GeneratedLayout gen_side_guide(const SideGuideParams& p) {
  if (p.current == 0.0) throw ValidationError("side guide", "current must be non-zero");
  if (!(p.bias > 0.0)) throw ValidationError("side guide", "bias must be positive");
  if (!(p.length > 0 && p.width > 0 && p.height > 0)) throw ValidationError("side guide", "dimensions must be positive");
  GeneratedLayout g;
  auto& l = g.layout;
  l.substrate = SubstrateSpec::make(p.material, p.substrate_size, p.substrate_size, 0.5e-3);
  WirePath w;
  w.id = "guide";
  w.width = p.width;
  w.height = p.height;
  w.current = p.current;
  w.centerline = {Vec2(-p.length / 2.0, 0.0), Vec2(p.length / 2.0, 0.0)};
  l.paths.push_back(w);
  l.bias_fields.push_back({Vec3(0.0, p.current > 0.0 ? p.bias : -p.bias, 0.0)});
  validate_layout(l);
  g.notes.push_back(pattern_detail::fmt("side guide: minimum line %.6g um above the wire",
                                        units::to_um(side_guide_height(p))));
  return g;
}

// ---------------------------------------------------------------------------
// Planar Ioffe trap

struct IoffeParams {
  double r_inner = 10e-6;
  double r_outer = 15e-6;
  double current = 1.0;
  Vec3 bias = Vec3::Zero();  // T
  double wire_width = 3e-6;
  double wire_height = 3e-6;
  double inner_span_deg = 60.0;  // angular extent of each inner arc
  double lead_length = 500e-6;
  double lead_pitch = 5e-6;      // centre spacing of neighbouring leads
  double outer_gap = 5e-6;       // centre-line gap between outer arcs at r_outer
  SubstrateMaterial material = SubstrateMaterial::aluminum_nitride;
  double substrate_size = 25e-3;

  /// 10 um / 15 um / 1 A with the fixture bias found by scanning the
  /// perpendicular bias for a trap bottom near 1 G.
  static IoffeParams reference_defaults() {
    IoffeParams p;
    p.bias = Vec3(0.0, 0.0, fixture_bias);
    return p;
  }

  // written as the file parser would produce it so the layout text round-trips
  static constexpr double fixture_bias = units::from_gauss(136.97);  // T
};

/// Two pairs of wires related by a 180 degree rotation. Each "inner" wire
/// enters along y = 0, runs counter-clockwise on the inner radius over
/// inner_span_deg, steps out radially and returns clockwise on the outer
/// radius, leaving along y = +lead_pitch. Each "outer" wire enters along
/// y = +lead_pitch from the opposite side, runs clockwise on the outer radius
/// and leaves radially. With a bias along +z the wire field is cancelled
/// above the centre, leaving a minimum with non-zero field.
inline GeneratedLayout gen_wl_ioffe(const IoffeParams& p) {
  using pattern_detail::polar;
  if (!(p.r_inner > 0.0 && p.r_inner < p.r_outer)) throw ValidationError("ioffe", "need 0 < r_inner < r_outer");
  if (!(p.wire_width > 0 && p.wire_height > 0 && p.lead_length > p.r_outer && p.lead_pitch > 0 && p.outer_gap > 0)) {
    throw ValidationError("ioffe", "wire and lead dimensions must be positive, leads longer than r_outer");
  }
  if (!(p.inner_span_deg > 0.0 && p.inner_span_deg < 180.0)) throw ValidationError("ioffe", "inner span must lie in (0, 180) degrees");
  if (!(p.lead_pitch < p.r_outer)) throw ValidationError("ioffe", "lead pitch must be smaller than r_outer");

  const double exit_deg = units::rad_to_deg(std::asin(p.lead_pitch / p.r_outer));
  const double gap_deg = units::rad_to_deg(p.outer_gap / p.r_outer);
  const double outer_end_deg = p.inner_span_deg + gap_deg;
  if (!(exit_deg < p.inner_span_deg && outer_end_deg < 180.0 - exit_deg)) {
    throw ValidationError("ioffe", "lead pitch and gaps do not fit around the outer radius");
  }
  const double L = p.lead_length;

  WirePath inner;
  inner.id = "inner_a";
  inner.centerline = {Vec2(L, 0.0), Arc{Vec2::Zero(), p.r_inner, 0.0, p.inner_span_deg},
                      Arc{Vec2::Zero(), p.r_outer, p.inner_span_deg, exit_deg}, Vec2(L, p.lead_pitch)};
  WirePath outer;
  outer.id = "outer_a";
  outer.centerline = {Vec2(-L, p.lead_pitch), Arc{Vec2::Zero(), p.r_outer, 180.0 - exit_deg, outer_end_deg},
                      polar(L, outer_end_deg)};
  for (auto* w : {&inner, &outer}) {
    w->width = p.wire_width;
    w->height = p.wire_height;
    w->current = p.current;
  }
  const auto rotated = [](WirePath w, const std::string& id) {
    w.id = id;
    for (auto& e : w.centerline) {
      if (auto* arc = std::get_if<Arc>(&e)) {
        arc->start_deg += 180.0;
        arc->end_deg += 180.0;
      } else {
        std::get<Vec2>(e) = -std::get<Vec2>(e);
      }
    }
    return w;
  };

  GeneratedLayout g;
  auto& l = g.layout;
  l.substrate = SubstrateSpec::make(p.material, p.substrate_size, p.substrate_size, 0.5e-3);
  l.paths = {inner, outer, rotated(inner, "inner_b"), rotated(outer, "outer_b")};
  if (p.bias != Vec3::Zero()) l.bias_fields.push_back({p.bias});
  canonicalize(l);
  validate_layout(l);

  using pattern_detail::fmt;
  g.notes.push_back("planar Ioffe pattern: two wire pairs related by a 180 degree rotation about z");
  g.notes.push_back(fmt("inner arcs: radius %.6g um, ", units::to_um(p.r_inner)) +
                    fmt("span %.6g deg each, starting at 0 and 180 deg", p.inner_span_deg));
  g.notes.push_back(fmt("outer arcs: radius %.6g um, ", units::to_um(p.r_outer)) +
                    fmt("lead exits at %.6g deg, ", exit_deg) + fmt("gap %.6g deg", gap_deg));
  g.notes.push_back(fmt("leads: parallel to x at pitch %.6g um, ", units::to_um(p.lead_pitch)) +
                    fmt("radial leads at %.6g deg; ", outer_end_deg) + fmt("length %.6g um", units::to_um(L)));
  g.notes.push_back("bias along +z opposes the wire field above the centre; its size sets the trap bottom");
  if (p.r_outer > 30e-6) {
    g.warnings.push_back(fmt("outer radius %.6g um exceeds 30 um: curvature likely too small for the Lamb-Dicke regime",
                             units::to_um(p.r_outer)));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Parallel-wire splitter

struct SplitterParams {
  int wire_count = 5;
  double width = 3e-6;
  double height = 4e-6;
  double spacing = 3e-6;  // edge-to-edge gap
  double length = 1e-3;
  std::vector<double> currents;  // empty: 1 A in every wire
  SubstrateMaterial material = SubstrateMaterial::aluminum_nitride;
  double substrate_size = 25e-3;

  static SplitterParams reference_defaults() { return {}; }
};

/// wire_count equal wires parallel to y, centred on the origin, ids w1..wN
/// from -x to +x.
inline GeneratedLayout gen_five_wire_splitter(const SplitterParams& p) {
  if (p.wire_count < 1) throw ValidationError("splitter", "wire count must be at least 1");
  if (!(p.spacing > 0 && p.width > 0 && p.height > 0 && p.length > 0)) throw ValidationError("splitter", "dimensions must be positive");
  if (!p.currents.empty() && p.currents.size() != static_cast<std::size_t>(p.wire_count)) {
    throw ValidationError("splitter", "need one current per wire");
  }
  GeneratedLayout g;
  auto& l = g.layout;
  l.substrate = SubstrateSpec::make(p.material, p.substrate_size, p.substrate_size, 0.5e-3);
  const double pitch = p.width + p.spacing;
  for (int i = 0; i < p.wire_count; ++i) {
    WirePath w;
    w.id = "w" + std::to_string(i + 1);
    w.width = p.width;
    w.height = p.height;
    w.current = p.currents.empty() ? 1.0 : p.currents[static_cast<std::size_t>(i)];
    const double x = (i - (p.wire_count - 1) / 2.0) * pitch;
    w.centerline = {Vec2(x, -p.length / 2.0), Vec2(x, p.length / 2.0)};
    l.paths.push_back(w);
  }
  canonicalize(l);
  validate_layout(l);
  g.notes.push_back(pattern_detail::fmt("%g parallel wires along y, ", p.wire_count) +
                    pattern_detail::fmt("pitch %.6g um", units::to_um(pitch)));
  return g;
}

}  // namespace atomchip

#endif  // ATOMCHIP_PATTERNS_HPP
