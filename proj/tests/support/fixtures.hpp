#ifndef ATOMCHIP_TEST_FIXTURES_HPP
#define ATOMCHIP_TEST_FIXTURES_HPP

// Shared helpers for the unit and acceptance tests: independent field
// oracles and random layout generators.

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "atomchip/layout.hpp"
#include "atomchip/magnetostatics.hpp"
#include "atomchip/units.hpp"

namespace atomchip::fixtures {

/// Biot-Savart integral of a straight segment by the midpoint rule,
///   B = mu0 I / 4pi * sum dl x (p - r) / |p - r|^3.
/// Written independently of the closed form used by the library.
inline Vec3 midpoint_rule_field(const Vec3& a, const Vec3& b, double current, const Vec3& p, int n = 10000) {
  const Vec3 dl = (b - a) / n;
  Vec3 sum = Vec3::Zero();
  for (int i = 0; i < n; ++i) {
    const Vec3 r = a + (i + 0.5) * dl;
    const Vec3 d = p - r;
    const double dist = d.norm();
    sum += dl.cross(d) / (dist * dist * dist);
  }
  return 1.25663706212e-6 / (4.0 * std::numbers::pi) * current * sum;
}

/// Textbook finite-wire result B = mu0 I / (4 pi d) (sin t2 - sin t1) with the
/// direction from the right-hand rule.
inline Vec3 angle_form_field(const Vec3& a, const Vec3& b, double current, const Vec3& p) {
  const Vec3 u = (b - a).normalized();
  const Vec3 foot = a + (p - a).dot(u) * u;
  const Vec3 rho = p - foot;
  const double d = rho.norm();
  const double s1 = (a - foot).dot(u);
  const double s2 = (b - foot).dot(u);
  const double sin1 = s1 / std::hypot(s1, d);
  const double sin2 = s2 / std::hypot(s2, d);
  const double mag = 1.25663706212e-6 * current / (4.0 * std::numbers::pi * d) * (sin2 - sin1);
  return mag * u.cross(rho / d);
}

inline double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }
inline double rel_err(const Vec3& got, const Vec3& want) { return (got - want).norm() / want.norm(); }
inline double rel_err(const Mat3& got, const Mat3& want) { return (got - want).norm() / want.norm(); }

/// Decimal micrometre value with `decimals` digits after the point.
inline double random_um(std::mt19937_64& rng, double lo_um, double hi_um, int decimals = 3) {
  const double scale = std::pow(10.0, decimals);
  std::uniform_int_distribution<long long> d(static_cast<long long>(std::ceil(lo_um * scale)),
                                             static_cast<long long>(std::floor(hi_um * scale)));
  return units::from_um(static_cast<double>(d(rng)) / scale);
}

inline double random_decimal(std::mt19937_64& rng, double lo, double hi, int decimals = 3) {
  const double scale = std::pow(10.0, decimals);
  std::uniform_int_distribution<long long> d(static_cast<long long>(std::ceil(lo * scale)),
                                             static_cast<long long>(std::floor(hi * scale)));
  return static_cast<double>(d(rng)) / scale;
}

/// Random valid layout: 1-4 paths mixing vertices and arcs, optional bias,
/// mirror and pads. Coordinates are decimal micrometres like a hand-written file.
inline ChipLayout random_layout(std::mt19937_64& rng, bool with_arcs = true, bool with_extras = true) {
  std::uniform_int_distribution<int> npaths(1, 4);
  std::uniform_int_distribution<int> nverts(2, 5);
  std::bernoulli_distribution coin(0.5);

  ChipLayout layout;
  layout.substrate = SubstrateSpec::make(coin(rng) ? SubstrateMaterial::aluminum_nitride : SubstrateMaterial::sapphire,
                                         units::from_um(10000.0), units::from_um(10000.0), units::from_um(500.0));
  const int n = npaths(rng);
  for (int i = 0; i < n; ++i) {
    WirePath p;
    p.id = "w" + std::to_string(i);
    p.width = random_um(rng, 1.0, 50.0);
    p.height = random_um(rng, 0.2, 5.0);
    p.current = random_decimal(rng, -2.0, 2.0);
    const int nv = nverts(rng);
    for (int k = 0; k < nv; ++k) {
      if (with_arcs && coin(rng) && coin(rng)) {
        Arc arc;
        arc.center = Vec2(random_um(rng, -2000.0, 2000.0), random_um(rng, -2000.0, 2000.0));
        arc.radius = random_um(rng, 5.0, 500.0);
        arc.start_deg = random_decimal(rng, -180.0, 180.0, 2);
        double sweep = random_decimal(rng, -360.0, 360.0, 2);
        if (std::abs(sweep) < 1.0) sweep = 90.0;
        arc.end_deg = arc.start_deg + sweep;
        p.centerline.push_back(arc);
      } else {
        p.centerline.push_back(Vec2(random_um(rng, -3000.0, 3000.0), random_um(rng, -3000.0, 3000.0)));
      }
    }
    layout.paths.push_back(std::move(p));
  }
  if (with_extras) {
    if (coin(rng)) {
      layout.bias_fields.push_back({Vec3(units::from_gauss(random_decimal(rng, -50, 50)),
                                         units::from_gauss(random_decimal(rng, -50, 50)),
                                         units::from_gauss(random_decimal(rng, -50, 50)))});
    }
    if (coin(rng)) {
      MirrorSpec m;
      m.region = coin(rng) ? layout.substrate.extent
                           : Rect::centered(Vec2(random_um(rng, -100, 100), random_um(rng, -100, 100)),
                                            random_um(rng, 1000, 8000), random_um(rng, 1000, 8000));
      m.gap_to_wires = random_um(rng, 1.0, 50.0);
      m.coating_height = coin(rng) ? 0.0 : random_um(rng, 0.05, 1.0);
      layout.mirror = m;
    }
    if (coin(rng)) {
      PadSpec pad;
      pad.id = "p0";
      pad.region = Rect::centered(Vec2(random_um(rng, -3000, 3000), random_um(rng, -3000, 3000)),
                                  random_um(rng, 100, 1000), random_um(rng, 100, 1000));
      pad.connected_path = layout.paths.front().id;
      pad.current = std::abs(layout.paths.front().current);
      layout.pads.push_back(pad);
    }
  }
  return layout;
}

/// Every length multiplied by s; currents and bias unchanged.
inline ChipLayout scaled(const ChipLayout& in, double s) {
  ChipLayout out = in;
  out.substrate.extent.middle *= s;
  out.substrate.extent.size *= s;
  for (auto& p : out.paths) {
    p.width *= s;
    p.height *= s;
    for (auto& e : p.centerline) {
      if (auto* arc = std::get_if<Arc>(&e)) {
        arc->center *= s;
        arc->radius *= s;
      } else {
        std::get<Vec2>(e) *= s;
      }
    }
  }
  return out;
}

/// Field whose magnitude is an exact quadratic bowl,
///   |B| = b0 + 1/2 sum_i kappa_i (R^T (p - c))_i^2,
/// pointing along a fixed direction. Used as a harmonic oracle.
class BowlField : public FieldDerivatives<BowlField> {
 public:
  BowlField(Vec3 center, double b0, Vec3 kappa, Mat3 rotation = Mat3::Identity(), double length = 10e-6)
      : center_(center), b0_(b0), kappa_(kappa), rotation_(rotation), length_(length) {}

  Vec3 field_unchecked(const Vec3& p) const {
    const Vec3 local = rotation_.transpose() * (p - center_);
    const double m = b0_ + 0.5 * (kappa_.array() * local.array().square()).sum();
    return m * Vec3(0.6, 0.0, 0.8);
  }
  Vec3 field(const Vec3& p) const { return field_unchecked(p); }
  bool too_close(const Vec3&) const { return false; }
  double nearest_wire_distance(const Vec3&) const { return length_; }

 private:
  Vec3 center_;
  double b0_;
  Vec3 kappa_;
  Mat3 rotation_;
  double length_;
};

}  // namespace atomchip::fixtures

#endif  // ATOMCHIP_TEST_FIXTURES_HPP
