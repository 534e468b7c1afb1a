#ifndef ATOMCHIP_MAGNETOSTATICS_HPP
#define ATOMCHIP_MAGNETOSTATICS_HPP

// Biot-Savart field of chip wires treated as straight current filaments plus
// uniform bias fields, and finite-difference derivatives of that field.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "atomchip/errors.hpp"
#include "atomchip/geometry.hpp"
#include "atomchip/layout.hpp"
#include "atomchip/numerics.hpp"
#include "atomchip/units.hpp"

namespace atomchip {

/// Field at p of a straight filament from a to b carrying `current` (A) from a
/// to b. Uses the form
///   B = mu0 I / 4pi * (|Ri| + |Rf|) / (|Ri||Rf| (|Ri||Rf| + Ri.Rf)) * Ri x Rf
/// with Ri = p - a, Rf = p - b, which stays accurate far from the segment and
/// is exactly zero on the extension of the segment's line.
inline Vec3 segment_field(const Vec3& a, const Vec3& b, double current, const Vec3& p) {
  const Vec3 ri = p - a;
  const Vec3 rf = p - b;
  const double ni = ri.norm();
  const double nf = rf.norm();
  const double denom = ni * nf * (ni * nf + ri.dot(rf));
  if (denom <= 0.0) return Vec3::Zero();
  const Vec3 c = ri.cross(rf);
  const double scale = constants::mu0 * current / (4.0 * std::numbers::pi) * (ni + nf) / denom;
  return scale * c;
}

struct FieldOptions {
  double chord_error = 1e-9;       // max sagitta when arcs become chords (m)
  int cross_section_subdivisions = 1;  // k: each segment becomes k x k filaments
};

/// Finite-difference derivatives shared by every field source. Derived must
/// provide field(p) (throwing near sources), field_unchecked(p) and
/// nearest_wire_distance(p).
template <typename Derived>
class FieldDerivatives {
 public:
  /// Finite-difference step at p: a fixed fraction of the distance to the
  /// nearest wire, so derivatives scale with the geometry.
  double step_at(const Vec3& p) const {
    const double d = self().nearest_wire_distance(p);
    return std::isfinite(d) ? step_fraction * d : default_step;
  }

  /// J(i, j) = dB_i / dx_j (T/m).
  Mat3 jacobian(const Vec3& p) const { return jacobian(p, step_at(p)); }
  Mat3 jacobian(const Vec3& p, double h) const {
    self().field(p);
    return numerics::jacobian([this](const Vec3& x) { return self().field_unchecked(x); }, p, h);
  }

  /// grad |B| = J^T B / |B| (T/m). Throws ZeroFieldNondifferentiable where |B| vanishes.
  Vec3 gradient_of_magnitude(const Vec3& p) const { return gradient_of_magnitude(p, step_at(p)); }
  Vec3 gradient_of_magnitude(const Vec3& p, double h) const {
    const Vec3 b = self().field(p);
    const double m = b.norm();
    if (m < zero_field_threshold) throw ZeroFieldNondifferentiable("|B| vanishes at the evaluation point");
    return jacobian(p, h).transpose() * b / m;
  }

  /// Step for derivatives of |B|: also resolves the length |B| / |J| over
  /// which the magnitude bends (tiny near an Ioffe minimum with a weak bias).
  double magnitude_step_at(const Vec3& p) const {
    const double h = step_at(p);
    const double b = self().field(p).norm();
    const double j = jacobian(p, h).norm();
    return j > 0.0 ? std::min(h, magnitude_step_fraction * b / j) : h;
  }

  /// Hessian of |B| (T/m^2) from central differences of grad |B|, symmetrized.
  Mat3 hessian_of_magnitude(const Vec3& p) const { return hessian_of_magnitude(p, magnitude_step_at(p)); }
  Mat3 hessian_of_magnitude(const Vec3& p, double h) const {
    const double m = self().field(p).norm();
    if (m < zero_field_threshold) throw ZeroFieldNondifferentiable("|B| vanishes at the evaluation point");
    const Mat3 raw = numerics::jacobian([&](const Vec3& x) { return gradient_of_magnitude(x, h); }, p, h);
    return (raw + raw.transpose()) / 2.0;
  }

  double magnitude(const Vec3& p) const { return self().field(p).norm(); }

  static constexpr double zero_field_threshold = 1e-12;  // T
  static constexpr double step_fraction = 2e-2;
  static constexpr double magnitude_step_fraction = 5e-2;
  static constexpr double default_step = 1e-8;

 private:
  const Derived& self() const { return static_cast<const Derived&>(*this); }
};

/// Straight filament carrying a share of a path's current.
struct Filament {
  Vec3 a;
  Vec3 b;
  double current;
};

/// Centerline segment used for proximity checks.
struct GuardSegment {
  Vec3 a;
  Vec3 b;
  double exclusion_radius;
  std::size_t path_index;
};

class FieldModel : public FieldDerivatives<FieldModel> {
 public:
  explicit FieldModel(const ChipLayout& layout, FieldOptions options = {})
      : options_(options), bias_(layout.total_bias()) {
    const int k = std::max(1, options.cross_section_subdivisions);
    for (std::size_t pi = 0; pi < layout.paths.size(); ++pi) {
      const auto& path = layout.paths[pi];
      for (const auto& s : discretize(path, options.chord_error)) {
        guards_.push_back({s.a, s.b, path.exclusion_radius(), pi});
        if (k == 1) {
          filaments_.push_back({s.a, s.b, path.current});
          continue;
        }
        const Vec3 t = (s.b - s.a).normalized();
        const Vec3 n(-t.y(), t.x(), 0.0);
        const double share = path.current / static_cast<double>(k * k);
        for (int i = 0; i < k; ++i) {
          for (int j = 0; j < k; ++j) {
            const double u = ((i + 0.5) / k - 0.5) * path.width;
            const double z = (j + 0.5) / k * path.height - path.filament_z();
            const Vec3 off = u * n + Vec3(0.0, 0.0, z);
            filaments_.push_back({s.a + off, s.b + off, share});
          }
        }
      }
    }
  }

  const std::vector<Filament>& filaments() const { return filaments_; }
  const Vec3& bias() const { return bias_; }
  const FieldOptions& options() const { return options_; }

  /// Distance from p to the closest wire centerline.
  double nearest_wire_distance(const Vec3& p) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& g : guards_) best = std::min(best, geometry::point_segment_distance(p, g.a, g.b));
    return best;
  }

  /// True when p lies within some wire's exclusion radius.
  bool too_close(const Vec3& p) const {
    for (const auto& g : guards_) {
      if (geometry::point_segment_distance(p, g.a, g.b) <= g.exclusion_radius) return true;
    }
    return false;
  }

  /// Total field (T) at p. Throws EvaluationTooCloseToWire inside an exclusion radius.
  Vec3 field(const Vec3& p) const {
    check_clearance(p);
    return field_unchecked(p);
  }

  Vec3 field_unchecked(const Vec3& p) const {
    Vec3 b = bias_;
    for (const auto& f : filaments_) b += segment_field(f.a, f.b, f.current, p);
    return b;
  }

 private:
  void check_clearance(const Vec3& p) const {
    for (const auto& g : guards_) {
      const double d = geometry::point_segment_distance(p, g.a, g.b);
      if (d <= g.exclusion_radius) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "point (%.6g, %.6g, %.6g) um is %.6g um from a wire centerline (limit %.6g um)",
                      units::to_um(p.x()), units::to_um(p.y()), units::to_um(p.z()), units::to_um(d),
                      units::to_um(g.exclusion_radius));
        throw EvaluationTooCloseToWire(buf);
      }
    }
  }

  FieldOptions options_;
  Vec3 bias_;
  std::vector<Filament> filaments_;
  std::vector<GuardSegment> guards_;
};

/// Field of a single path (no bias), convenient for superposition checks.
inline Vec3 path_field(const WirePath& path, const Vec3& p, double chord_error = 1e-9) {
  Vec3 b = Vec3::Zero();
  for (const auto& s : discretize(path, chord_error)) b += segment_field(s.a, s.b, path.current, p);
  return b;
}

// ---------------------------------------------------------------------------
// Regular grids

struct GridSpec {
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Zero();
  std::array<std::size_t, 3> count{1, 1, 1};

  std::size_t size() const { return count[0] * count[1] * count[2]; }

  double coordinate(int axis, std::size_t i) const {
    if (count[axis] <= 1) return lo[axis];
    return lo[axis] + (hi[axis] - lo[axis]) * static_cast<double>(i) / static_cast<double>(count[axis] - 1);
  }

  /// Sample index order: x slowest, z fastest.
  Vec3 point(std::size_t index) const {
    const std::size_t iz = index % count[2];
    const std::size_t iy = (index / count[2]) % count[1];
    const std::size_t ix = index / (count[2] * count[1]);
    return {coordinate(0, ix), coordinate(1, iy), coordinate(2, iz)};
  }
};

struct FieldSample {
  Vec3 position;
  Vec3 field;
  bool valid;  // false inside an exclusion radius
};

/// Samples the field on a grid. Points inside a wire's exclusion radius are
/// flagged rather than thrown. Work is split over `threads` workers
/// (0 = hardware concurrency); the result does not depend on the split.
inline std::vector<FieldSample> field_grid(const FieldModel& model, const GridSpec& grid, unsigned threads = 0) {
  std::vector<FieldSample> out(grid.size());
  const auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Vec3 p = grid.point(i);
      if (model.too_close(p)) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        out[i] = {p, Vec3(nan, nan, nan), false};
      } else {
        out[i] = {p, model.field_unchecked(p), true};
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, out.size())));
  if (threads <= 1) {
    work(0, out.size());
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (out.size() + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(out.size(), begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(work, begin, end);
  }
  for (auto& th : pool) th.join();
  return out;
}

namespace detail {
inline std::string csv_number(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}
}  // namespace detail

/// CSV with positions in um and fields in G, 9 significant digits; flagged
/// samples carry "nan" field columns.
inline void write_field_csv(std::ostream& os, const std::vector<FieldSample>& samples) {
  os << "x_um,y_um,z_um,Bx_G,By_G,Bz_G,Bmag_G\n";
  for (const auto& s : samples) {
    os << detail::csv_number(units::to_um(s.position.x())) << ',' << detail::csv_number(units::to_um(s.position.y()))
       << ',' << detail::csv_number(units::to_um(s.position.z()));
    if (s.valid) {
      os << ',' << detail::csv_number(units::to_gauss(s.field.x())) << ','
         << detail::csv_number(units::to_gauss(s.field.y())) << ',' << detail::csv_number(units::to_gauss(s.field.z()))
         << ',' << detail::csv_number(units::to_gauss(s.field.norm()));
    } else {
      os << ",nan,nan,nan,nan";
    }
    os << '\n';
  }
}

}  // namespace atomchip

#endif  // ATOMCHIP_MAGNETOSTATICS_HPP
