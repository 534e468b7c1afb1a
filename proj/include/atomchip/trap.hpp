#ifndef ATOMCHIP_TRAP_HPP
#define ATOMCHIP_TRAP_HPP

// Locating |B| minima and characterizing the harmonic trap an atom in a
// weak-field-seeking state sees there (V = mu |B|).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "atomchip/errors.hpp"
#include "atomchip/magnetostatics.hpp"
#include "atomchip/numerics.hpp"
#include "atomchip/units.hpp"

namespace atomchip {

struct AtomSpecies {
  std::string name;
  double mass = 0.0;             // kg
  double wavelength = 0.0;       // m, recoil transition
  double magnetic_moment = 0.0;  // J/T

  /// E_recoil = h^2 / (2 m lambda^2)
  double recoil_energy() const {
    return constants::planck * constants::planck / (2.0 * mass * wavelength * wavelength);
  }

  void validate() const {
    if (!(mass > 0.0) || !(wavelength > 0.0) || !(magnetic_moment > 0.0)) {
      throw ValidationError("species '" + name + "'", "mass, wavelength and magnetic moment must be positive");
    }
  }

  /// Cs-133 on the D2 line, stretched state with moment one Bohr magneton.
  static AtomSpecies cesium() { return {"cesium", 2.2069e-25, 852e-9, constants::bohr_magneton}; }
  /// Rb-87 on the D2 line, |F=2, mF=2> (moment one Bohr magneton).
  static AtomSpecies rubidium87() { return {"rubidium87", 1.44316060e-25, 780.241e-9, constants::bohr_magneton}; }
  /// Na-23 on the D2 line, |F=2, mF=2>.
  static AtomSpecies sodium23() { return {"sodium23", 3.8175458e-26, 589.158e-9, constants::bohr_magneton}; }
};

inline std::optional<AtomSpecies> find_species(std::string_view name) {
  for (const auto& s : {AtomSpecies::cesium(), AtomSpecies::rubidium87(), AtomSpecies::sodium23()}) {
    if (s.name == name) return s;
  }
  if (name == "cs" || name == "Cs") return AtomSpecies::cesium();
  if (name == "rb87" || name == "Rb87") return AtomSpecies::rubidium87();
  if (name == "na" || name == "Na") return AtomSpecies::sodium23();
  return std::nullopt;
}

/// eta = sqrt(E_recoil / (hbar omega)); infinite for omega <= 0.
inline double lamb_dicke(const AtomSpecies& species, double omega) {
  if (!(omega > 0.0)) return std::numeric_limits<double>::infinity();
  return std::sqrt(species.recoil_energy() / (constants::hbar * omega));
}

/// Harmonic angular frequency sqrt(mu kappa / m) for curvature kappa (T/m^2).
inline double trap_frequency(const AtomSpecies& species, double curvature) {
  return std::sqrt(std::max(curvature, 0.0) * species.magnetic_moment / species.mass);
}

/// Curvature at which eta = 1: m (E_recoil / hbar)^2 / mu.
inline double species_threshold_curvature(const AtomSpecies& species) {
  const double w = species.recoil_energy() / constants::hbar;
  return species.mass * w * w / species.magnetic_moment;
}

// ---------------------------------------------------------------------------
// Minimization

struct MinimizerOptions {
  double z_floor = 0.1e-6;              // m
  double box_half_width = 1e-3;         // max excursion from the seed per axis
  double gradient_tolerance = 1e-6;     // T/m
  double step_tolerance = 1e-9;         // m
  double zero_field = 1e-8;             // T; below this the cone tip is accepted as is
  int max_evaluations = 20000;
  int max_polish_steps = 50;
  std::optional<AtomSpecies> gravity;   // adds m g z / mu when set
};

struct TrapPoint {
  Vec3 location = Vec3::Zero();
  double b_min = 0.0;       // T
  bool converged = false;
  int iterations = 0;       // objective evaluations plus polish steps
  bool zero_field = false;  // minimum where |B| vanishes (quadrupole-like)
};

namespace trap_detail {

template <typename Field>
double objective(const Field& field, const Vec3& x, const Vec3& seed, const MinimizerOptions& opt) {
  const double inf = std::numeric_limits<double>::infinity();
  if (x.z() < opt.z_floor) return inf;
  if (((x - seed).cwiseAbs().array() > opt.box_half_width).any()) return inf;
  if (field.too_close(x)) return inf;
  double v = field.field_unchecked(x).norm();
  if (opt.gravity) v += opt.gravity->mass * constants::standard_gravity * x.z() / opt.gravity->magnetic_moment;
  return v;
}

template <typename Field>
Vec3 objective_gradient(const Field& field, const Vec3& x, const MinimizerOptions& opt) {
  Vec3 g = field.gradient_of_magnitude(x);
  if (opt.gravity) g.z() += opt.gravity->mass * constants::standard_gravity / opt.gravity->magnetic_moment;
  return g;
}

template <typename Field>
bool on_boundary(const Field& field, const Vec3& x, const Vec3& seed, const MinimizerOptions& opt) {
  const double margin = std::max(10.0 * opt.step_tolerance, 1e-3 * field.step_at(x));
  if (x.z() < opt.z_floor + margin) return true;
  return ((x - seed).cwiseAbs().array() > opt.box_half_width - margin).any();
}

}  // namespace trap_detail

/// Local minimizer of |B| (plus optional gravity) from a seed: Nelder-Mead
/// descent, restarted until it stalls, then Newton polish on grad |B|.
template <typename Field>
TrapPoint find_minimum(const Field& field, const Vec3& seed, const MinimizerOptions& opt = {}) {
  if (!(seed.z() > 0.0)) throw SeedInsideWire("seed lies at or below the substrate surface");
  if (field.too_close(seed)) throw SeedInsideWire("seed lies inside a wire's exclusion radius");
  Vec3 start = seed;
  if (start.z() < opt.z_floor) start.z() = opt.z_floor;

  const auto f = [&](const Vec3& x) { return trap_detail::objective(field, x, seed, opt); };
  const double d = field.nearest_wire_distance(start);
  double step = std::isfinite(d) ? std::clamp(0.1 * d, 1e-9, 1e-4) : 1e-6;

  TrapPoint tp;
  Vec3 x = start;
  double fx = f(x);
  for (int round = 0; round < 6; ++round) {
    numerics::SimplexOptions so;
    so.initial_step = step;
    so.x_tolerance = std::max(opt.step_tolerance * 0.1, 1e-13);
    so.max_evaluations = opt.max_evaluations;
    const auto r = numerics::nelder_mead(f, x, so);
    tp.iterations += r.evaluations;
    if (!std::isfinite(r.value)) throw NoTrapFound("descent left the admissible region");
    const bool moved = (r.x - x).norm() > opt.step_tolerance;
    x = r.x;
    fx = r.value;
    // an unfinished simplex is left to the gradient polish below
    if (!r.converged || (!moved && round > 0)) break;
    step = std::max(step * 0.1, 10.0 * opt.step_tolerance);
  }

  if (trap_detail::on_boundary(field, x, seed, opt)) throw NoTrapFound("minimum lies on the search boundary");

  const double b = field.field_unchecked(x).norm();
  if (b < opt.zero_field) {
    const double probe = std::isfinite(d) ? 1e-2 * d : 1e-6;
    double rise = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (double sgn : {-1.0, 1.0}) {
        const Vec3 q = x + sgn * probe * Vec3::Unit(i);
        if (!field.too_close(q)) rise = std::max(rise, field.field_unchecked(q).norm() - b);
      }
    }
    if (!(rise > 0.0)) throw NoTrapFound("field vanishes identically around the seed");
    tp.location = x;
    tp.b_min = b;
    tp.zero_field = true;
    tp.converged = true;
    return tp;
  }

  // Newton polish
  bool converged = false;
  for (int k = 0; k < opt.max_polish_steps; ++k) {
    ++tp.iterations;
    const Vec3 g = trap_detail::objective_gradient(field, x, opt);
    const Mat3 H = field.hessian_of_magnitude(x);
    const double scale = std::max(H.norm(), std::numeric_limits<double>::min());
    if (H.norm() * std::pow(field.step_at(x) / Field::step_fraction, 2) < 1e-9 * b) {
      throw NoTrapFound("field magnitude is flat around the seed");
    }
    Eigen::SelfAdjointEigenSolver<Mat3> es(H);
    Vec3 dx;
    if (es.eigenvalues().minCoeff() > 1e-12 * scale) {
      dx = -es.eigenvectors() * (es.eigenvectors().transpose() * g).cwiseQuotient(es.eigenvalues());
    } else {
      dx = -g / scale;
    }
    double t = 1.0;
    const double f0 = f(x);
    while (t > 1e-6 && !(f(x + t * dx) <= f0 + 1e-15 * std::abs(f0))) t *= 0.5;
    const Vec3 next = x + t * dx;
    const double moved = (next - x).norm();
    if (std::isfinite(f(next))) x = next;
    const Vec3 g_new = trap_detail::objective_gradient(field, x, opt);
    if (g_new.norm() < opt.gradient_tolerance && moved < opt.step_tolerance) {
      converged = true;
      break;
    }
  }
  (void)fx;
  if (trap_detail::on_boundary(field, x, seed, opt)) throw NoTrapFound("minimum lies on the search boundary");
  tp.location = x;
  tp.b_min = field.field_unchecked(x).norm();
  tp.converged = converged;
  tp.zero_field = tp.b_min < opt.zero_field;
  if (!converged) throw NoTrapFound("gradient polish did not converge");
  return tp;
}

/// Regular seeding grid: x and y linear, z logarithmic between z_lo and z_hi.
struct SeedBox {
  Vec3 lo;
  Vec3 hi;
  std::size_t count = 21;
};

/// Samples |B| on the box and returns up to `keep` grid points that are lower
/// than all their neighbours, best first.
template <typename Field>
std::vector<Vec3> coarse_seeds(const Field& field, const SeedBox& box, std::size_t keep = 4) {
  const std::size_t n = std::max<std::size_t>(box.count, 2);
  const auto coord = [&](int axis, std::size_t i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    if (axis == 2) return box.lo.z() * std::pow(box.hi.z() / box.lo.z(), t);
    return box.lo[axis] + (box.hi[axis] - box.lo[axis]) * t;
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> v(n * n * n, inf);
  const auto at = [&](std::size_t i, std::size_t j, std::size_t k) -> double& { return v[(i * n + j) * n + k]; };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        const Vec3 p(coord(0, i), coord(1, j), coord(2, k));
        if (!field.too_close(p)) at(i, j, k) = field.field_unchecked(p).norm();
      }
    }
  }
  std::vector<std::pair<double, Vec3>> minima;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        const double c = at(i, j, k);
        if (!std::isfinite(c)) continue;
        bool lowest = true;
        for (int di = -1; di <= 1 && lowest; ++di) {
          for (int dj = -1; dj <= 1 && lowest; ++dj) {
            for (int dk = -1; dk <= 1 && lowest; ++dk) {
              if (!di && !dj && !dk) continue;
              const long ii = static_cast<long>(i) + di, jj = static_cast<long>(j) + dj, kk = static_cast<long>(k) + dk;
              if (ii < 0 || jj < 0 || kk < 0 || ii >= static_cast<long>(n) || jj >= static_cast<long>(n) ||
                  kk >= static_cast<long>(n)) {
                continue;
              }
              if (at(ii, jj, kk) < c) lowest = false;
            }
          }
        }
        if (lowest) minima.push_back({c, Vec3(coord(0, i), coord(1, j), coord(2, k))});
      }
    }
  }
  std::stable_sort(minima.begin(), minima.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Vec3> out;
  for (std::size_t m = 0; m < minima.size() && out.size() < keep; ++m) out.push_back(minima[m].second);
  return out;
}

/// Minimizes from every seed and keeps the lowest converged result.
template <typename Field>
TrapPoint find_minimum(const Field& field, const std::vector<Vec3>& seeds, const MinimizerOptions& opt = {}) {
  std::optional<TrapPoint> best;
  std::string last_error = "no seeds";
  for (const auto& s : seeds) {
    try {
      const auto tp = find_minimum(field, s, opt);
      if (!best || tp.b_min < best->b_min) best = tp;
    } catch (const Error& e) {
      last_error = e.what();
    }
  }
  if (!best) throw NoTrapFound(last_error);
  return *best;
}

// ---------------------------------------------------------------------------
// Characterization

struct CharacterizeOptions {
  double negative_tolerance = 1e-3;   // relative to the largest |curvature|
  double majorana_threshold = 0.1e-4; // T (0.1 G)
  double cone_probe = 1e-6;           // m, probe distance for zero-field minima
};

struct TrapReport {
  TrapPoint point;
  std::string species;
  std::array<double, 3> curvatures{};  // T/m^2 (numerically G/cm^2), ascending
  Mat3 axes = Mat3::Identity();        // column i belongs to curvatures[i]
  std::array<double, 3> omega{};       // rad/s
  std::array<double, 3> eta{};
  bool majorana_risk = false;
  bool quadrupole_like = false;
  double potential_offset = 0.0;  // J, mu * b_min (V = -mu.B for a weak-field seeker)

  /// axis_for[c] = index of the principal axis assigned to coordinate c
  /// (0 = x, 1 = y, 2 = z): the one-to-one assignment with the largest overlap.
  std::array<int, 3> axis_for() const {
    std::array<int, 3> perm{0, 1, 2}, best = perm;
    double best_score = -1.0;
    do {
      double score = 0.0;
      for (int c = 0; c < 3; ++c) score += axes(c, perm[c]) * axes(c, perm[c]);
      if (score > best_score + 1e-12) best_score = score, best = perm;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
};

/// Principal curvatures, frequencies and Lamb-Dicke parameters at a converged
/// trap point. Where |B| is (nearly) zero the magnitude has a cone tip and
/// curvatures come from second differences of |B| over cone_probe along the
/// principal axes of J^T J; for |B| = g r that gives 2 g / cone_probe.
template <typename Field>
TrapReport characterize_trap(const Field& field, const AtomSpecies& species, const TrapPoint& tp,
                             const CharacterizeOptions& opt = {}) {
  species.validate();
  if (!tp.converged) throw NoTrapFound("trap point is not converged");
  TrapReport r;
  r.point = tp;
  r.species = species.name;
  const Vec3 x = tp.location;
  const double b = field.field(x).norm();

  const bool cone = tp.zero_field || b < Field::zero_field_threshold;

  Vec3 kappa;
  Mat3 axes;
  if (!cone) {
    Eigen::SelfAdjointEigenSolver<Mat3> es(field.hessian_of_magnitude(x));
    kappa = es.eigenvalues();
    axes = es.eigenvectors();
  } else {
    const Mat3 J = field.jacobian(x);
    Eigen::SelfAdjointEigenSolver<Mat3> es(J.transpose() * J);
    axes = es.eigenvectors();
    const double d = opt.cone_probe;
    for (int i = 0; i < 3; ++i) {
      const Vec3 v = axes.col(i);
      kappa[i] = (field.field(x + d * v).norm() + field.field(x - d * v).norm() - 2.0 * b) / (d * d);
    }
    // ascending order like the Hessian branch
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int c) { return kappa[a] < kappa[c]; });
    const Vec3 k0 = kappa;
    const Mat3 a0 = axes;
    for (int i = 0; i < 3; ++i) kappa[i] = k0[order[i]], axes.col(i) = a0.col(order[i]);
    r.quadrupole_like = true;
  }

  const double scale = kappa.cwiseAbs().maxCoeff();
  for (int i = 0; i < 3; ++i) {
    if (kappa[i] < -opt.negative_tolerance * scale) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "curvature %.6g G/cm^2 along a principal axis is negative", kappa[i]);
      throw NotAMinimum(buf);
    }
  }
  if (axes.determinant() < 0.0) axes.col(2) = -axes.col(2);

  for (int i = 0; i < 3; ++i) {
    r.curvatures[i] = kappa[i];
    r.omega[i] = trap_frequency(species, kappa[i]);
    r.eta[i] = lamb_dicke(species, r.omega[i]);
  }
  r.axes = axes;
  r.majorana_risk = tp.b_min < opt.majorana_threshold;
  r.potential_offset = species.magnetic_moment * tp.b_min;
  return r;
}

// ---------------------------------------------------------------------------
// Rendering

namespace trap_detail {
inline std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}
}  // namespace trap_detail

/// Flat key/value pairs in a fixed order; axis labels follow the coordinate
/// each principal axis is closest to.
inline std::vector<std::pair<std::string, std::string>> report_fields(const TrapReport& r) {
  using trap_detail::num;
  std::vector<std::pair<std::string, std::string>> kv;
  const char* names[] = {"x", "y", "z"};
  kv.emplace_back("species", r.species);
  for (int c = 0; c < 3; ++c) kv.emplace_back(std::string("location_") + names[c] + "_um", num(units::to_um(r.point.location[c])));
  kv.emplace_back("b_min_G", num(units::to_gauss(r.point.b_min)));
  const auto idx = r.axis_for();
  for (int c = 0; c < 3; ++c) {
    kv.emplace_back(std::string("curvature_") + names[c] + "_Gcm2", num(units::to_gauss_per_cm2(r.curvatures[idx[c]])));
  }
  for (int c = 0; c < 3; ++c) kv.emplace_back(std::string("omega_") + names[c] + "_rad_s", num(r.omega[idx[c]]));
  for (int c = 0; c < 3; ++c) {
    kv.emplace_back(std::string("freq_") + names[c] + "_Hz", num(r.omega[idx[c]] / (2.0 * std::numbers::pi)));
  }
  for (int c = 0; c < 3; ++c) kv.emplace_back(std::string("eta_") + names[c], num(r.eta[idx[c]]));
  for (int c = 0; c < 3; ++c) {
    const Vec3 a = r.axes.col(idx[c]);
    kv.emplace_back(std::string("axis_") + names[c], num(a.x()) + "," + num(a.y()) + "," + num(a.z()));
  }
  kv.emplace_back("quadrupole_like", r.quadrupole_like ? "true" : "false");
  kv.emplace_back("majorana", r.majorana_risk ? "true" : "false");
  kv.emplace_back("potential_offset_J", num(r.potential_offset));
  return kv;
}

inline std::string render_report_kv(const TrapReport& r) {
  std::string out;
  for (const auto& [k, v] : report_fields(r)) out += k + "=" + v + "\n";
  return out;
}

inline std::string render_report_text(const TrapReport& r) {
  using trap_detail::num;
  std::ostringstream os;
  const auto& p = r.point.location;
  os << "Trap minimum (" << r.species << ")\n";
  os << "  location        (" << num(units::to_um(p.x())) << ", " << num(units::to_um(p.y())) << ", "
     << num(units::to_um(p.z())) << ") um\n";
  os << "  height          " << num(units::to_um(p.z())) << " um above the surface\n";
  os << "  |B| at minimum  " << num(units::to_gauss(r.point.b_min)) << " G\n";
  os << "  trap type       " << (r.quadrupole_like ? "quadrupole (zero field)" : "Ioffe (non-zero field)") << "\n";
  os << "  Majorana risk   " << (r.majorana_risk ? "yes" : "no") << "\n";
  os << "  axis  curvature [G/cm^2]  omega [rad/s]   f [Hz]          eta\n";
  const auto idx = r.axis_for();
  const char* names[] = {"x", "y", "z"};
  for (int c = 0; c < 3; ++c) {
    const int i = idx[c];
    char line[160];
    std::snprintf(line, sizeof line, "  %-4s  %-20.6g  %-14.6g  %-14.6g  %.4g\n", names[c], r.curvatures[i], r.omega[i],
                  r.omega[i] / (2.0 * std::numbers::pi), r.eta[i]);
    os << line;
  }
  return os.str();
}

}  // namespace atomchip

#endif  // ATOMCHIP_TRAP_HPP
