#ifndef ATOMCHIP_UNITS_HPP
#define ATOMCHIP_UNITS_HPP

#include <numbers>

#include <Eigen/Dense>

namespace atomchip {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Physical constants (SI, CODATA 2018 exact or recommended values).
namespace constants {
inline constexpr double mu0 = 1.25663706212e-6;  // T m / A
inline constexpr double planck = 6.62607015e-34;  // J s
inline constexpr double hbar = planck / (2.0 * std::numbers::pi);
inline constexpr double bohr_magneton = 9.2740100783e-24;  // J / T
inline constexpr double standard_gravity = 9.80665;  // m / s^2
}  // namespace constants

/// Conversions between the file/CLI units (micrometres, gauss, G/cm^2) and SI.
///
/// The multiplications are written so that micrometre values read from text
/// map to the same double every time; serialization relies on that.
namespace units {
inline constexpr double um_per_m = 1e6;
inline constexpr double gauss_per_tesla = 1e4;

constexpr double from_um(double v) { return v / um_per_m; }
constexpr double to_um(double v) { return v * um_per_m; }
constexpr double from_gauss(double v) { return v / gauss_per_tesla; }
constexpr double to_gauss(double v) { return v * gauss_per_tesla; }

// 1 T/m^2 = 1e4 G / 1e4 cm^2 = 1 G/cm^2
constexpr double to_gauss_per_cm2(double tesla_per_m2) { return tesla_per_m2; }
constexpr double from_gauss_per_cm2(double g_per_cm2) { return g_per_cm2; }
// 1 T/m = 1e4 G / 1e2 cm = 100 G/cm
constexpr double to_gauss_per_cm(double tesla_per_m) { return tesla_per_m * 100.0; }

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }
}  // namespace units

/// Literal helpers for readable fixtures: 10.0_um, 20.0_G.
namespace literals {
constexpr double operator""_um(long double v) { return units::from_um(static_cast<double>(v)); }
constexpr double operator""_um(unsigned long long v) { return units::from_um(static_cast<double>(v)); }
constexpr double operator""_mm(long double v) { return units::from_um(static_cast<double>(v) * 1000.0); }
constexpr double operator""_mm(unsigned long long v) { return units::from_um(static_cast<double>(v) * 1000.0); }
constexpr double operator""_G(long double v) { return units::from_gauss(static_cast<double>(v)); }
constexpr double operator""_G(unsigned long long v) { return units::from_gauss(static_cast<double>(v)); }
}  // namespace literals

}  // namespace atomchip

#endif  // ATOMCHIP_UNITS_HPP
