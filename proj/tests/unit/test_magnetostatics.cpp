#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "atomchip/magnetostatics.hpp"
#include "fixtures.hpp"

using namespace atomchip;
using namespace atomchip::literals;
using fixtures::rel_err;

namespace {

WirePath straight(const std::string& id, Vec2 a, Vec2 b, double i = 1.0, double w = 3_um, double h = 2_um) {
  WirePath p;
  p.id = id;
  p.centerline = {a, b};
  p.width = w;
  p.height = h;
  p.current = i;
  return p;
}

ChipLayout long_wire(double current = 1.0) {
  ChipLayout l;
  l.substrate.extent = Rect::centered(Vec2::Zero(), 2.0, 2.0);
  l.paths.push_back(straight("w", Vec2(-0.5, 0), Vec2(0.5, 0), current, 1_um, 1e-12));
  return l;
}

ChipLayout ring(double radius, double current) {
  ChipLayout l;
  WirePath p = straight("ring", Vec2::Zero(), Vec2::Zero(), current, 1_um, 1_um);
  p.centerline = {Arc{Vec2::Zero(), radius, 0.0, 360.0}};
  l.paths.push_back(p);
  return l;
}

/// Closed rectangular loop plus a circle: no open ends, so curl B = 0 off the wires.
ChipLayout closed_circuit() {
  ChipLayout l = ring(200_um, 0.7);
  WirePath r = straight("rect", Vec2(-300_um, -250_um), Vec2(350_um, -250_um), -1.3, 5_um, 2_um);
  r.centerline.push_back(Vec2(350_um, 300_um));
  r.centerline.push_back(Vec2(-300_um, 300_um));
  r.centerline.push_back(Vec2(-300_um, -250_um));
  l.paths.push_back(r);
  l.bias_fields.push_back({Vec3(3_G, -1_G, 2_G)});
  return l;
}

}  // namespace

TEST(SegmentField, MatchesMidpointQuadrature) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Vec3 a(u(rng), u(rng), u(rng));
    const Vec3 b(u(rng), u(rng), u(rng));
    Vec3 p(u(rng), u(rng), u(rng));
    p *= 3.0;
    if (geometry::point_segment_distance(p, a, b) < 0.25 * (b - a).norm()) continue;
    EXPECT_LT(rel_err(segment_field(a, b, 1.7, p), fixtures::midpoint_rule_field(a, b, 1.7, p)), 1e-6);
  }
}

TEST(SegmentField, MatchesAngleForm) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1e-4, 1e-4);
  for (int i = 0; i < 500; ++i) {
    const Vec3 a(u(rng), u(rng), u(rng)), b(u(rng), u(rng), u(rng)), p(u(rng), u(rng), u(rng));
    if (geometry::point_segment_distance(p, a, b) < 1e-7) continue;
    EXPECT_LT(rel_err(segment_field(a, b, -0.4, p), fixtures::angle_form_field(a, b, -0.4, p)), 1e-9);
  }
}

TEST(SegmentField, ZeroOnExtendedLine) {
  const Vec3 a(0, 0, 0), b(1, 2, 3);
  EXPECT_EQ(segment_field(a, b, 1.0, Vec3(2, 4, 6)), Vec3::Zero());
  EXPECT_EQ(segment_field(a, b, 1.0, Vec3(-1, -2, -3)), Vec3::Zero());
}

TEST(SegmentField, RightHandRuleAndSignFlip) {
  // current along +x, point above (+z): field along -y
  const Vec3 b = segment_field(Vec3(-1, 0, 0), Vec3(1, 0, 0), 1.0, Vec3(0, 0, 1e-3));
  EXPECT_LT(b.y(), 0.0);
  EXPECT_NEAR(b.x(), 0.0, 1e-18);
  EXPECT_EQ(segment_field(Vec3(-1, 0, 0), Vec3(1, 0, 0), -1.0, Vec3(0, 0, 1e-3)), -b);
}

TEST(FieldModel, InfiniteWireLimit) {
  const FieldModel m(long_wire());
  const Vec3 p(0, 0, 1e-3);
  EXPECT_LT(rel_err(units::to_gauss(m.field(p).norm()), 2.0), 1e-3);
  // |dB/dr| = mu0 I / 2 pi r^2 = 0.2 T/m
  const Mat3 J = m.jacobian(p);
  EXPECT_LT(rel_err(std::abs(J(1, 2)), 0.2), 1e-3);
}

TEST(FieldModel, InfiniteWireRadialCurvature) {
  const FieldModel m(long_wire());
  const Vec3 p(0, 0, 100_um);
  const Mat3 H = m.hessian_of_magnitude(p);
  EXPECT_LT(rel_err(H(2, 2), 4e5), 1e-3);
  EXPECT_LT((H - H.transpose()).norm() / H.norm(), 1e-8);
}

TEST(FieldModel, LoopCenter) {
  const ChipLayout l = ring(10_um, 1.0);
  const FieldModel m(l, {1e-12, 1});
  const double want = constants::mu0 * 1.0 / (2.0 * 10_um);
  const Vec3 center(0, 0, l.paths[0].filament_z());
  EXPECT_LT(rel_err(m.field(center).norm(), want), 1e-6);
  EXPECT_NEAR(units::to_gauss(m.field(center).norm()), 628.3, 0.05);
}

TEST(FieldModel, LoopOnAxis) {
  const ChipLayout l = ring(50_um, 0.5);
  const FieldModel m(l, {1e-12, 1});
  for (double z : {10_um, 50_um, 200_um}) {
    const double r = 50_um;
    const double want = constants::mu0 * 0.5 * r * r / (2.0 * std::pow(r * r + z * z, 1.5));
    EXPECT_LT(rel_err(m.field(Vec3(0, 0, 0.5_um + z)).z(), want), 1e-6);
  }
}

TEST(FieldModel, OpposingCoincidentWiresCancel) {
  ChipLayout l;
  l.paths.push_back(straight("a", Vec2(0, 0), Vec2(1e-3, 0), 1.0));
  l.paths.push_back(straight("b", Vec2(0, 0), Vec2(1e-3, 0), -1.0));
  const FieldModel m(l);
  EXPECT_LT(m.field(Vec3(3e-4, 2e-5, 3e-5)).norm(), 1e-20);
}

TEST(FieldModel, SideGuideCancellation) {
  ChipLayout l;
  l.substrate.extent = Rect::centered(Vec2::Zero(), 0.03, 0.03);
  l.paths.push_back(straight("g", Vec2(-0.01, 0), Vec2(0.01, 0), 1.0, 10_um, 1e-12));
  l.bias_fields.push_back({Vec3(0, 20_G, 0)});
  const FieldModel m(l);
  const double h = constants::mu0 * 1.0 / (2.0 * std::numbers::pi * 20_G);
  EXPECT_NEAR(h, 100_um, 1e-12);
  EXPECT_LT(m.field(Vec3(0, 0, h)).norm(), 1e-3 * 20_G);
}

TEST(FieldModel, SuperpositionAndLinearity) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto l = fixtures::random_layout(rng);
    const FieldModel m(l);
    const Vec3 p(1e-4, -2e-4, 3e-4 + 1e-5 * trial);
    if (m.too_close(p)) continue;
    Vec3 sum = l.total_bias();
    for (const auto& path : l.paths) sum += path_field(path, p);
    EXPECT_LT((m.field(p) - sum).norm(), 1e-12 * sum.norm() + 1e-20);

    auto doubled = l;
    for (auto& path : doubled.paths) path.current *= -2.5;
    doubled.bias_fields.clear();
    const Vec3 wires = m.field(p) - l.total_bias();
    EXPECT_LT(rel_err(FieldModel(doubled).field(p), -2.5 * wires), 1e-13);
  }
}

TEST(FieldModel, ExclusionRadius) {
  ChipLayout l;
  l.paths.push_back(straight("a", Vec2(0, 0), Vec2(1e-3, 0), 1.0, 4_um, 2_um));
  const FieldModel m(l);
  EXPECT_THROW(m.field(Vec3(5e-4, 0, 1_um + 1.5_um)), EvaluationTooCloseToWire);
  EXPECT_NO_THROW(m.field(Vec3(5e-4, 0, 1_um + 2.1_um)));
  EXPECT_THROW(m.jacobian(Vec3(5e-4, 1_um, 1_um)), EvaluationTooCloseToWire);
}

TEST(FieldModel, BiasOnlyHasZeroJacobian) {
  ChipLayout l;
  l.bias_fields.push_back({Vec3(1e-3, 2e-3, 0)});
  const FieldModel m(l);
  EXPECT_EQ(m.jacobian(Vec3(0, 0, 1e-4)), Mat3::Zero());
  EXPECT_EQ(m.field(Vec3(1, 2, 3)), Vec3(1e-3, 2e-3, 0));
}

TEST(FieldModel, ZeroFieldIsNondifferentiable) {
  ChipLayout l;
  const FieldModel m(l);
  EXPECT_THROW(m.hessian_of_magnitude(Vec3(0, 0, 1e-4)), ZeroFieldNondifferentiable);
  EXPECT_THROW(m.gradient_of_magnitude(Vec3(0, 0, 1e-4)), ZeroFieldNondifferentiable);
}

TEST(FieldModel, MaxwellConsistencyOnClosedCircuit) {
  const FieldModel m(closed_circuit());
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> xy(-500e-6, 500e-6), z(2e-6, 300e-6);
  for (int i = 0; i < 200; ++i) {
    const Vec3 p(xy(rng), xy(rng), z(rng));
    if (m.nearest_wire_distance(p) < 5e-6) continue;
    const Mat3 J = m.jacobian(p);
    EXPECT_LT(std::abs(J.trace()) / J.norm(), 1e-4);
    EXPECT_LT((J - J.transpose()).norm() / J.norm(), 1e-4);
  }
}

TEST(FieldModel, RichardsonStepConsistency) {
  const FieldModel m(closed_circuit());
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> xy(-400e-6, 400e-6), z(5e-6, 200e-6);
  for (int i = 0; i < 50; ++i) {
    const Vec3 p(xy(rng), xy(rng), z(rng));
    if (m.nearest_wire_distance(p) < 10e-6) continue;
    const double h = m.step_at(p);
    EXPECT_LT(rel_err(m.jacobian(p, h / 2.0), m.jacobian(p, h)), 1e-5);
  }
}

TEST(FieldModel, GeometricScaling) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> sdist(0.5, 4.0);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto l = fixtures::random_layout(rng, true, false);
    const double s = sdist(rng);
    const FieldModel m(l, {1e-9, 1});
    const FieldModel ms(fixtures::scaled(l, s), {1e-9 * s, 1});
    const Vec3 p(fixtures::random_um(rng, -3000, 3000), fixtures::random_um(rng, -3000, 3000), fixtures::random_um(rng, 10, 500));
    double clearance = 20e-6;
    for (const auto& path : l.paths) clearance = std::max(clearance, 2.0 * path.exclusion_radius());
    if (m.nearest_wire_distance(p) < clearance) continue;
    EXPECT_LT(rel_err(ms.field(s * p), m.field(p) / s), 1e-10);
    EXPECT_LT(rel_err(ms.jacobian(s * p), m.jacobian(p) / (s * s)), 1e-10);
    EXPECT_LT(rel_err(ms.hessian_of_magnitude(s * p), m.hessian_of_magnitude(p) / (s * s * s)), 1e-8);
    ++checked;
  }
  EXPECT_GT(checked, 150);
}

TEST(FieldModel, SubdivisionConvergesToFilamentFarAway) {
  ChipLayout l;
  l.paths.push_back(straight("a", Vec2(-2e-3, 0), Vec2(2e-3, 0), 1.0, 20_um, 4_um));
  const Vec3 p(0, 0, 500_um);
  const Vec3 thin = FieldModel(l).field(p);
  const Vec3 thick = FieldModel(l, {1e-9, 4}).field(p);
  EXPECT_LT(rel_err(thick, thin), 1e-3);
  EXPECT_EQ(FieldModel(l, {1e-9, 4}).filaments().size(), 16u);
}

TEST(FieldGrid, SinglePointMatchesFieldAt) {
  const auto l = closed_circuit();
  const FieldModel m(l);
  GridSpec g;
  g.lo = g.hi = Vec3(10_um, 20_um, 30_um);
  const auto s = field_grid(m, g);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_TRUE(s[0].valid);
  EXPECT_EQ(s[0].field, m.field(g.lo));
}

TEST(FieldGrid, DeterministicAcrossThreadCounts) {
  const FieldModel m(closed_circuit());
  GridSpec g{Vec3(-300_um, -300_um, 0.0), Vec3(300_um, 300_um, 100_um), {7, 6, 5}};
  const auto a = field_grid(m, g, 1);
  const auto b = field_grid(m, g, 4);
  ASSERT_EQ(a.size(), 210u);
  bool any_flagged = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].valid, b[i].valid);
    if (a[i].valid) {
      EXPECT_EQ(a[i].field, b[i].field);
    }
    any_flagged |= !a[i].valid;
  }
  std::ostringstream x, y;
  write_field_csv(x, a);
  write_field_csv(y, b);
  EXPECT_EQ(x.str(), y.str());
  (void)any_flagged;
}

TEST(FieldGrid, SideGuideMinimumNearHundredMicrons) {
  ChipLayout l;
  l.substrate.extent = Rect::centered(Vec2::Zero(), 0.03, 0.03);
  l.paths.push_back(straight("g", Vec2(-0.01, 0), Vec2(0.01, 0), 1.0, 10_um, 1e-12));
  l.bias_fields.push_back({Vec3(0, 20_G, 0)});
  GridSpec g{Vec3(0, 0, 10_um), Vec3(0, 0, 200_um), {1, 1, 191}};
  const auto s = field_grid(FieldModel(l), g);
  const auto best = std::min_element(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.field.norm() < b.field.norm(); });
  EXPECT_NEAR(best->position.z(), 100_um, 0.5_um);
}

TEST(FieldGrid, CsvFormat) {
  ChipLayout l;
  l.paths.push_back(straight("a", Vec2(0, 0), Vec2(1e-3, 0), 1.0, 4_um, 2_um));
  GridSpec g{Vec3(5e-4, 0, 1_um), Vec3(5e-4, 0, 50_um), {1, 1, 2}};
  std::ostringstream os;
  write_field_csv(os, field_grid(FieldModel(l), g));
  std::istringstream is(os.str());
  std::string header, first, second;
  std::getline(is, header);
  std::getline(is, first);
  std::getline(is, second);
  EXPECT_EQ(header, "x_um,y_um,z_um,Bx_G,By_G,Bz_G,Bmag_G");
  EXPECT_EQ(first, "500,0,1,nan,nan,nan,nan");
  EXPECT_EQ(second.substr(0, 9), "500,0,50,");
}
