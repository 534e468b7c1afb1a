#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("atomchip_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path file(const std::string& name) const { return dir_ / name; }

  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(file(name)) << text;
    return file(name);
  }

  Outcome run(const std::string& args) const {
    const auto out = file("stdout.txt"), err = file("stderr.txt");
    const std::string cmd = std::string("\"") + ATOMCHIP_CLI + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                            err.string() + "\"";
    const int status = std::system(cmd.c_str());
    Outcome r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  /// Writes the generated layout to `name` and returns its path.
  std::string generated(const std::string& args, const std::string& name) const {
    const Outcome r = run("generate " + args);
    EXPECT_EQ(r.code, 0) << r.err;
    return write(name, r.out).string();
  }

  fs::path dir_;
};

std::string golden_layout(const std::string& name) {
  return std::string(ATOMCHIP_GOLDEN_DIR) + "/layouts/" + name + ".layout";
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(text);
  std::string line;
  std::getline(ss, line);
  while (std::getline(ss, line)) {
    std::vector<double> row;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_F(Cli, SideGuideAnalyzeHeight) {
  const auto layout = generated("side-guide", "guide.layout");
  const Outcome seeded = run("--json --layout \"" + layout + "\" analyze --seed 0,0,80");
  ASSERT_EQ(seeded.code, 0) << seeded.err;
  const auto j = nlohmann::json::parse(seeded.out);
  // filament sits 0.5 um above the surface
  EXPECT_NEAR(j["location_z_um"].get<double>(), 100.5, 0.1);
  EXPECT_TRUE(j["majorana"].get<bool>());

  // unseeded scan lands somewhere on the minimum line; end effects of the
  // 20 mm wire bend it by about a percent
  const Outcome scanned = run("--json --layout \"" + layout + "\" analyze");
  ASSERT_EQ(scanned.code, 0) << scanned.err;
  EXPECT_NEAR(nlohmann::json::parse(scanned.out)["location_z_um"].get<double>(), 100.5, 2.0);
}

TEST_F(Cli, BiasOnlyHasNoTrap) {
  const auto layout = write("bias.layout",
                            "substrate material=aln size=10000x10000um thickness=500um\nbias bx=0G by=0G bz=5G\n");
  const Outcome r = run("analyze --layout \"" + layout.string() + "\"");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("no trap found"), std::string::npos) << r.err;
}

TEST_F(Cli, IoffeReportIncludesEta) {
  const Outcome r = run("analyze --species cesium --layout \"" + golden_layout("ioffe") + "\"");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("eta"), std::string::npos);
  EXPECT_NE(r.out.find("Ioffe"), std::string::npos) << r.out;

  const Outcome j = run("--json analyze --layout \"" + golden_layout("ioffe") + "\"");
  ASSERT_EQ(j.code, 0) << j.err;
  const auto doc = nlohmann::json::parse(j.out);
  EXPECT_NEAR(doc["location_z_um"].get<double>(), 7.7, 0.5);
  EXPECT_TRUE(doc.contains("eta_z"));
  EXPECT_FALSE(doc["majorana"].get<bool>());
}

TEST_F(Cli, UnknownSpeciesIsInputError) {
  const Outcome r = run("analyze --species unobtainium --layout \"" + golden_layout("ioffe") + "\"");
  EXPECT_EQ(r.code, 1);
}

TEST_F(Cli, SeedInsideWireIsInputError) {
  const auto layout = generated("side-guide", "guide.layout");
  EXPECT_EQ(run("analyze --layout \"" + layout + "\" --seed 0,0,0.5").code, 1);
}

TEST_F(Cli, DrcSplitterOnAlnPasses) {
  const auto layout = generated("splitter --paper-defaults", "splitter.layout");
  const Outcome r = run("drc --layout \"" + layout + "\"");
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("# summary 0 errors"), std::string::npos);
}

TEST_F(Cli, DrcSplitterOnSapphireFailsDensity) {
  const auto layout =
      generated("splitter --substrate sapphire --width 3um --height 2um --currents 1,1,1,1,1", "sapphire.layout");
  const Outcome r = run("drc --layout \"" + layout + "\"");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("DENSITY-JMAX\terror"), std::string::npos) << r.out;
}

TEST_F(Cli, DrcMirrorGapFails) {
  const Outcome r = run("drc --layout \"" + golden_layout("mirror_gap") + "\"");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("MIRROR-GAP"), std::string::npos);
}

TEST_F(Cli, DrcJsonMatchesText) {
  const Outcome text = run("drc --layout \"" + golden_layout("lift_off_height") + "\" --technique lift_off");
  const Outcome json = run("--json drc --layout \"" + golden_layout("lift_off_height") + "\" --technique lift_off");
  EXPECT_EQ(text.code, 2);
  EXPECT_EQ(json.code, 2);
  const auto doc = nlohmann::json::parse(json.out);
  EXPECT_EQ(doc["technique"], "lift_off");
  ASSERT_FALSE(doc["violations"].empty());
  EXPECT_EQ(doc["violations"][0]["rule_id"], "FEATURE-HEIGHT");
  EXPECT_NE(text.out.find("FEATURE-HEIGHT\terror"), std::string::npos);
}

TEST_F(Cli, DrcBadTechniqueIsInputError) {
  EXPECT_EQ(run("drc --layout \"" + golden_layout("splitter") + "\" --technique plasma").code, 1);
}

TEST_F(Cli, DrcOutFileMatchesStdout) {
  const auto out = file("report.txt");
  const Outcome direct = run("drc --layout \"" + golden_layout("pad_edge") + "\"");
  const Outcome to_file = run("--out \"" + out.string() + "\" drc --layout \"" + golden_layout("pad_edge") + "\"");
  EXPECT_EQ(direct.code, to_file.code);
  EXPECT_TRUE(to_file.out.empty());
  EXPECT_EQ(slurp(out), direct.out);
}

TEST_F(Cli, FieldmapSinglePoint) {
  const auto layout = generated("side-guide", "guide.layout");
  const Outcome r = run("fieldmap --layout \"" + layout + "\" --grid 0:0:1,0:0:1,50:50:1");
  ASSERT_EQ(r.code, 0) << r.err;
  std::stringstream ss(r.out);
  std::vector<std::string> lines;
  for (std::string l; std::getline(ss, l);) lines.push_back(l);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], "x_um,y_um,z_um,Bx_G,By_G,Bz_G,Bmag_G");
}

TEST_F(Cli, FieldmapDoublingCurrentsDoublesFields) {
  const auto one = generated("u-trap --bias 0G", "one.layout");
  const auto two = generated("u-trap --bias 0G --current 4A", "two.layout");
  const std::string grid = " --grid -500:500:3,-200:200:3,200:400:3";
  const Outcome a = run("fieldmap --layout \"" + one + "\"" + grid);
  const Outcome b = run("fieldmap --layout \"" + two + "\"" + grid);
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  const auto ra = csv_rows(a.out), rb = csv_rows(b.out);
  ASSERT_EQ(ra.size(), 27u);
  ASSERT_EQ(rb.size(), ra.size());
  for (std::size_t i = 0; i < ra.size(); ++i) {
    for (int c = 0; c < 3; ++c) EXPECT_EQ(rb[i][c], ra[i][c]);
    for (int c = 3; c < 7; ++c) EXPECT_NEAR(rb[i][c], 2.0 * ra[i][c], 1e-8 * std::abs(ra[i][c]) + 1e-12);
  }
}

TEST_F(Cli, FieldmapSideGuideMinimumNearHundredMicrons) {
  const auto layout = generated("side-guide", "guide.layout");
  const Outcome r = run("fieldmap --layout \"" + layout + "\" --grid 0:0:1,0:0:1,20:200:181");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 181u);
  std::size_t best = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][6] < rows[best][6]) best = i;
  }
  EXPECT_GT(best, 0u);
  EXPECT_LT(best, rows.size() - 1);
  EXPECT_NEAR(rows[best][2], 100.5, 1.0);
}

TEST_F(Cli, FieldmapIsDeterministicAcrossThreads) {
  const auto layout = golden_layout("ioffe");
  const std::string grid = " --grid -30:30:7,-30:30:7,5:40:8";
  const Outcome a = run("fieldmap --threads 1 --layout \"" + layout + "\"" + grid);
  const Outcome b = run("fieldmap --threads 4 --layout \"" + layout + "\"" + grid);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST_F(Cli, FieldmapBadGridIsInputError) {
  const auto layout = generated("side-guide", "guide.layout");
  EXPECT_EQ(run("fieldmap --layout \"" + layout + "\" --grid 0:1:0,0:0:1,1:1:1").code, 1);
  EXPECT_EQ(run("fieldmap --layout \"" + layout + "\" --grid 0:1").code, 1);
}

TEST_F(Cli, GenerateUTrapDefaults) {
  const Outcome r = run("generate u-trap --paper-defaults");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("width=300um height=1um current=2A"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("material=sapphire"), std::string::npos);
}

TEST_F(Cli, GenerateIoffeFixture) {
  const Outcome r = run("generate ioffe --r-inner 10um --r-outer 15um");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, slurp(golden_layout("ioffe")));
  EXPECT_TRUE(r.err.empty()) << r.err;
}

TEST_F(Cli, GenerateIoffeWarnsOnWideRings) {
  const Outcome r = run("generate ioffe --r-outer 40um");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST_F(Cli, GenerateSplitterDefaults) {
  const Outcome r = run("generate splitter --paper-defaults");
  ASSERT_EQ(r.code, 0) << r.err;
  int wires = 0;
  for (std::size_t at = r.out.find("\nwire "); at != std::string::npos; at = r.out.find("\nwire ", at + 1)) ++wires;
  EXPECT_EQ(wires, 5);
}

TEST_F(Cli, GenerateRejectsBadParameters) {
  EXPECT_EQ(run("generate ioffe --r-inner 20um").code, 1);
  EXPECT_EQ(run("generate u-trap --r-inner 5um").code, 1);
  EXPECT_EQ(run("generate splitter --currents 1,2").code, 1);
  EXPECT_EQ(run("generate hexagon").code, 1);
  EXPECT_EQ(run("generate side-guide --current 0A").code, 1);
}

TEST_F(Cli, GenerateJson) {
  const Outcome r = run("--json generate splitter");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["pattern"], "splitter");
  EXPECT_NE(doc["layout"].get<std::string>().find("wire id=w3"), std::string::npos);
}

TEST_F(Cli, RecipeMatchesGolden) {
  for (const char* t : {"wet_etch", "ion_mill", "lift_off", "electroplating"}) {
    const Outcome r = run(std::string("recipe ") + t);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, slurp(std::string(ATOMCHIP_GOLDEN_DIR) + "/recipes/" + t + ".txt")) << t;
  }
  EXPECT_EQ(run("recipe sputtering").code, 1);
}

TEST_F(Cli, Recommend) {
  const Outcome narrow = run("recommend --width 5um --height 1um");
  ASSERT_EQ(narrow.code, 0) << narrow.err;
  EXPECT_NE(narrow.out.find("technique=lift_off"), std::string::npos);

  const Outcome wide = run("--json recommend --width 50um --height 0.5um");
  ASSERT_EQ(wide.code, 0) << wide.err;
  EXPECT_EQ(nlohmann::json::parse(wide.out)["technique"], "wet_etch");

  EXPECT_NE(run("recommend --width 3um --height 4um").out.find("technique=electroplating"), std::string::npos);
  EXPECT_EQ(run("recommend --width 3um --height 6um").code, 2);
  EXPECT_EQ(run("recommend --width -3um --height 1um").code, 1);
}

TEST_F(Cli, ParseErrorsExitOne) {
  const auto bad = write("bad.layout", "substrate material=aln size=10x10um thickness=500um\nwire id=w width=3um\n");
  const Outcome r = run("drc --layout \"" + bad.string() + "\"");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  EXPECT_EQ(run("analyze --layout \"" + file("missing.layout").string() + "\"").code, 1);
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("analyze --grid 1 --layout \"" + golden_layout("ioffe") + "\"").code, 1);
}

TEST_F(Cli, Deterministic) {
  for (const std::string& args : {"--json analyze --layout \"" + golden_layout("ioffe") + "\"",
                                 "drc --layout \"" + golden_layout("mirror_problems") + "\"",
                                 std::string("generate ioffe"), std::string("recipe electroplating")}) {
    const Outcome a = run(args), b = run(args);
    EXPECT_EQ(a.code, b.code) << args;
    EXPECT_EQ(a.out, b.out) << args;
  }
}
