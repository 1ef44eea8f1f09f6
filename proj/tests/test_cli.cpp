#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>

#include "hooke/cli/config.hpp"
#include "hooke/cli/manifest.hpp"
#include "hooke/io.hpp"

using namespace hooke;
using namespace hooke::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static const fs::path p = [] {
    const fs::path d = fs::temp_directory_path() / ("hooke_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return p;
}

struct Run {
  int code;
  std::string err;
};

Run run(const std::string& args) {
  const fs::path err = scratch() / "stderr.txt";
  const std::string cmd = std::string(HOOKE_PEO_EXE) + " " + args + " > /dev/null 2> " + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, io::read_text(err)};
}

std::string dir(const std::string& name) { return (scratch() / name).string(); }

bool same_tree(const fs::path& a, const fs::path& b) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    const fs::path other = b / e.path().filename();
    if (!fs::exists(other) || io::read_text(e.path()) != io::read_text(other)) return false;
    ++n;
  }
  return n == static_cast<std::size_t>(std::distance(fs::directory_iterator(b), fs::directory_iterator{}));
}

class Cleanup : public ::testing::Environment {
 public:
  void TearDown() override { fs::remove_all(scratch()); }
};
const auto* const cleanup = ::testing::AddGlobalTestEnvironment(new Cleanup);

}  // namespace

TEST(Config, RoundTripsThroughFileForm) {
  RunConfig c;
  c.command = "aniso";
  c.k = 0.1 + 0.2;
  c.kx = 9.61;
  c.dphi = {0.0, 1.0 / 3.0, std::acos(-1.0)};
  c.lambda = {0.1, 0.7};
  c.N_list = {3, 7};
  c.interaction = false;
  c.basis = "some/dir";
  const auto text = to_config_text(to_map(c));
  EXPECT_EQ(from_map(parse_config_text(text)), c);
}

TEST(Config, ParsesCommentsAndRejectsBadInput) {
  const auto kv = parse_config_text("# comment\n k = 2.5  # trailing\n\nm_max=3\n");
  const auto c = from_map(kv);
  EXPECT_EQ(c.k, 2.5);
  EXPECT_EQ(c.m_max, 3);
  EXPECT_THROW(parse_config_text("k 2.5\n"), ConfigError);
  EXPECT_THROW(from_map({{"kk", "1"}}), ConfigError);
  try {
    from_map({{"n_max", "ten"}});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("n_max"), std::string::npos);
  }
}

TEST(Config, ValidationNamesTheField) {
  RunConfig c;
  c.k = -1.0;
  try {
    validate(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("for k:"), std::string::npos) << e.what();
  }
  c = RunConfig{};
  c.h = 0.005;
  c.r_max = 10.0025;
  EXPECT_THROW(validate(c), ConfigError);
  c.r_max = 10.0;
  EXPECT_NO_THROW(validate(c));
  c.mode = "fancy";
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(Config, ParameterHashIgnoresOutputLocation) {
  RunConfig a, b;
  b.out = "elsewhere";
  b.resume = true;
  EXPECT_EQ(parameter_hash(a), parameter_hash(b));
  b.k = 4.5;
  EXPECT_NE(parameter_hash(a), parameter_hash(b));
  EXPECT_EQ(parameter_hash(a).size(), 64u);
}

TEST(Cli, TabulateIsDeterministicAndManifestCoversEveryFile) {
  ASSERT_EQ(run("tabulate --mmax 1 --nmax 4 --out " + dir("t1")).code, 0);
  ASSERT_EQ(run("tabulate --mmax 1 --nmax 4 --out " + dir("t2")).code, 0);
  EXPECT_TRUE(same_tree(dir("t1"), dir("t2")));
  const auto j = read_manifest(dir("t1"));
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir("t1"))) {
    const std::string name = e.path().filename().string();
    if (name == manifest_name) continue;
    ++files;
    ASSERT_TRUE(j["files"].contains(name)) << name;
    EXPECT_EQ(j["files"][name].get<std::string>(), io::sha256_file(e.path()));
  }
  EXPECT_EQ(files, 8u);
  EXPECT_EQ(j["results"]["states"].size(), 8u);
  const auto text = io::read_text(fs::path(dir("t1")) / "g_m1_n2.csv");
  EXPECT_EQ(text.rfind("# n_max=4 grid_step=0.0050000000000000001\nr,g\n", 0), 0u);
  const auto b = load_basis(dir("t1"));
  EXPECT_EQ(b.table.size(), 8u);
  EXPECT_EQ(b.table.energy(0, 1), j["results"]["states"][0]["energy"].get<double>());
}

TEST(Cli, ResumeMatchesFreshRun) {
  ASSERT_EQ(run("tabulate --mmax 1 --nmax 3 --out " + dir("r1")).code, 0);
  ASSERT_EQ(run("tabulate --mmax 1 --nmax 5 --rmax 12 --resume --out " + dir("r1")).code, 0);
  ASSERT_EQ(run("tabulate --mmax 1 --nmax 5 --rmax 12 --out " + dir("r2")).code, 0);
  EXPECT_TRUE(same_tree(dir("r1"), dir("r2")));
}

TEST(Cli, ConfigFileWithFlagOverride) {
  io::write_text(scratch() / "run.cfg", "m_max = 0\nn_max = 2\nk = 9\n");
  ASSERT_EQ(run("tabulate --config " + (scratch() / "run.cfg").string() + " --k 4 --out " + dir("cf")).code, 0);
  const auto j = read_manifest(dir("cf"));
  EXPECT_EQ(j["results"]["k"].get<double>(), 4.0);
  EXPECT_EQ(j["results"]["n_max"].get<int>(), 2);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("tabulate --bogus").code, 2);
  const auto bad = run("tabulate --k -1 --out " + dir("bad"));
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("k"), std::string::npos);
  const auto missing = run("figure fig1 --basis " + dir("nowhere") + " --out " + dir("f"));
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("tabulate"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir("f")));
  const auto numeric = run("tabulate --mmax 0 --nmax 40 --h 0.05 --rmax 3 --out " + dir("num"));
  EXPECT_EQ(numeric.code, 3);
  EXPECT_NE(numeric.err.find("(m=0, n="), std::string::npos) << numeric.err;
  EXPECT_EQ(run("").code, 2);
}

TEST(Cli, RefusesForeignOutputDirectory) {
  fs::create_directories(dir("foreign"));
  io::write_text(fs::path(dir("foreign")) / "notes.txt", "mine");
  EXPECT_EQ(run("exchange-demo --out " + dir("foreign")).code, 2);
  EXPECT_TRUE(fs::exists(fs::path(dir("foreign")) / "notes.txt"));
}

TEST(Cli, AnisoRecordsQ) {
  ASSERT_EQ(run("aniso --kx 9.61 --ky 4 --mmax 2 --nmax 4 --out " + dir("an")).code, 0);
  const auto j = read_manifest(dir("an"));
  EXPECT_NEAR(j["results"]["q"].get<double>(), 1.4025, 1e-15);
  EXPECT_EQ(j["results"]["states"].get<int>(), 20);
  const auto rows = io::read_csv(fs::path(dir("an")) / "aniso_energies.csv");
  EXPECT_TRUE(rows.empty());  // the parity column is text, so no row parses as numbers
  const auto text = io::read_text(fs::path(dir("an")) / "aniso_energies.csv");
  EXPECT_EQ(text.rfind("index,energy,parity\n0,", 0), 0u);
}

TEST(Cli, KernelSolveUncoupledChannelIgnoresLambda) {
  ASSERT_EQ(run("kernel-solve --m 1 --lambda 0,0.5,1 --out " + dir("k1")).code, 0);
  const auto rows = io::read_csv(fs::path(dir("k1")) / "kernel.csv");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0][3], rows[1][3]);
  EXPECT_EQ(rows[0][3], rows[2][3]);
}

TEST(Cli, PeoSumAndFiguresFromTabulatedBasis) {
  ASSERT_EQ(run("tabulate --mmax 2 --nmax 6 --out " + dir("pb")).code, 0);
  ASSERT_EQ(run("peo-sum --basis " + dir("pb") + " --dphi 0,3.14159265358979312 --out " + dir("ps")).code, 0);
  EXPECT_TRUE(fs::exists(fs::path(dir("ps")) / "S_dphi0mrad.csv"));
  EXPECT_TRUE(fs::exists(fs::path(dir("ps")) / "S_dphi3142mrad.csv"));
  const auto j = read_manifest(dir("ps"));
  EXPECT_EQ(j["inputs"]["basis"]["parameter_hash"], read_manifest(dir("pb"))["parameter_hash"]);
  ASSERT_EQ(run("figure fig2 --basis " + dir("pb") + " --out " + dir("f2")).code, 0);
  EXPECT_TRUE(fs::exists(fs::path(dir("f2")) / "fig2_g_m2_n6.csv"));
  // Basis strength must match ky.
  EXPECT_EQ(run("peo-sum --basis " + dir("pb") + " --ky 5 --out " + dir("ps2")).code, 2);
}

TEST(Cli, Fig3WritesFourSums) {
  ASSERT_EQ(run("figure fig3 --out " + dir("f3")).code, 0);
  for (int n : {50, 125, 250, 500}) {
    EXPECT_TRUE(fs::exists(fs::path(dir("f3")) / ("fig3_N" + std::to_string(n) + ".csv")));
  }
  const auto text = io::read_text(fs::path(dir("f3")) / "fig3_N50.csv");
  EXPECT_EQ(text.rfind("# n_max=50 grid_step=0.0050000000000000001\nx,S\n", 0), 0u);
}

TEST(Cli, ExchangeDemoIsDeterministic) {
  ASSERT_EQ(run("exchange-demo --sites 4 --order 6 --out " + dir("e1")).code, 0);
  ASSERT_EQ(run("exchange-demo --sites 4 --order 6 --out " + dir("e2")).code, 0);
  EXPECT_TRUE(same_tree(dir("e1"), dir("e2")));
  const auto j = nlohmann::json::parse(io::read_text(fs::path(dir("e1")) / "exchange_report.json"));
  EXPECT_EQ(j["peo"]["antisymmetric_states"].get<int>(), 6);
  EXPECT_TRUE(j["chi_squared_identity"].get<bool>());
  EXPECT_TRUE(j["spin"]["swap_relations_hold"].get<bool>());
}

TEST(Cli, NonDeterministicRunAddsRunSection) {
  ASSERT_EQ(run("exchange-demo --sites 3 --order 2 --deterministic false --out " + dir("nd")).code, 0);
  EXPECT_TRUE(read_manifest(dir("nd")).contains("run"));
  ASSERT_EQ(run("exchange-demo --sites 3 --order 2 --out " + dir("d")).code, 0);
  EXPECT_FALSE(read_manifest(dir("d")).contains("run"));
}
