#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "radelast/cli_io.hpp"

using namespace radelast;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"(
model:
  name: default
grid:
  N: 64
time:
  tau: 1e-3
  steps: 100
lambda: 1.0
initial:
  preset: perturbed
)";

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("radelast_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const int rc = std::system((std::string(RADELAST_CLI) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(ParseConfig, Minimal) {
  const RunConfig c = parse_config_text(kMinimal);
  EXPECT_EQ(c.model.name, "default");
  EXPECT_EQ(c.N, 64);
  EXPECT_DOUBLE_EQ(c.tau, 1e-3);
  EXPECT_EQ(c.steps, 100);
  EXPECT_EQ(c.lambda, 1.0);
  EXPECT_EQ(c.initial.preset, Preset::perturbed);
}

TEST(ParseConfig, NegativeTauNamesTheField) {
  try {
    parse_config_text("time:\n  tau: -1\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("tau"), std::string::npos);
    EXPECT_NE(e.field().find("tau"), std::string::npos);
  }
}

TEST(ParseConfig, UnknownKeyReportsLineAndColumn) {
  try {
    parse_config_text("grid:\n  N: 32\n  shceme: cell_centered\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "grid.shceme");
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 3);
  }
  EXPECT_THROW(parse_config_text("lamda: 1\n"), ConfigError);
  EXPECT_THROW(parse_config_text("solver: 3\n"), ConfigError);
}

TEST(ParseConfig, SyntaxErrorHasPosition) {
  try {
    parse_config_text("grid:\n  N: [1, 2\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_GT(e.line(), 0);
  }
}

TEST(ParseConfig, TypeErrors) {
  EXPECT_THROW(parse_config_text("grid:\n  N: many\n"), ConfigError);
  EXPECT_THROW(parse_config_text("grid:\n  scheme: hexagonal\n"), ConfigError);
  EXPECT_THROW(parse_config_text("initial:\n  preset: wobbly\n"), ConfigError);
}

TEST(ParseConfig, ValidationIsTotal) {
  const char* bad[] = {"grid:\n  N: 3\n", "lambda: 0\n", "model:\n  p: 1\n", "model:\n  name: neo\n",
                       "solver:\n  tol: 0\n", "solver:\n  max_iterations: 0\n", "time:\n  steps: -2\n",
                       "initial:\n  preset: custom\n", "initial:\n  noise: -1\n", "initial:\n  core: 2\n"};
  for (const char* text : bad) EXPECT_THROW(parse_config_text(text), ConfigError) << text;
}

TEST(ParseConfig, EnvironmentOverrides) {
  const EnvMap env{{"RADELAST_GRID__N", "32"}, {"RADELAST_LAMBDA", "1.5"}, {"RADELAST_time__tau", "0.002"}};
  const RunConfig c = parse_config_text(kMinimal, env);
  EXPECT_EQ(c.N, 32);
  EXPECT_EQ(c.lambda, 1.5);
  EXPECT_EQ(c.tau, 0.002);
  EXPECT_THROW(parse_config_text(kMinimal, {{"RADELAST_GRID__M", "3"}}), ConfigError);
  // Env can also create a section the file leaves out.
  EXPECT_EQ(parse_config_text("", {{"RADELAST_SOLVER__MAX_ITERATIONS", "7"}}).max_iterations, 7);
}

TEST(Serialize, RoundTripOnGeneratedConfigs) {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    RunConfig c;
    c.model.name = k % 2 ? "power" : "default";
    c.model.p = 1.0 + 3 * u(rng) + 1e-9;
    c.model.q = 1.0 + 3 * u(rng) + 1e-9;
    c.model.c1 = 0.1 + u(rng);
    c.model.c2 = 0.1 + u(rng);
    c.N = 4 + static_cast<int>(u(rng) * 500);
    c.scheme = k % 3 ? GridScheme::cell_centered : GridScheme::shifted_uniform;
    c.tau = std::pow(10.0, -6 * u(rng));
    c.steps = static_cast<int>(u(rng) * 1000);
    c.lambda = 0.2 + 3 * u(rng);
    c.initial.preset = static_cast<Preset>(k % 4);
    c.initial.epsilon = u(rng) - 0.5;
    c.initial.velocity_amplitude = u(rng);
    c.initial.noise = u(rng) * 0.01;
    c.initial.core = 0.01 + 0.9 * u(rng);
    c.initial.expression = k % 4 == 3 ? "lb*rho*(1 + 0.1*sin(pi*rho)) # \"quoted\": yes" : "";
    c.tol = std::pow(10.0, -14 * u(rng));
    c.max_iterations = 1 + static_cast<int>(u(rng) * 300);
    c.output_dir = "out dir/run: " + std::to_string(k);
    c.snapshot_every = static_cast<int>(u(rng) * 20);
    c.seed = rng();
    const RunConfig back = parse_config_text(serialize(c));
    EXPECT_TRUE(back == c) << serialize(c);
  }
}

TEST(Hash, GitBlobIds) {
  EXPECT_EQ(git_blob_sha1(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  EXPECT_EQ(git_blob_sha1("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST(Format, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.001), "0.001");
  EXPECT_EQ(format_number(8.0), "8");
  const double x = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_number(x)), x);
}

TEST(WriteOutputs, HomogeneousRunFiles) {
  RunConfig c = parse_config_text(kMinimal);
  c.initial.preset = Preset::homogeneous;
  c.steps = 3;
  c.snapshot_every = 1;
  const auto tr = run(c);
  const auto dir = scratch("homog");
  const auto files = write_outputs(tr, dir);

  const Table diag = read_csv(files.diagnostics);
  EXPECT_EQ(diag.header, (std::vector<std::string>{"step", "t", "E", "max_entropy_defect", "max_el_defect",
                                                   "min_alpha_prime", "cavity_radius", "newton_iters"}));
  ASSERT_EQ(diag.rows.size(), 4u);
  for (double e : diag.column("E")) EXPECT_NEAR(e, 8.0, 1e-12);

  ASSERT_EQ(files.snapshots.size(), 4u);
  const Table snap = read_csv(files.snapshots.back());
  EXPECT_EQ(snap.header, (std::vector<std::string>{"rho", "alpha", "beta", "gamma", "v"}));
  EXPECT_EQ(snap.rows.size(), static_cast<std::size_t>(c.N + 1));
  EXPECT_EQ(snap.column("rho").back(), 1.0);

  const std::string manifest = slurp(files.manifest);
  EXPECT_NE(manifest.find(git_blob_sha1(slurp(files.diagnostics))), std::string::npos);
  EXPECT_NE(manifest.find("\"tau\""), std::string::npos);
}

TEST(WriteOutputs, ManifestDeterministic) {
  RunConfig c = parse_config_text(kMinimal);
  c.steps = 10;
  c.initial.noise = 0.01;
  c.seed = 5;
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  write_outputs(run(c), a);
  write_outputs(run(c), b);
  EXPECT_EQ(slurp(a / "manifest.json"), slurp(b / "manifest.json"));
  EXPECT_EQ(slurp(a / "diagnostics.csv"), slurp(b / "diagnostics.csv"));
}

TEST(WriteOutputs, UnwritableDirectoryIsIoError) {
  RunConfig c = parse_config_text(kMinimal);
  c.steps = 0;
  const auto tr = run(c);
  const auto dir = scratch("blocked");
  std::ofstream(dir / "file") << "x";
  EXPECT_THROW(write_outputs(tr, dir / "file" / "sub"), IoError);
}

TEST(Svg, ChartHasOnePolylinePerSeries) {
  const std::string s = svg_line_chart("t", "x", {Series{"a", {0, 1}, {0, 1}}, Series{"b", {0, 1}, {1, 0}}});
  std::size_t count = 0;
  for (std::size_t p = s.find("<polyline"); p != std::string::npos; p = s.find("<polyline", p + 1)) ++count;
  EXPECT_EQ(count, 2u);
  EXPECT_EQ(s.rfind("</svg>"), s.size() - 7);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("cli");
  std::ofstream(dir / "ok.yaml") << "initial:\n  preset: homogeneous\ntime:\n  steps: 3\ngrid:\n  N: 16\n";
  std::ofstream(dir / "bad.yaml") << "time:\n  tau: -1\n";
  EXPECT_EQ(run_cli("run --config " + (dir / "ok.yaml").string() + " --out " + (dir / "out").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "diagnostics.csv"));
  EXPECT_EQ(run_cli("run --config " + (dir / "bad.yaml").string() + " --out " + (dir / "o2").string()), 2);
  EXPECT_EQ(run_cli("run --config " + (dir / "missing.yaml").string()), 4);
  EXPECT_EQ(run_cli("audit-model"), 0);
  EXPECT_EQ(run_cli("check-identities --levels 16,32"), 0);
  EXPECT_EQ(run_cli("plot --out " + (dir / "out").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "energy.svg"));
  EXPECT_TRUE(fs::exists(dir / "out" / "profiles.svg"));
  EXPECT_EQ(run_cli("plot --out " + (dir / "nowhere").string()), 4);
}

TEST(Cli, SolverFailureExitCode) {
  const auto dir = scratch("cli_fail");
  std::ofstream(dir / "c.yaml") << "initial:\n  velocity_amplitude: 1.0\nsolver:\n  max_iterations: 1\n"
                                   "grid:\n  N: 16\ntime:\n  steps: 2\n";
  EXPECT_EQ(run_cli("run --config " + (dir / "c.yaml").string() + " --out " + (dir / "o").string()), 3);
  EXPECT_TRUE(fs::exists(dir / "o" / "manifest.json"));
}
