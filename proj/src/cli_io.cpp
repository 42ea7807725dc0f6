#include "radelast/cli_io.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

extern char** environ;

namespace radelast {

namespace fs = std::filesystem;

// fmt picks the shortest text that parses back to the same double.
std::string format_number(double x) { return fmt::format("{}", x); }

// ---------------------------------------------------------------------------
// Config schema

namespace {

enum class FieldType { real, integer, u64, text };

struct Field {
  const char* section;  // "" for top level
  const char* key;
  FieldType type;
};

constexpr Field kFields[] = {
    {"model", "name", FieldType::text},
    {"model", "p", FieldType::real},
    {"model", "q", FieldType::real},
    {"model", "c1", FieldType::real},
    {"model", "c2", FieldType::real},
    {"model", "h_quadratic", FieldType::real},
    {"model", "h_barrier", FieldType::real},
    {"grid", "N", FieldType::integer},
    {"grid", "scheme", FieldType::text},
    {"time", "tau", FieldType::real},
    {"time", "steps", FieldType::integer},
    {"", "lambda", FieldType::real},
    {"initial", "preset", FieldType::text},
    {"initial", "epsilon", FieldType::real},
    {"initial", "velocity_amplitude", FieldType::real},
    {"initial", "noise", FieldType::real},
    {"initial", "core", FieldType::real},
    {"initial", "expression", FieldType::text},
    {"solver", "tol", FieldType::real},
    {"solver", "max_iterations", FieldType::integer},
    {"output", "dir", FieldType::text},
    {"output", "snapshot_every", FieldType::integer},
    {"", "seed", FieldType::u64},
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string dotted(const Field& f) { return *f.section ? std::string(f.section) + "." + f.key : std::string(f.key); }

bool is_section(const std::string& name) {
  return std::any_of(std::begin(kFields), std::end(kFields),
                     [&](const Field& f) { return *f.section && name == f.section; });
}

const Field* find_field(const std::string& section, const std::string& key, bool case_insensitive) {
  for (const auto& f : kFields) {
    const bool s = case_insensitive ? lower(f.section) == lower(section) : section == f.section;
    const bool k = case_insensitive ? lower(f.key) == lower(key) : key == f.key;
    if (s && k) return &f;
  }
  return nullptr;
}

[[noreturn]] void fail_at(const std::string& msg, const std::string& field, const YAML::Mark& mark) {
  const int line = mark.line >= 0 ? mark.line + 1 : -1;
  const int col = mark.column >= 0 ? mark.column + 1 : -1;
  std::string where = line > 0 ? fmt::format(" (line {}, column {})", line, col) : std::string{};
  throw ConfigError(msg + where, field, line, col);
}

void assign(RunConfig& cfg, const Field& f, const YAML::Node& node) {
  const std::string name = dotted(f);
  if (!node.IsScalar()) fail_at("config key '" + name + "' must be a scalar", name, node.Mark());
  try {
    const auto real = [&] { return node.as<double>(); };
    const auto integer = [&] { return node.as<int>(); };
    const std::string text = node.as<std::string>();
    if (name == "model.name") cfg.model.name = text;
    else if (name == "model.p") cfg.model.p = real();
    else if (name == "model.q") cfg.model.q = real();
    else if (name == "model.c1") cfg.model.c1 = real();
    else if (name == "model.c2") cfg.model.c2 = real();
    else if (name == "model.h_quadratic") cfg.model.h_quadratic = real();
    else if (name == "model.h_barrier") cfg.model.h_barrier = real();
    else if (name == "grid.N") cfg.N = integer();
    else if (name == "grid.scheme") cfg.scheme = parse_scheme(text);
    else if (name == "time.tau") cfg.tau = real();
    else if (name == "time.steps") cfg.steps = integer();
    else if (name == "lambda") cfg.lambda = real();
    else if (name == "initial.preset") cfg.initial.preset = parse_preset(text);
    else if (name == "initial.epsilon") cfg.initial.epsilon = real();
    else if (name == "initial.velocity_amplitude") cfg.initial.velocity_amplitude = real();
    else if (name == "initial.noise") cfg.initial.noise = real();
    else if (name == "initial.core") cfg.initial.core = real();
    else if (name == "initial.expression") cfg.initial.expression = text;
    else if (name == "solver.tol") cfg.tol = real();
    else if (name == "solver.max_iterations") cfg.max_iterations = integer();
    else if (name == "output.dir") cfg.output_dir = text;
    else if (name == "output.snapshot_every") cfg.snapshot_every = integer();
    else if (name == "seed") cfg.seed = node.as<std::uint64_t>();
  } catch (const YAML::BadConversion&) {
    fail_at("config key '" + name + "' has a value of the wrong type", name, node.Mark());
  } catch (const std::invalid_argument& e) {
    fail_at(std::string(e.what()) + " for '" + name + "'", name, node.Mark());
  }
}

void apply_env(YAML::Node& root, const EnvMap& env) {
  for (const auto& [var, value] : env) {
    const std::string prefix = "RADELAST_";
    if (var.rfind(prefix, 0) != 0) continue;
    const std::string rest = var.substr(prefix.size());
    const auto sep = rest.find("__");
    const std::string section = sep == std::string::npos ? "" : rest.substr(0, sep);
    const std::string key = sep == std::string::npos ? rest : rest.substr(sep + 2);
    const Field* f = find_field(section, key, true);
    if (!f) throw ConfigError("environment variable " + var + " does not name a config key", var);
    if (*f->section) {
      YAML::Node sec = root[f->section];
      sec[f->key] = value;
    } else {
      root[f->key] = value;
    }
  }
}

}  // namespace

EnvMap environment_overrides() {
  EnvMap env;
  for (char** e = environ; e && *e; ++e) {
    const std::string kv(*e);
    const auto eq = kv.find('=');
    if (eq == std::string::npos) continue;
    const std::string name = kv.substr(0, eq);
    if (name.rfind("RADELAST_", 0) == 0) env[name] = kv.substr(eq + 1);
  }
  return env;
}

void validate(const RunConfig& c) {
  auto bad = [](const std::string& field, const std::string& why) {
    throw ConfigError("invalid config: " + field + " " + why, field);
  };
  if (c.model.name != "default" && c.model.name != "power") bad("model.name", "must be 'default' or 'power'");
  if (!(c.model.p > 1.0) || !std::isfinite(c.model.p)) bad("model.p", "must be > 1");
  if (!(c.model.q > 1.0) || !std::isfinite(c.model.q)) bad("model.q", "must be > 1");
  if (!(c.model.c1 > 0.0)) bad("model.c1", "must be > 0");
  if (!(c.model.c2 > 0.0)) bad("model.c2", "must be > 0");
  if (!(c.model.h_quadratic > 0.0)) bad("model.h_quadratic", "must be > 0");
  if (!(c.model.h_barrier > 0.0)) bad("model.h_barrier", "must be > 0");
  if (c.N < 4) bad("grid.N", "must be >= 4");
  if (!(c.tau > 0.0) || !std::isfinite(c.tau)) bad("tau", "must be > 0");
  if (c.steps < 0) bad("time.steps", "must be >= 0");
  if (!(c.lambda > 0.0) || !std::isfinite(c.lambda)) bad("lambda", "must be > 0");
  if (!std::isfinite(c.initial.epsilon)) bad("initial.epsilon", "must be finite");
  if (!std::isfinite(c.initial.velocity_amplitude)) bad("initial.velocity_amplitude", "must be finite");
  if (!(c.initial.noise >= 0.0) || !std::isfinite(c.initial.noise)) bad("initial.noise", "must be >= 0");
  if (!(c.initial.core > 0.0 && c.initial.core <= 1.0)) bad("initial.core", "must be in (0, 1]");
  if (c.initial.preset == Preset::custom && c.initial.expression.empty()) {
    bad("initial.expression", "is required for the custom preset");
  }
  if (!(c.tol > 0.0)) bad("solver.tol", "must be > 0");
  if (c.max_iterations < 1) bad("solver.max_iterations", "must be >= 1");
  if (c.snapshot_every < 0) bad("output.snapshot_every", "must be >= 0");
  if (c.output_dir.empty()) bad("output.dir", "must not be empty");
}

RunConfig parse_config_text(const std::string& text, const EnvMap& env) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    fail_at("config parse error: " + e.msg, "", e.mark);
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap()) fail_at("config must be a mapping", "", root.Mark());
  apply_env(root, env);

  RunConfig cfg;
  for (const auto& item : root) {
    const std::string key = item.first.as<std::string>();
    if (is_section(key)) {
      if (!item.second.IsMap()) fail_at("config section '" + key + "' must be a mapping", key, item.second.Mark());
      for (const auto& sub : item.second) {
        const std::string k = sub.first.as<std::string>();
        const Field* f = find_field(key, k, false);
        if (!f) fail_at("unknown config key '" + key + "." + k + "'", key + "." + k, sub.first.Mark());
        assign(cfg, *f, sub.second);
      }
    } else {
      const Field* f = find_field("", key, false);
      if (!f) fail_at("unknown config key '" + key + "'", key, item.first.Mark());
      assign(cfg, *f, item.second);
    }
  }
  validate(cfg);
  return cfg;
}

RunConfig parse_config_file(const fs::path& path, const EnvMap& env) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), env);
}

namespace {

std::string quoted(const std::string& s) {
  YAML::Emitter e;
  e << YAML::DoubleQuoted << s;
  return e.c_str();
}

}  // namespace

std::string serialize(const RunConfig& c) {
  std::string out;
  auto line = [&](const std::string& s) { out += s + "\n"; };
  line("model:");
  line("  name: " + quoted(c.model.name));
  line("  p: " + format_number(c.model.p));
  line("  q: " + format_number(c.model.q));
  line("  c1: " + format_number(c.model.c1));
  line("  c2: " + format_number(c.model.c2));
  line("  h_quadratic: " + format_number(c.model.h_quadratic));
  line("  h_barrier: " + format_number(c.model.h_barrier));
  line("grid:");
  line("  N: " + std::to_string(c.N));
  line("  scheme: " + to_string(c.scheme));
  line("time:");
  line("  tau: " + format_number(c.tau));
  line("  steps: " + std::to_string(c.steps));
  line("lambda: " + format_number(c.lambda));
  line("initial:");
  line("  preset: " + to_string(c.initial.preset));
  line("  epsilon: " + format_number(c.initial.epsilon));
  line("  velocity_amplitude: " + format_number(c.initial.velocity_amplitude));
  line("  noise: " + format_number(c.initial.noise));
  line("  core: " + format_number(c.initial.core));
  line("  expression: " + quoted(c.initial.expression));
  line("solver:");
  line("  tol: " + format_number(c.tol));
  line("  max_iterations: " + std::to_string(c.max_iterations));
  line("output:");
  line("  dir: " + quoted(c.output_dir));
  line("  snapshot_every: " + std::to_string(c.snapshot_every));
  line("seed: " + std::to_string(c.seed));
  return out;
}

// ---------------------------------------------------------------------------
// Outputs

std::string git_blob_sha1(const std::string& content) {
  const std::string blob = "blob " + std::to_string(content.size()) + std::string(1, '\0') + content;
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(blob.data(), blob.size(), md, &len, EVP_sha1(), nullptr) != 1) {
    throw std::runtime_error("SHA-1 digest failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string diagnostics_csv(const Trajectory& tr) {
  std::string s = "step,t,E,max_entropy_defect,max_el_defect,min_alpha_prime,cavity_radius,newton_iters\n";
  for (const auto& d : tr.diagnostics) {
    s += fmt::format("{},{},{},{},{},{},{},{}\n", d.step, format_number(d.t), format_number(d.energy),
                     format_number(d.max_entropy_defect), format_number(d.max_el_defect),
                     format_number(d.min_alpha_prime), format_number(d.cavity_radius), d.newton_iters);
  }
  return s;
}

std::string snapshot_csv(const GridSpec& g, const State& s) {
  std::string out = "rho,alpha,beta,gamma,v\n";
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double beta = i + 1 < n ? 0.5 * (s.beta[i] + s.beta[i + 1]) : s.beta[i];
    out += fmt::format("{},{},{},{},{}\n", format_number(g.nodes[i]), format_number(s.alpha[i]), format_number(beta),
                       format_number(s.gamma[i]), format_number(s.v[i]));
  }
  return out;
}

nlohmann::ordered_json config_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["model"] = {{"name", c.model.name}, {"p", c.model.p},   {"q", c.model.q},
                {"c1", c.model.c1},     {"c2", c.model.c2}, {"h_quadratic", c.model.h_quadratic},
                {"h_barrier", c.model.h_barrier}};
  j["grid"] = {{"N", c.N}, {"scheme", to_string(c.scheme)}};
  j["time"] = {{"tau", c.tau}, {"steps", c.steps}};
  j["lambda"] = c.lambda;
  j["initial"] = {{"preset", to_string(c.initial.preset)},
                  {"epsilon", c.initial.epsilon},
                  {"velocity_amplitude", c.initial.velocity_amplitude},
                  {"noise", c.initial.noise},
                  {"core", c.initial.core},
                  {"expression", c.initial.expression}};
  j["solver"] = {{"tol", c.tol}, {"max_iterations", c.max_iterations}};
  j["output"] = {{"dir", c.output_dir}, {"snapshot_every", c.snapshot_every}};
  j["seed"] = c.seed;
  return j;
}

}  // namespace

OutputFiles write_outputs(const Trajectory& tr, const fs::path& out_dir) {
  if (tr.states.empty()) throw IoError("trajectory is empty, nothing to write");
  std::error_code ec;
  fs::create_directories(out_dir / "snapshots", ec);
  if (ec) throw IoError("cannot create " + (out_dir / "snapshots").string() + ": " + ec.message());

  OutputFiles files;
  nlohmann::ordered_json outputs;

  files.diagnostics = out_dir / "diagnostics.csv";
  const std::string diag = diagnostics_csv(tr);
  write_file(files.diagnostics, diag);
  outputs["diagnostics.csv"] = git_blob_sha1(diag);

  const int last = static_cast<int>(tr.states.size()) - 1;
  const int every = tr.config.snapshot_every;
  for (int j = 0; j <= last; ++j) {
    const bool take = j == 0 || j == last || (every > 0 && j % every == 0);
    if (!take) continue;
    const std::string name = fmt::format("snapshots/step_{:06d}.csv", j);
    const std::string body = snapshot_csv(tr.grid, tr.states[static_cast<std::size_t>(j)]);
    files.snapshots.push_back(out_dir / name);
    write_file(files.snapshots.back(), body);
    outputs[name] = git_blob_sha1(body);
  }

  nlohmann::ordered_json manifest;
  manifest["config"] = config_json(tr.config);
  manifest["status"] = tr.ok ? "ok" : "solver_failure";
  if (!tr.ok) manifest["error"] = tr.error;
  manifest["states"] = tr.states.size();
  manifest["outputs"] = outputs;
  files.manifest = out_dir / "manifest.json";
  write_file(files.manifest, manifest.dump(2) + "\n");
  return files;
}

std::vector<double> Table::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw IoError("no column '" + name + "'");
  const auto c = static_cast<std::size_t>(it - header.begin());
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r.at(c));
  return out;
}

Table read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty file " + path.string());
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw IoError("bad number '" + cell + "' in " + path.string());
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string svg_line_chart(const std::string& title, const std::string& xlabel, const std::vector<Series>& series) {
  const double W = 800, H = 480, L = 90, R = 170, T = 40, B = 60;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    for (double x : s.x) x0 = std::min(x0, x), x1 = std::max(x1, x);
    for (double y : s.y) y0 = std::min(y0, y), y1 = std::max(y1, y);
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) {
    const double pad = std::max(1e-12, std::abs(y0) * 1e-6);
    y0 -= pad;
    y1 += pad;
  }
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  std::string s = fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\">\n", W, H);
  s += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", W, H);
  s += fmt::format("<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">{}</text>\n", L, title);
  s += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", L, T,
                   W - L - R, H - T - B);
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0;
    const double yv = y0 + (y1 - y0) * k / 4.0;
    s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"11\" "
                     "text-anchor=\"middle\">{:.4g}</text>\n",
                     px(xv), H - B + 16, xv);
    s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"11\" "
                     "text-anchor=\"end\">{:.6g}</text>\n",
                     L - 6, py(yv) + 4, yv);
  }
  s += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"13\" "
                   "text-anchor=\"middle\">{}</text>\n",
                   L + (W - L - R) / 2, H - 16, xlabel);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = colors[i % 5];
    std::string pts;
    for (std::size_t k = 0; k < series[i].x.size() && k < series[i].y.size(); ++k) {
      pts += fmt::format("{:.2f},{:.2f} ", px(series[i].x[k]), py(series[i].y[k]));
    }
    s += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", color, pts);
    s += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{}\">{}</text>\n",
                     W - R + 12, T + 16 + 18 * static_cast<double>(i), color, series[i].label);
  }
  s += "</svg>\n";
  return s;
}

}  // namespace radelast
