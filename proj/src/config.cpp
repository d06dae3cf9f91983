#include "glqlab/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace glqlab {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

struct RawEntry {
  std::string value;
  int line = 0;
};

using RawMap = std::map<std::string, RawEntry>;

double parse_scalar(const std::string& text, int line) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end == t.c_str() || *end != '\0')
    throw ConfigError("expected a number, got '" + t + "'", line);
  return v;
}

// [v1, v2, ...]
Vec parse_vector(const std::string& text, int line) {
  const std::string t = trim(text);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']')
    throw ConfigError("expected a bracketed vector, got '" + t + "'", line);
  Vec out;
  const std::string inner = trim(t.substr(1, t.size() - 2));
  if (inner.empty()) return out;
  std::stringstream ss(inner);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_scalar(item, line));
  return out;
}

// [[r00, r01], [r10, r11]]
Matrix parse_matrix(const std::string& text, int line) {
  const std::string t = trim(text);
  if (t.size() < 4 || t.front() != '[' || t.back() != ']')
    throw ConfigError("expected a bracketed matrix, got '" + t + "'", line);
  std::vector<Vec> rows;
  size_t i = 1;
  while (i < t.size() - 1) {
    while (i < t.size() - 1 && (t[i] == ' ' || t[i] == ',' || t[i] == '\t')) ++i;
    if (i >= t.size() - 1) break;
    if (t[i] != '[') throw ConfigError("malformed matrix row", line);
    const size_t close = t.find(']', i);
    if (close == std::string::npos) throw ConfigError("unterminated matrix row", line);
    rows.push_back(parse_vector(t.substr(i, close - i + 1), line));
    i = close + 1;
  }
  if (rows.empty()) throw ConfigError("matrix has no rows", line);
  for (const Vec& r : rows)
    if (r.size() != rows[0].size()) throw ConfigError("ragged matrix rows", line);
  return Matrix::from_rows(rows);
}

class Reader {
 public:
  explicit Reader(RawMap raw) : raw_(std::move(raw)) {}

  bool has(const std::string& key) const { return raw_.count(key) > 0; }

  std::string str(const std::string& key, const std::string& fallback) const {
    auto it = raw_.find(key);
    return it == raw_.end() ? fallback : it->second.value;
  }
  double num(const std::string& key, double fallback) const {
    auto it = raw_.find(key);
    return it == raw_.end() ? fallback : parse_scalar(it->second.value, it->second.line);
  }
  Vec vec(const std::string& key, Vec fallback = {}) const {
    auto it = raw_.find(key);
    return it == raw_.end() ? std::move(fallback) : parse_vector(it->second.value, it->second.line);
  }
  Matrix mat(const std::string& key) const {
    auto it = raw_.find(key);
    if (it == raw_.end()) throw ConfigError("missing required matrix '" + key + "'", 0);
    return parse_matrix(it->second.value, it->second.line);
  }
  int entry_line(const std::string& key) const {
    auto it = raw_.find(key);
    return it == raw_.end() ? 0 : it->second.line;
  }

 private:
  RawMap raw_;
};

}  // namespace

RunConfig parse_config(const std::string& text) {
  RawMap raw;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", lineno);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", lineno);
    raw[key] = RawEntry{value, lineno};
  }
  Reader r(std::move(raw));

  RunConfig cfg;
  const std::string source = r.str("problem", "inline");
  if (source == "inline") cfg.source = RunConfig::Source::Inline;
  else if (source == "heat") cfg.source = RunConfig::Source::Heat;
  else throw ConfigError("problem must be 'inline' or 'heat'", r.entry_line("problem"));

  if (cfg.source == RunConfig::Source::Inline) {
    cfg.A = r.mat("A");
    cfg.B = r.mat("B");
    cfg.C = r.mat("C");
    cfg.K = r.mat("K");
    cfg.z = r.vec("z", Vec(cfg.A.rows(), 0.0));
    cfg.v = r.vec("v", Vec(cfg.B.cols(), 0.0));
  }

  cfg.x0 = r.vec("x0");
  if (r.has("horizons")) {
    cfg.horizons.clear();
    for (double h : r.vec("horizons")) cfg.horizons.push_back(h);
    if (cfg.horizons.empty() || !std::is_sorted(cfg.horizons.begin(), cfg.horizons.end()))
      throw ConfigError("horizons must be nonempty and increasing", r.entry_line("horizons"));
  }
  cfg.T = r.num("T", 0.0);
  cfg.dt = r.num("dt", cfg.dt);
  if (cfg.dt <= 0.0) throw ConfigError("dt must be positive", r.entry_line("dt"));
  cfg.epsilon = r.num("epsilon", cfg.epsilon);
  cfg.seed = static_cast<uint64_t>(r.num("seed", 1.0));
  cfg.out_dir = r.str("out", cfg.out_dir);

  cfg.heat.c = r.num("heat.c", 0.0);
  cfg.heat.n_modes = static_cast<int>(r.num("heat.n_modes", 8.0));
  cfg.heat.omega_a = r.num("heat.omega_a", 0.5);
  cfg.heat.omega_b = r.num("heat.omega_b", 2.0);
  const std::string op = r.str("heat.operator", "B2");
  if (op == "B1") cfg.heat.op = HeatOperator::B1;
  else if (op == "B2") cfg.heat.op = HeatOperator::B2;
  else throw ConfigError("heat.operator must be B1 or B2", r.entry_line("heat.operator"));
  cfg.heat.kappa = r.num("heat.kappa", 1.0);
  cfg.heat.z_coeffs = r.vec("heat.z");
  cfg.heat.v_coeffs = r.vec("heat.v");
  cfg.heat_demo = r.str("heat.demo", cfg.heat_demo);
  if (r.has("heat.n_list")) {
    cfg.n_list.clear();
    for (double n : r.vec("heat.n_list")) cfg.n_list.push_back(static_cast<int>(n));
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'", 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt(const Vec& v) {
  std::string s = "[";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + "]";
}

std::string fmt(const Matrix& m) {
  std::string s = "[";
  for (int i = 0; i < m.rows(); ++i) {
    if (i) s += ", ";
    s += fmt(m.row(i));
  }
  return s + "]";
}

}  // namespace

std::string emit_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "problem = " << (cfg.source == RunConfig::Source::Inline ? "inline" : "heat") << "\n";
  if (cfg.source == RunConfig::Source::Inline) {
    out << "A = " << fmt(cfg.A) << "\n";
    out << "B = " << fmt(cfg.B) << "\n";
    out << "C = " << fmt(cfg.C) << "\n";
    out << "K = " << fmt(cfg.K) << "\n";
    out << "z = " << fmt(cfg.z) << "\n";
    out << "v = " << fmt(cfg.v) << "\n";
  } else {
    out << "heat.c = " << fmt(cfg.heat.c) << "\n";
    out << "heat.n_modes = " << cfg.heat.n_modes << "\n";
    out << "heat.omega_a = " << fmt(cfg.heat.omega_a) << "\n";
    out << "heat.omega_b = " << fmt(cfg.heat.omega_b) << "\n";
    out << "heat.operator = " << (cfg.heat.op == HeatOperator::B1 ? "B1" : "B2") << "\n";
    out << "heat.kappa = " << fmt(cfg.heat.kappa) << "\n";
    out << "heat.z = " << fmt(cfg.heat.z_coeffs) << "\n";
    out << "heat.v = " << fmt(cfg.heat.v_coeffs) << "\n";
    out << "heat.demo = " << cfg.heat_demo << "\n";
  }
  if (!cfg.x0.empty()) out << "x0 = " << fmt(cfg.x0) << "\n";
  out << "horizons = " << fmt(cfg.horizons) << "\n";
  if (cfg.T > 0.0) out << "T = " << fmt(cfg.T) << "\n";
  out << "dt = " << fmt(cfg.dt) << "\n";
  out << "epsilon = " << fmt(cfg.epsilon) << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "out = " << cfg.out_dir << "\n";
  return out.str();
}

GlqProblem problem_from_config(const RunConfig& cfg) {
  if (cfg.source == RunConfig::Source::Heat) return build_system(cfg.heat);
  return make_problem(cfg.A, cfg.B, cfg.C, cfg.K, cfg.z, cfg.v);
}

Vec initial_state_from_config(const RunConfig& cfg, const GlqProblem& pb) {
  if (!cfg.x0.empty()) {
    if (static_cast<int>(cfg.x0.size()) != pb.n())
      throw ConfigError("x0 size does not match the problem dimension", 0);
    return cfg.x0;
  }
  Vec x0(pb.n());
  for (int k = 1; k <= pb.n(); ++k) x0[k - 1] = 1.0 / k;
  return x0;
}

}  // namespace glqlab
