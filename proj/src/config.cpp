#include "gb2d/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace gb2d {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

// (section, key) -> (value, line number); section "" holds top-level keys.
using RawConfig = std::map<std::pair<std::string, std::string>, std::pair<std::string, int>>;

RawConfig tokenize(const std::string& text) {
  RawConfig raw;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    if (raw.count({section, key}))
      throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" +
                        (section.empty() ? key : section + "." + key) + "'");
    raw[{section, key}] = {value, lineno};
  }
  return raw;
}

class Extractor {
public:
  explicit Extractor(RawConfig raw) : raw_(std::move(raw)) {}

  bool has(const std::string& section, const std::string& key) const {
    return raw_.count({section, key}) > 0;
  }

  std::string qualified(const std::string& section, const std::string& key) const {
    return section.empty() ? key : section + "." + key;
  }

  template <class T>
  void get(const std::string& section, const std::string& key, T& out) {
    auto it = raw_.find({section, key});
    if (it == raw_.end()) return;  // keep default
    consumed_.insert({section, key});
    parse_value(it->second.first, out, qualified(section, key));
  }

  // every key must have been consumed; anything left is unknown
  void finish() const {
    for (const auto& [sk, vl] : raw_) {
      if (consumed_.count(sk)) continue;
      const std::string where =
          vl.second > 0 ? "config line " + std::to_string(vl.second) : "override";
      throw ConfigError(where + ": unknown key '" + qualified(sk.first, sk.second) + "'");
    }
  }

private:
  static void parse_value(const std::string& v, double& out, const std::string& q) {
    try {
      std::size_t pos = 0;
      out = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("trailing");
    } catch (...) {
      throw ConfigError("key '" + q + "': expected a number, got '" + v + "'");
    }
  }
  static void parse_value(const std::string& v, int& out, const std::string& q) {
    try {
      std::size_t pos = 0;
      out = std::stoi(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("trailing");
    } catch (...) {
      throw ConfigError("key '" + q + "': expected an integer, got '" + v + "'");
    }
  }
  static void parse_value(const std::string& v, std::uint64_t& out, const std::string& q) {
    try {
      std::size_t pos = 0;
      out = std::stoull(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("trailing");
    } catch (...) {
      throw ConfigError("key '" + q + "': expected a non-negative integer, got '" + v + "'");
    }
  }
  static void parse_value(const std::string& v, bool& out, const std::string& q) {
    if (v == "true" || v == "1")
      out = true;
    else if (v == "false" || v == "0")
      out = false;
    else
      throw ConfigError("key '" + q + "': expected true/false, got '" + v + "'");
  }
  static void parse_value(const std::string& v, std::string& out, const std::string&) {
    out = v;
  }
  template <class T>
  static void parse_value(const std::string& v, std::vector<T>& out, const std::string& q) {
    out.clear();
    std::istringstream is(v);
    std::string item;
    while (std::getline(is, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      T x{};
      parse_value(item, x, q);
      out.push_back(x);
    }
  }
  static void parse_value(const std::string& v, std::vector<PerturbationMode>& out,
                          const std::string& q) {
    // semicolon-separated quadruples: k1,k2,amplitude,phase ; ...
    out.clear();
    std::istringstream is(v);
    std::string tuple;
    while (std::getline(is, tuple, ';')) {
      tuple = trim(tuple);
      if (tuple.empty()) continue;
      std::vector<double> nums;
      parse_value(tuple, nums, q);
      if (nums.size() != 4)
        throw ConfigError("key '" + q + "': each mode needs k1,k2,amplitude,phase");
      PerturbationMode m;
      m.k1 = static_cast<int>(nums[0]);
      m.k2 = static_cast<int>(nums[1]);
      m.amplitude = nums[2];
      m.phase = nums[3];
      out.push_back(m);
    }
  }
  static void parse_value(const std::string& v, ExperimentConfig::Mode& out,
                          const std::string& q) {
    if (v == "single") out = ExperimentConfig::Mode::Single;
    else if (v == "eps_sweep") out = ExperimentConfig::Mode::EpsSweep;
    else if (v == "resolution_sweep") out = ExperimentConfig::Mode::ResolutionSweep;
    else if (v == "verify_suite") out = ExperimentConfig::Mode::VerifySuite;
    else if (v == "picard_compare") out = ExperimentConfig::Mode::PicardCompare;
    else
      throw ConfigError("key '" + q + "': unknown mode '" + v + "'");
  }
  static void parse_value(const std::string& v, Scheme& out, const std::string& q) {
    if (v == "imex_rk2") out = Scheme::IMEX_RK2;
    else if (v == "imex_rk4") out = Scheme::IMEX_RK4;
    else
      throw ConfigError("key '" + q + "': unknown scheme '" + v + "'");
  }

  RawConfig raw_;
  std::set<std::pair<std::string, std::string>> consumed_;
};

void validate(const ExperimentConfig& c) {
  using Mode = ExperimentConfig::Mode;
  if (c.n1 < 8 || c.n2 < 8 || c.n1 % 2 || c.n2 % 2)
    throw ConfigError("grid.n1/n2 must be even and >= 8");
  if (!(c.slope_L > 0.0)) throw ConfigError("initial.L must be > 0");
  if (!(c.eps >= 0.0)) throw ConfigError("initial.eps must be >= 0");
  if (!c.eps_list.empty() && c.mode != Mode::EpsSweep)
    throw ConfigError("initial.eps_list requires mode = eps_sweep");
  if (c.mode == Mode::EpsSweep && c.eps_list.size() < 2)
    throw ConfigError("mode = eps_sweep requires initial.eps_list with >= 2 entries");
  if (!c.n_list.empty() && c.mode != Mode::ResolutionSweep)
    throw ConfigError("grid.n_list requires mode = resolution_sweep");
  if (c.mode == Mode::ResolutionSweep && c.n_list.size() < 2)
    throw ConfigError("mode = resolution_sweep requires grid.n_list with >= 2 entries");
  for (double e : c.eps_list)
    if (!(e > 0.0 && e <= 1.0)) throw ConfigError("initial.eps_list entries must lie in (0,1]");
  for (int n : c.n_list)
    if (n < 8 || n % 2) throw ConfigError("grid.n_list entries must be even and >= 8");
  if (c.eps > 1.0) throw ConfigError("initial.eps must lie in [0, 1]");
  if (c.diag_every < 1) throw ConfigError("output.diag_every must be >= 1");
  if (c.checkpoint_every < 0) throw ConfigError("output.checkpoint_every must be >= 0");
  if (c.perturbation.random_modes < 0) throw ConfigError("initial.random_modes must be >= 0");
  if (c.perturbation.random_max_k < 1) throw ConfigError("initial.random_max_k must be >= 1");
  if (!(c.perturbation.margin_budget > 0.0 && c.perturbation.margin_budget <= 1.0))
    throw ConfigError("initial.margin_budget must lie in (0, 1]");
  if (!(c.lame_mu > 0.0) || !(3.0 * c.lame_lambda + 2.0 * c.lame_mu > 0.0))
    throw ConfigError("elastic.lambda/mu must satisfy mu > 0 and 3*lambda + 2*mu > 0");
  try {
    c.solver.validate();
  } catch (const InvalidInputError& e) {
    throw ConfigError(std::string("solver: ") + e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text,
                              const std::vector<std::string>& overrides) {
  RawConfig raw = tokenize(text);
  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos)
      throw ConfigError("override '" + ov + "': expected path=value");
    std::string path = trim(ov.substr(0, eq));
    const std::string value = trim(ov.substr(eq + 1));
    std::string section;
    const auto dot = path.find('.');
    if (dot != std::string::npos) {
      section = path.substr(0, dot);
      path = path.substr(dot + 1);
    }
    raw[{section, path}] = {value, 0};
  }

  Extractor ex(std::move(raw));
  ExperimentConfig c;
  ex.get("", "mode", c.mode);
  ex.get("grid", "n1", c.n1);
  ex.get("grid", "n2", c.n2);
  ex.get("grid", "n_list", c.n_list);
  ex.get("initial", "L", c.slope_L);
  ex.get("initial", "eps", c.eps);
  ex.get("initial", "eps_list", c.eps_list);
  ex.get("initial", "seed", c.seed);
  ex.get("initial", "modes_plus", c.perturbation.plus);
  ex.get("initial", "modes_minus", c.perturbation.minus);
  ex.get("initial", "random_modes", c.perturbation.random_modes);
  ex.get("initial", "random_amplitude", c.perturbation.random_amplitude);
  ex.get("initial", "random_max_k", c.perturbation.random_max_k);
  ex.get("initial", "margin_budget", c.perturbation.margin_budget);
  ex.get("solver", "dt", c.solver.dt);
  ex.get("solver", "t_end", c.solver.t_end);
  ex.get("solver", "cfl_safety", c.solver.cfl_safety);
  ex.get("solver", "scheme", c.solver.scheme);
  ex.get("solver", "dealias_products", c.solver.dealias_products);
  ex.get("picard", "slab_T", c.solver.picard.slab_T);
  ex.get("picard", "quad_points", c.solver.picard.quad_points);
  ex.get("picard", "tol", c.solver.picard.tol);
  ex.get("picard", "max_iter", c.solver.picard.max_iter);
  ex.get("picard", "c0", c.solver.picard.c0);
  ex.get("output", "directory", c.output_dir);
  ex.get("output", "diag_every", c.diag_every);
  ex.get("output", "checkpoint_every", c.checkpoint_every);
  ex.get("output", "store_states", c.store_states);
  ex.get("elastic", "lambda", c.lame_lambda);
  ex.get("elastic", "mu", c.lame_mu);
  ex.finish();
  validate(c);
  return c;
}

ExperimentConfig parse_config_file(const std::string& path,
                                   const std::vector<std::string>& overrides) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config(buf.str(), overrides);
}

std::string to_string(ExperimentConfig::Mode mode) {
  switch (mode) {
    case ExperimentConfig::Mode::Single: return "single";
    case ExperimentConfig::Mode::EpsSweep: return "eps_sweep";
    case ExperimentConfig::Mode::ResolutionSweep: return "resolution_sweep";
    case ExperimentConfig::Mode::VerifySuite: return "verify_suite";
    case ExperimentConfig::Mode::PicardCompare: return "picard_compare";
  }
  return "single";
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_modes(const std::vector<PerturbationMode>& modes) {
  std::string s;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (i) s += " ; ";
    s += std::to_string(modes[i].k1) + "," + std::to_string(modes[i].k2) + "," +
         fmt(modes[i].amplitude) + "," + fmt(modes[i].phase);
  }
  return s;
}

template <class T, class F>
std::string fmt_list(const std::vector<T>& v, F&& f) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += f(v[i]);
  }
  return s;
}

}  // namespace

std::string echo_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "mode = " << to_string(c.mode) << "\n\n";
  os << "[grid]\n";
  os << "n1 = " << c.n1 << "\n";
  os << "n2 = " << c.n2 << "\n";
  if (!c.n_list.empty())
    os << "n_list = " << fmt_list(c.n_list, [](int n) { return std::to_string(n); }) << "\n";
  os << "\n[initial]\n";
  os << "L = " << fmt(c.slope_L) << "\n";
  os << "eps = " << fmt(c.eps) << "\n";
  if (!c.eps_list.empty())
    os << "eps_list = " << fmt_list(c.eps_list, fmt) << "\n";
  os << "seed = " << c.seed << "\n";
  if (!c.perturbation.plus.empty()) os << "modes_plus = " << fmt_modes(c.perturbation.plus) << "\n";
  if (!c.perturbation.minus.empty())
    os << "modes_minus = " << fmt_modes(c.perturbation.minus) << "\n";
  os << "random_modes = " << c.perturbation.random_modes << "\n";
  os << "random_amplitude = " << fmt(c.perturbation.random_amplitude) << "\n";
  os << "random_max_k = " << c.perturbation.random_max_k << "\n";
  os << "margin_budget = " << fmt(c.perturbation.margin_budget) << "\n";
  os << "\n[solver]\n";
  os << "dt = " << fmt(c.solver.dt) << "\n";
  os << "t_end = " << fmt(c.solver.t_end) << "\n";
  os << "cfl_safety = " << fmt(c.solver.cfl_safety) << "\n";
  os << "scheme = " << (c.solver.scheme == Scheme::IMEX_RK2 ? "imex_rk2" : "imex_rk4") << "\n";
  os << "dealias_products = " << (c.solver.dealias_products ? "true" : "false") << "\n";
  os << "\n[picard]\n";
  os << "slab_T = " << fmt(c.solver.picard.slab_T) << "\n";
  os << "quad_points = " << c.solver.picard.quad_points << "\n";
  os << "tol = " << fmt(c.solver.picard.tol) << "\n";
  os << "max_iter = " << c.solver.picard.max_iter << "\n";
  os << "c0 = " << fmt(c.solver.picard.c0) << "\n";
  os << "\n[output]\n";
  os << "directory = " << c.output_dir << "\n";
  os << "diag_every = " << c.diag_every << "\n";
  os << "checkpoint_every = " << c.checkpoint_every << "\n";
  os << "store_states = " << (c.store_states ? "true" : "false") << "\n";
  os << "\n[elastic]\n";
  os << "lambda = " << fmt(c.lame_lambda) << "\n";
  os << "mu = " << fmt(c.lame_mu) << "\n";
  return os.str();
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  auto modes_eq = [](const std::vector<PerturbationMode>& x,
                     const std::vector<PerturbationMode>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i].k1 != y[i].k1 || x[i].k2 != y[i].k2 || x[i].amplitude != y[i].amplitude ||
          x[i].phase != y[i].phase)
        return false;
    return true;
  };
  return a.mode == b.mode && a.n1 == b.n1 && a.n2 == b.n2 && a.n_list == b.n_list &&
         a.slope_L == b.slope_L && a.eps == b.eps && a.eps_list == b.eps_list &&
         a.seed == b.seed && modes_eq(a.perturbation.plus, b.perturbation.plus) &&
         modes_eq(a.perturbation.minus, b.perturbation.minus) &&
         a.perturbation.random_modes == b.perturbation.random_modes &&
         a.perturbation.random_amplitude == b.perturbation.random_amplitude &&
         a.perturbation.random_max_k == b.perturbation.random_max_k &&
         a.perturbation.margin_budget == b.perturbation.margin_budget &&
         a.solver.dt == b.solver.dt && a.solver.t_end == b.solver.t_end &&
         a.solver.cfl_safety == b.solver.cfl_safety && a.solver.scheme == b.solver.scheme &&
         a.solver.dealias_products == b.solver.dealias_products &&
         a.solver.picard.slab_T == b.solver.picard.slab_T &&
         a.solver.picard.quad_points == b.solver.picard.quad_points &&
         a.solver.picard.tol == b.solver.picard.tol &&
         a.solver.picard.max_iter == b.solver.picard.max_iter &&
         a.solver.picard.c0 == b.solver.picard.c0 && a.output_dir == b.output_dir &&
         a.diag_every == b.diag_every && a.checkpoint_every == b.checkpoint_every &&
         a.store_states == b.store_states && a.lame_lambda == b.lame_lambda &&
         a.lame_mu == b.lame_mu;
}

}  // namespace gb2d
