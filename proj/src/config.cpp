#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "rwre/errors.hpp"
#include "rwre/harness.hpp"
#include "rwre/walk_sim.hpp"

namespace rwre {

void ExperimentSpec::validate() const {
  if (n_list.empty()) throw ConfigError("n_list must not be empty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw ConfigError("n values must be >= 1");
    if (i > 0 && n_list[i] <= n_list[i - 1])
      throw ConfigError("n_list must be strictly increasing");
  }
  if (replicates < 1) throw ConfigError("replicates must be >= 1");
  if (!(t_max_factor > 0.0)) throw ConfigError("t_max_factor must be > 0");
  if (!(level >= 0.0 && level < 1.0))
    throw ConfigError("level must lie in [0,1)");
  if (!model.theta_in_box_interior(model.theta()))
    throw ConfigError("theta* must lie in the box interior");
  if (!theta0.empty() &&
      static_cast<int>(theta0.size()) != model.dim())
    throw ConfigError("theta0 dimension mismatch");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  const auto cap = step_cap();
  if (cap < static_cast<std::uint64_t>(n_list.back()))
    throw ConfigError(
        "step cap below the largest hitting level; raise t_max_factor");
}

std::uint64_t ExperimentSpec::step_cap() const {
  const double kappa = model.solve_kappa();
  return default_t_max(n_list.back(), kappa, t_max_factor);
}

namespace {

struct RawSpec {
  std::map<std::string, std::string> model, run, estimate;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double to_double(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for " + key + ": '" + s + "'");
  }
}

long long to_int(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad integer value for " + key + ": '" + s + "'");
  }
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("bad boolean value for " + key + ": '" + s + "'");
}

Bounds to_bounds(const std::string& key, const std::string& s) {
  const auto parts = split_ws(s);
  if (parts.size() != 2)
    throw ConfigError(key + " expects two numbers: lo hi");
  return {to_double(key, parts[0]), to_double(key, parts[1])};
}

RawSpec lex_spec(const std::string& text) {
  RawSpec raw;
  std::map<std::string, std::string>* section = nullptr;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("malformed section header at line " +
                          std::to_string(lineno));
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name == "model")
        section = &raw.model;
      else if (name == "run")
        section = &raw.run;
      else if (name == "estimate")
        section = &raw.estimate;
      else
        throw ConfigError("unknown section [" + name + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value at line " +
                        std::to_string(lineno));
    if (section == nullptr)
      throw ConfigError("key outside any section at line " +
                        std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("empty key or value at line " +
                        std::to_string(lineno));
    if (section->count(key))
      throw ConfigError("duplicate key " + key);
    (*section)[key] = value;
  }
  return raw;
}

// Pop a key from the map, or empty when absent.
std::string take(std::map<std::string, std::string>& m,
                 const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) return "";
  std::string v = it->second;
  m.erase(it);
  return v;
}

EnvModel model_from_raw(std::map<std::string, std::string> m) {
  const std::string fam = take(m, "family");
  if (fam.empty()) throw ConfigError("[model] needs a family key");
  EnvModel model = EnvModel::two_point(0.5, 0.4, 0.7);
  if (fam == "two_point") {
    const std::string p = take(m, "p"), a1 = take(m, "a1"), a2 = take(m, "a2");
    if (p.empty() || a1.empty() || a2.empty())
      throw ConfigError("two_point needs p, a1, a2");
    const std::string box = take(m, "p_box");
    model = EnvModel::two_point(
        to_double("p", p), to_double("a1", a1), to_double("a2", a2),
        box.empty() ? Bounds{0.01, 0.99} : to_bounds("p_box", box));
  } else if (fam == "beta") {
    const std::string al = take(m, "alpha"), be = take(m, "beta");
    const std::string abox = take(m, "alpha_box"), bbox = take(m, "beta_box");
    if (al.empty() || be.empty() || abox.empty() || bbox.empty())
      throw ConfigError("beta needs alpha, beta, alpha_box, beta_box");
    model = EnvModel::beta(to_double("alpha", al), to_double("beta", be),
                           to_bounds("alpha_box", abox),
                           to_bounds("beta_box", bbox));
  } else if (fam == "temkin") {
    const std::string a = take(m, "a"), p = take(m, "p");
    if (a.empty() || p.empty()) throw ConfigError("temkin needs a and p");
    const std::string box = take(m, "a_box");
    model = box.empty()
                ? EnvModel::temkin(to_double("a", a), to_double("p", p))
                : EnvModel::temkin(to_double("a", a), to_double("p", p),
                                   to_bounds("a_box", box));
  } else {
    throw ConfigError("unknown family: " + fam);
  }
  if (!m.empty())
    throw ConfigError("unknown key in [model]: " + m.begin()->first);
  return model;
}

}  // namespace

ExperimentSpec parse_spec_text(const std::string& text) {
  RawSpec raw = lex_spec(text);
  ExperimentSpec spec(model_from_raw(raw.model));
  spec.example = family_name(spec.model.family());

  auto& run = raw.run;
  if (const auto v = take(run, "label"); !v.empty()) spec.example = v;
  if (const auto v = take(run, "n_list"); !v.empty()) {
    spec.n_list.clear();
    for (const auto& tok : split_ws(v))
      spec.n_list.push_back(to_int("n_list", tok));
  }
  if (const auto v = take(run, "replicates"); !v.empty())
    spec.replicates = to_int("replicates", v);
  if (const auto v = take(run, "seed"); !v.empty())
    spec.seed = static_cast<std::uint64_t>(to_int("seed", v));
  if (const auto v = take(run, "t_max_factor"); !v.empty())
    spec.t_max_factor = to_double("t_max_factor", v);
  if (const auto v = take(run, "fresh_walk_per_n"); !v.empty())
    spec.fresh_walk_per_n = to_bool("fresh_walk_per_n", v);
  if (const auto v = take(run, "threads"); !v.empty())
    spec.threads = static_cast<int>(to_int("threads", v));
  if (!run.empty())
    throw ConfigError("unknown key in [run]: " + run.begin()->first);

  auto& est = raw.estimate;
  if (const auto v = take(est, "theta0"); !v.empty()) {
    if (v != "center") {
      for (const auto& tok : split_ws(v))
        spec.theta0.push_back(to_double("theta0", tok));
    }
  }
  if (const auto v = take(est, "level"); !v.empty())
    spec.level = to_double("level", v);
  if (!est.empty())
    throw ConfigError("unknown key in [estimate]: " + est.begin()->first);

  spec.validate();
  return spec;
}

ExperimentSpec parse_spec_file(const std::string& path) {
  return parse_spec_text(read_file(path));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace rwre
