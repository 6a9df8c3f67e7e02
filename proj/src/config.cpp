#include "wentzell/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "wentzell/error.hpp"
#include "wentzell/rng.hpp"

namespace wentzell {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Drops a trailing comment that is not inside quotes.
std::string_view strip_comment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

struct Field {
  std::string_view key;
  std::string_view value;
  std::size_t line;
};

double need_double(const Field& f) {
  const auto v = to_double(f.value);
  if (!v) throw ConfigError(f.line, "field '" + std::string(f.key) + "': expected a number, got '" + std::string(f.value) + "'");
  return *v;
}

std::uint64_t need_uint(const Field& f) {
  const auto s = trim(f.value);
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size())
    throw ConfigError(f.line, "field '" + std::string(f.key) + "': expected a non-negative integer, got '" + std::string(f.value) + "'");
  return v;
}

std::string need_string(const Field& f) {
  auto s = trim(f.value);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  if (s.empty()) throw ConfigError(f.line, "field '" + std::string(f.key) + "': empty value");
  return std::string(s);
}

std::vector<double> need_list(const Field& f) {
  auto s = trim(f.value);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw ConfigError(f.line, "field '" + std::string(f.key) + "': expected a list like [1, 2, 3]");
  s = trim(s.substr(1, s.size() - 2));
  std::vector<double> out;
  if (s.empty()) return out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const auto item = s.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    const auto v = to_double(item);
    if (!v) throw ConfigError(f.line, "field '" + std::string(f.key) + "': bad list element '" + std::string(trim(item)) + "'");
    out.push_back(*v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

void require(bool ok, const Field& f, const std::string& what) {
  if (!ok) throw ConfigError(f.line, "field '" + std::string(f.key) + "': " + what);
}

const std::set<std::string>& known_experiments() {
  static const std::set<std::string> k = {"conservation", "holding_time", "ml_inversion", "exit_time",
                                          "occupation",   "lifetime",     "clock_duality", "bc_residual",
                                          "fivp",         "bounds",       "xbar_expectation",
                                          "simulate",     "invert"};
  return k;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text) {
  ExperimentConfig c;
  std::map<std::string, std::size_t> seen;
  using Setter = std::function<void(const Field&)>;
  const std::map<std::string, Setter, std::less<>> setters = {
      {"experiment", [&](const Field& f) {
         c.experiment = need_string(f);
         require(known_experiments().count(c.experiment) > 0, f, "unknown experiment '" + c.experiment + "'");
       }},
      {"name", [&](const Field& f) { c.name = need_string(f); }},
      {"seed", [&](const Field& f) { c.seed = need_uint(f); }},
      {"eta", [&](const Field& f) { c.params.eta = need_double(f); require(c.params.eta >= 0, f, "must be >= 0"); }},
      {"sigma", [&](const Field& f) { c.params.sigma = need_double(f); require(c.params.sigma >= 0, f, "must be >= 0"); }},
      {"c", [&](const Field& f) { c.params.c = need_double(f); require(c.params.c >= 0, f, "must be >= 0"); }},
      {"alpha", [&](const Field& f) {
         c.params.alpha = need_double(f);
         require(c.params.alpha > 0 && c.params.alpha <= 1, f, "must lie in (0,1]");
       }},
      {"datum", [&](const Field& f) {
         c.datum = need_string(f);
         try {
           (void)parse_datum(c.datum);
         } catch (const DomainError& e) {
           throw ConfigError(f.line, "field 'datum': " + std::string(e.what()));
         }
       }},
      {"x", [&](const Field& f) { c.x = need_double(f); require(c.x >= 0, f, "must be >= 0"); }},
      {"t_grid", [&](const Field& f) {
         c.t_grid = need_list(f);
         for (double v : c.t_grid) require(v > 0, f, "times must be > 0");
       }},
      {"x_grid", [&](const Field& f) {
         c.x_grid = need_list(f);
         for (double v : c.x_grid) require(v >= 0, f, "points must be >= 0");
       }},
      {"lambda_grid", [&](const Field& f) {
         c.lambda_grid = need_list(f);
         for (double v : c.lambda_grid) require(v > 0, f, "lambda must be > 0");
       }},
      {"alpha_grid", [&](const Field& f) {
         c.alpha_grid = need_list(f);
         for (double v : c.alpha_grid) require(v > 0 && v <= 1, f, "alpha must lie in (0,1]");
       }},
      {"xi_grid", [&](const Field& f) {
         c.xi_grid = need_list(f);
         for (double v : c.xi_grid) require(v >= 0, f, "xi must be >= 0");
       }},
      {"n", [&](const Field& f) { c.n = need_uint(f); require(c.n >= 2, f, "must be >= 2"); }},
      {"dt", [&](const Field& f) { c.dt = need_double(f); require(c.dt > 0, f, "must be > 0"); }},
      {"threads", [&](const Field& f) { c.threads = static_cast<unsigned>(need_uint(f)); }},
      {"k", [&](const Field& f) { c.k = need_double(f); require(c.k > 0, f, "must be > 0"); }},
      {"bias_budget", [&](const Field& f) { c.bias_budget = need_double(f); require(c.bias_budget >= 0, f, "must be >= 0"); }},
      {"tolerance", [&](const Field& f) { c.tolerance = need_double(f); require(c.tolerance > 0, f, "must be > 0"); }},
      {"epsilon", [&](const Field& f) { c.epsilon = need_double(f); require(c.epsilon > 0, f, "must be > 0"); }},
      {"s", [&](const Field& f) { c.s = need_double(f); require(c.s >= 0, f, "must be >= 0"); }},
      {"horizon", [&](const Field& f) { c.horizon = need_double(f); require(c.horizon > 0, f, "must be > 0"); }},
      {"level", [&](const Field& f) { c.level = need_double(f); require(c.level > 0 && c.level < 1, f, "must lie in (0,1)"); }},
      {"draws", [&](const Field& f) { c.draws = need_uint(f); require(c.draws >= 1, f, "must be >= 1"); }},
      {"out", [&](const Field& f) { c.out = need_string(f); }},
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    const auto line = trim(strip_comment(raw));
    if (!line.empty()) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
      const auto key = trim(line.substr(0, eq));
      const auto value = trim(line.substr(eq + 1));
      if (key.empty()) throw ConfigError(line_no, "missing key before '='");
      const auto it = setters.find(key);
      if (it == setters.end()) throw ConfigError(line_no, "unknown field '" + std::string(key) + "'");
      const std::string k(key);
      if (seen.count(k))
        throw ConfigError(line_no, "field '" + k + "' repeated (first set on line " + std::to_string(seen[k]) + ")");
      seen[k] = line_no;
      if (value.empty()) throw ConfigError(line_no, "field '" + k + "': missing value");
      it->second(Field{key, value, line_no});
      c.given.insert(k);
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (!c.given.count("experiment")) throw ConfigError(0, "missing required field 'experiment'");
  if (!c.given.count("seed")) throw ConfigError(0, "missing required field 'seed'");
  if (c.name.empty()) c.name = c.experiment;
  if (c.params.eta == 0.0 && c.params.sigma == 0.0 && c.params.c == 0.0)
    throw ConfigError(seen.count("sigma") ? seen["sigma"] : 0, "c, sigma and eta cannot all be 0");
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(0, "cannot open config file '" + file.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

InitialDatum parse_datum(std::string_view spec) {
  spec = trim(spec);
  const auto colon = spec.find(':');
  const auto kind = spec.substr(0, colon);
  const auto rest = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  auto num = [&](std::string_view s) {
    const auto v = to_double(s);
    if (!v) throw DomainError("bad number '" + std::string(s) + "' in datum '" + std::string(spec) + "'");
    return *v;
  };
  if (kind == "constant") return InitialDatum::constant(num(rest));
  if (kind == "indicator") return InitialDatum::indicator_interval(num(rest));
  if (kind == "indicator_positive") {
    if (!rest.empty()) throw DomainError("indicator_positive takes no argument");
    return InitialDatum::indicator_positive();
  }
  if (kind == "exponential") {
    const auto c2 = rest.find(':');
    if (c2 == std::string_view::npos) return InitialDatum::exponential(num(rest));
    return InitialDatum::exponential(num(rest.substr(0, c2)), num(rest.substr(c2 + 1)));
  }
  if (kind == "point_mass") return rest.empty() ? InitialDatum::point_mass() : InitialDatum::point_mass(num(rest));
  if (kind == "tabulated") {
    const auto c2 = rest.find(':');
    const auto nodes = rest.substr(0, c2);
    const double tail = c2 == std::string_view::npos ? 0.0 : num(rest.substr(c2 + 1));
    std::vector<double> y, f;
    std::size_t pos = 0;
    while (pos <= nodes.size()) {
      const auto semi = nodes.find(';', pos);
      const auto node = nodes.substr(pos, semi == std::string_view::npos ? std::string_view::npos : semi - pos);
      const auto slash = node.find('/');
      if (slash == std::string_view::npos) throw DomainError("tabulated node '" + std::string(node) + "' needs y/f");
      y.push_back(num(node.substr(0, slash)));
      f.push_back(num(node.substr(slash + 1)));
      if (semi == std::string_view::npos) break;
      pos = semi + 1;
    }
    return InitialDatum::tabulated(std::move(y), std::move(f), tail);
  }
  throw DomainError("unknown datum kind '" + std::string(kind) + "'");
}

std::string canonical_config(const ExperimentConfig& c) {
  std::ostringstream s;
  s.precision(17);
  auto list = [&](const char* key, const std::vector<double>& v) {
    s << key << "=[";
    for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
    s << "]\n";
  };
  s << "experiment=" << c.experiment << "\nname=" << c.name << "\nseed=" << c.seed << "\neta=" << c.params.eta
    << "\nsigma=" << c.params.sigma << "\nc=" << c.params.c << "\nalpha=" << c.params.alpha << "\ndatum=" << c.datum
    << "\nx=" << c.x << '\n';
  list("t_grid", c.t_grid);
  list("x_grid", c.x_grid);
  list("lambda_grid", c.lambda_grid);
  list("alpha_grid", c.alpha_grid);
  list("xi_grid", c.xi_grid);
  s << "n=" << c.n << "\ndt=" << c.dt << "\nk=" << c.k << "\nbias_budget=" << c.bias_budget
    << "\ntolerance=" << c.tolerance << "\nepsilon=" << c.epsilon << "\ns=" << c.s << "\nhorizon=" << c.horizon
    << "\nlevel=" << c.level << "\ndraws=" << c.draws << '\n';
  return s.str();
}

std::uint64_t config_hash(const ExperimentConfig& c) { return fnv1a64(canonical_config(c)); }

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xF];
  return s;
}

}  // namespace wentzell
