#include "speclab/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "speclab/errors.hpp"
#include "speclab/torus.hpp"

namespace speclab {

namespace {

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_number(const std::string& key, std::string_view text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
    throw ConfigError("invalid number for '" + key + "': '" + t + "'");
  return v;
}

int parse_int(const std::string& key, std::string_view text) {
  const std::string t = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError("invalid integer for '" + key + "': '" + t + "'");
  return v;
}

std::vector<double> parse_list(const std::string& key, std::string_view text) {
  std::vector<double> values;
  for (const std::string& part : split(text, ',')) values.push_back(parse_number(key, part));
  return values;
}

MultiIndex parse_index(const std::string& key, std::string_view text, int n) {
  std::vector<int> entries;
  for (const std::string& part : split(text, ',')) {
    const int v = parse_int(key, part);
    if (v < 0) throw ConfigError("'" + key + "' entries must be non-negative");
    entries.push_back(v);
  }
  if (static_cast<int>(entries.size()) != n)
    throw ConfigError("'" + key + "' must have n=" + std::to_string(n) + " entries");
  return MultiIndex(std::move(entries));
}

void require(const RunConfig& c, bool present, const std::string& key) {
  if (!present) throw ConfigError("probe '" + c.probe + "' requires --" + key);
}

bool is_degree_probe(const std::string& probe) { return probe == "lp" || probe == "cksigma" || probe == "nodal"; }

}  // namespace

const std::vector<std::string>& probe_names() {
  static const std::vector<std::string> names = {"weyl", "offdiag", "difference", "deriv", "band",
                                                 "hoelder", "lp", "cksigma", "nodal", "smoothed"};
  return names;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {"probe", "manifold", "n", "grid", "tau", "delta", "sigma",
                                                "r", "s", "alpha", "beta", "eps", "out", "formats",
                                                "direction", "family", "taus", "threads"};
  return keys;
}

GridSpec parse_grid(std::string_view text) {
  GridSpec spec;
  std::string body = trim(text);
  if (body.rfind("deg:", 0) == 0) {
    spec.degrees = true;
    body = body.substr(4);
  }
  if (body.find(':') != std::string::npos) {
    const auto parts = split(body, ':');
    if (parts.size() != 3) throw ConfigError("grid range must be start:stop:step, got '" + body + "'");
    const double start = parse_number("grid", parts[0]);
    const double stop = parse_number("grid", parts[1]);
    const double step = parse_number("grid", parts[2]);
    if (!(step > 0.0)) throw ConfigError("grid step must be positive");
    if (stop < start) throw ConfigError("grid stop must be >= start");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 100000) throw ConfigError("grid has too many points");
    for (long k = 0; k < count; ++k) spec.values.push_back(start + static_cast<double>(k) * step);
  } else {
    spec.values = parse_list("grid", body);
  }
  if (spec.values.empty()) throw ConfigError("grid must be non-empty");
  for (std::size_t i = 1; i < spec.values.size(); ++i)
    if (!(spec.values[i] > spec.values[i - 1])) throw ConfigError("grid must be strictly increasing");
  if (!(spec.values.front() > 0.0)) throw ConfigError("grid values must be positive");
  if (spec.degrees)
    for (double v : spec.values)
      if (v != std::floor(v)) throw ConfigError("degree grid values must be integers");
  return spec;
}

KeyValues parse_config_text(std::string_view text) {
  KeyValues kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    const auto& keys = config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (kv.count(key)) throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    kv[key] = value;
  }
  return kv;
}

KeyValues read_config_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

RunConfig make_run_config(const std::string& probe, const KeyValues& file, const KeyValues& flags) {
  const auto& names = probe_names();
  if (std::find(names.begin(), names.end(), probe) == names.end()) throw ConfigError("unknown probe '" + probe + "'");
  KeyValues kv = file;
  for (const auto& [k, v] : flags) {
    const auto& keys = config_keys();
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw ConfigError("unknown key '" + k + "'");
    kv[k] = v;
  }
  if (auto it = kv.find("probe"); it != kv.end() && it->second != probe)
    throw ConfigError("config names probe '" + it->second + "' but the command is '" + probe + "'");

  RunConfig c;
  c.probe = probe;
  const auto get = [&](const std::string& key) -> std::optional<std::string> {
    if (auto it = kv.find(key); it != kv.end()) return it->second;
    return std::nullopt;
  };

  try {
    if (auto v = get("manifold")) c.manifold = parse_manifold(*v);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (is_degree_probe(probe)) {
    if (get("manifold") && c.manifold != Manifold::sphere)
      throw ConfigError("probe '" + probe + "' runs on the sphere only");
    c.manifold = Manifold::sphere;
  }
  if ((probe == "deriv" || probe == "smoothed") && c.manifold != Manifold::torus)
    throw ConfigError("probe '" + probe + "' runs on the torus only");

  if (auto v = get("n")) c.n = parse_int("n", *v);
  if (c.n != 2 && c.n != 3) throw ConfigError("--n must be 2 or 3");
  if (is_degree_probe(probe) && c.n != 2 && probe != "lp") throw ConfigError("probe '" + probe + "' supports n = 2 only");

  if (auto v = get("grid")) c.grid = parse_grid(*v);
  if (auto v = get("tau")) c.tau = parse_number("tau", *v);
  if (auto v = get("delta")) c.delta = parse_number("delta", *v);
  if (auto v = get("sigma")) c.sigma = parse_number("sigma", *v);
  if (auto v = get("s")) c.s = parse_number("s", *v);
  if (auto v = get("eps")) c.eps = parse_number("eps", *v);
  if (auto v = get("r")) {
    const std::string t = trim(*v);
    if (t == "inf" || t == "infinity") {
      c.r = LpExponent::infinity();
    } else {
      const double p = parse_number("r", t);
      if (p < 2.0) throw ConfigError("--r must be >= 2 or inf");
      c.r = LpExponent::finite(p);
    }
  }
  if (auto v = get("alpha")) c.alpha = parse_index("alpha", *v, c.n);
  if (auto v = get("beta")) c.beta = parse_index("beta", *v, c.n);
  if (auto v = get("family")) {
    try {
      c.family = parse_family(trim(*v));
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  if (auto v = get("taus")) c.taus = parse_list("taus", *v);
  if (auto v = get("direction")) {
    c.direction = parse_list("direction", *v);
    if (static_cast<int>(c.direction.size()) != c.n)
      throw ConfigError("--direction must have n=" + std::to_string(c.n) + " components");
  }
  if (auto v = get("out")) c.out = trim(*v);
  if (auto v = get("formats")) {
    c.formats = split(*v, ',');
    for (const std::string& f : c.formats)
      if (f != "csv" && f != "json" && f != "svg") throw ConfigError("unknown output format '" + f + "'");
  }

  if (probe == "offdiag" || probe == "difference") {
    require(c, c.tau.has_value(), "tau");
    if (*c.tau < 0.0) throw ConfigError("--tau must be non-negative");
  }
  if (probe == "deriv") {
    require(c, c.alpha.has_value(), "alpha");
    require(c, c.beta.has_value(), "beta");
    if ((*c.alpha + *c.beta).order() > 6) throw ConfigError("|alpha + beta| must be <= 6");
  }
  if (probe == "hoelder") {
    require(c, c.delta.has_value(), "delta");
    if (!(*c.delta > 0.0 && *c.delta < 1.0)) throw ConfigError("--delta must lie in (0, 1)");
  }
  if (probe == "lp") {
    require(c, c.family.has_value(), "family");
    require(c, c.r.has_value(), "r");
    if (c.s && *c.s < 0.0) throw ConfigError("--s must be non-negative");
  }
  if (probe == "cksigma") {
    require(c, c.sigma.has_value(), "sigma");
    if (!(*c.sigma >= 0.0 && *c.sigma <= 1.0)) throw ConfigError("--sigma must lie in [0, 1]");
  }
  if (c.eps && !(*c.eps > 0.0)) throw ConfigError("--eps must be positive");
  if (c.grid && c.grid->degrees && !is_degree_probe(probe) && c.manifold != Manifold::sphere)
    throw ConfigError("degree grids (deg:) apply to the sphere only");
  if (c.grid && is_degree_probe(probe))
    for (double v : c.grid->values)
      if (v != std::floor(v)) throw ConfigError("probe '" + probe + "' expects integer degrees in --grid");
  return c;
}

std::vector<double> lambda_grid(const RunConfig& config) {
  if (config.grid && !config.grid->degrees) return config.grid->values;
  if (config.manifold == Manifold::sphere) {
    std::vector<int> degrees;
    if (config.grid)
      for (double v : config.grid->values) degrees.push_back(static_cast<int>(v));
    else
      degrees = default_degree_grid();
    return pinned_sphere_grid(config.n, degrees);
  }
  std::vector<double> g = default_torus_grid();
  std::erase_if(g, [&](double l) { return l > torus::radius_limit(config.n); });
  return g;
}

std::vector<int> degree_grid(const RunConfig& config) {
  if (!config.grid) return default_degree_grid();
  std::vector<int> degrees;
  for (double v : config.grid->values) degrees.push_back(static_cast<int>(v));
  return degrees;
}

}  // namespace speclab
