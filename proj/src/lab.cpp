#include "speclab/lab.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "speclab/errors.hpp"
#include "speclab/parallel.hpp"
#include "speclab/report.hpp"
#include "speclab/sphere.hpp"
#include "speclab/torus.hpp"

namespace speclab {

namespace fs = std::filesystem;

ProbeResult run_probe(const RunConfig& c) {
  ProbeOptions options;
  options.direction = c.direction;
  const std::string& p = c.probe;
  if (p == "weyl") return probe_weyl(c.manifold, c.n, lambda_grid(c), options);
  if (p == "offdiag") return probe_offdiag(c.manifold, c.n, *c.tau, lambda_grid(c), options);
  if (p == "difference") return probe_difference(c.manifold, c.n, *c.tau, lambda_grid(c), options);
  if (p == "deriv") return probe_derivative(c.n, *c.alpha, *c.beta, lambda_grid(c));
  if (p == "band") return probe_band(c.manifold, c.n, lambda_grid(c));
  if (p == "hoelder") {
    const std::vector<double> taus = c.taus.empty() ? default_tau_grid() : c.taus;
    return probe_hoelder(c.manifold, c.n, *c.delta, taus, lambda_grid(c), options);
  }
  if (p == "lp") return probe_lp(c.n, *c.family, *c.r, c.s.value_or(0.0), degree_grid(c));
  if (p == "cksigma") return probe_cksigma(c.n, *c.sigma, degree_grid(c));
  if (p == "nodal") return probe_nodal(c.n, degree_grid(c));
  if (p == "smoothed") return probe_smoothed(c.n, torus::make_window(c.eps.value_or(4.0)), lambda_grid(c));
  throw ConfigError("unknown probe '" + p + "'");
}

std::string timestamp_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

namespace {

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ResourceError("cannot create output directory " + dir.string());
}

bool wants(const RunConfig& c, const std::string& format) {
  return std::find(c.formats.begin(), c.formats.end(), format) != c.formats.end();
}

}  // namespace

std::vector<fs::path> write_outputs(const ProbeResult& result, const RunConfig& config, const std::string& stamp) {
  ensure_directory(config.out);
  std::vector<fs::path> written;
  const std::string base = result.probe + "_" + stamp;
  if (wants(config, "csv")) {
    written.push_back(config.out / (base + ".csv"));
    write_table(result, TableFormat::csv, written.back());
  }
  if (wants(config, "json")) {
    written.push_back(config.out / (base + ".json"));
    write_table(result, TableFormat::json, written.back());
  }
  if (wants(config, "svg") && result.rows.size() >= 2) {
    written.push_back(config.out / (base + ".svg"));
    render_plot(result, written.back());
  }
  written.push_back(config.out / "summary.json");
  write_text_file(written.back(), summary_json(result));
  return written;
}

// ---------------------------------------------------------------------------
// Self-test

namespace {

struct Check {
  std::string name;
  std::function<std::string()> run;  // empty string on success, otherwise the failure detail
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

std::string expect_close(double got, double want, double tol) {
  if (std::abs(got - want) <= tol) return {};
  return "got " + fmt(got) + ", want " + fmt(want) + " (tol " + fmt(tol) + ")";
}

std::vector<Check> selftest_checks() {
  using std::numbers::pi;
  std::vector<Check> checks;
  checks.push_back({"torus_count_N5_equals_81", [] {
                      const auto v = torus::eigenvalue_count(2, 5.0);
                      return v == 81 ? std::string() : "got " + std::to_string(v);
                    }});
  checks.push_back({"phi_at_zero_equals_weyl_constant", [] {
                      for (int n = 2; n <= 5; ++n) {
                        const std::string e = expect_close(phi_kernel(n, 0.0).value, weyl_constant(n), 1e-12);
                        if (!e.empty()) return "n=" + std::to_string(n) + ": " + e;
                      }
                      return std::string();
                    }});
  checks.push_back({"phi_quadrature_matches_bessel", [] {
                      double worst = 0.0;
                      for (int n = 2; n <= 3; ++n)
                        for (int k = 0; k <= 300; ++k) {
                          const double tau = 0.1 * k;
                          worst = std::max(worst, std::abs(phi_kernel(n, tau).value - phi_kernel_bessel(n, tau)));
                        }
                      return worst <= 1e-9 ? std::string() : "sup difference " + fmt(worst);
                    }});
  checks.push_back({"phi3_zeros_solve_tan_tau_equals_tau", [] {
                      for (int i = 1; i <= 3; ++i) {
                        const double t = phi_kernel_zero(3, i);
                        const double res = std::abs(std::sin(t) - t * std::cos(t)) / std::max(1.0, t);
                        if (res > 1e-10) return "zero " + std::to_string(i) + " residual " + fmt(res);
                      }
                      return std::string();
                    }});
  checks.push_back({"derivative_constant_forms_agree", [] {
                      for (int n = 2; n <= 3; ++n)
                        for (int a = 0; a <= 3; ++a)
                          for (int b = 0; b <= 3; ++b) {
                            std::vector<int> av(n, 0), bv(n, 0);
                            av[0] = a;
                            bv[n - 1] = b;
                            const MultiIndex alpha(av), beta(bv);
                            const double x = deriv_weyl_constant(n, alpha, beta);
                            const double y = deriv_weyl_constant_moment(n, alpha, beta);
                            if (std::abs(x - y) > 1e-12 * std::max(1.0, std::abs(y)))
                              return "n=" + std::to_string(n) + ": " + fmt(x) + " vs " + fmt(y);
                          }
                      return std::string();
                    }});
  checks.push_back({"parity_mismatch_sum_is_zero", [] {
                      for (double lambda : {10.0, 50.0, 120.0}) {
                        const double v = torus::derivative_diagonal_sum(2, MultiIndex{1, 0}, MultiIndex{0, 0}, lambda);
                        if (v != 0.0) return "lambda=" + fmt(lambda) + ": " + fmt(v);
                      }
                      return std::string();
                    }});
  checks.push_back({"offdiag_tau0_equals_weyl", [] {
                      const std::vector<double> grid = {50.0, 100.0, 150.0};
                      const ProbeResult a = probe_weyl(Manifold::torus, 2, grid);
                      const ProbeResult b = probe_offdiag(Manifold::torus, 2, 0.0, grid);
                      for (std::size_t i = 0; i < grid.size(); ++i)
                        if (a.rows[i].raw != b.rows[i].raw) return "row " + std::to_string(i) + " differs";
                      return std::string();
                    }});
  checks.push_back({"sphere_band_at_10_equals_21_over_4pi", [] {
                      return expect_close(sphere::band_kernel(2, 1.0, 10.0), 21.0 / (4.0 * pi), 1e-14);
                    }});
  checks.push_back({"sphere_multiplicity_counts", [] {
                      for (int m = 0; m <= 20; ++m)
                        if (sphere::multiplicity(2, m) != static_cast<std::uint64_t>(2 * m + 1))
                          return "S^2 degree " + std::to_string(m);
                      if (sphere::multiplicity(3, 4) != 25) return std::string("S^3 degree 4");
                      return std::string();
                    }});
  checks.push_back({"highest_weight_beta_matches_quadrature", [] {
                      for (int m : {20, 100, 400}) {
                        const double closed = std::exp(sphere::hw_log_norm_power(2, m, 4.0));
                        const double quad = sphere::hw_norm_power_quadrature(2, m, 4.0);
                        if (std::abs(closed - quad) > 1e-8 * closed)
                          return "m=" + std::to_string(m) + ": " + fmt(closed) + " vs " + fmt(quad);
                      }
                      return std::string();
                    }});
  checks.push_back({"gegenbauer_zeros_are_roots", [] {
                      for (int m : {5, 40, 201}) {
                        const auto zeros = gegenbauer_zeros(m, 0.5);
                        if (static_cast<int>(zeros.size()) != m) return "m=" + std::to_string(m) + ": wrong count";
                        for (std::size_t i = 0; i < zeros.size(); ++i) {
                          const double scale = m * m * 1e-13;
                          if (std::abs(gegenbauer(m, 0.5, zeros[i])) > scale)
                            return "m=" + std::to_string(m) + ": residual " + fmt(gegenbauer(m, 0.5, zeros[i]));
                          if (i > 0 && !(zeros[i] > zeros[i - 1])) return "m=" + std::to_string(m) + ": not increasing";
                        }
                      }
                      return std::string();
                    }});
  checks.push_back({"nadirashvili_odd_degree_is_one", [] {
                      return expect_close(sphere::nadirashvili_ratio(2, 299), 1.0, 1e-10);
                    }});
  checks.push_back({"json_round_trip_is_exact", [] {
                      const ProbeResult a = probe_weyl(Manifold::torus, 2, std::vector<double>{50.0, 75.0, 100.0});
                      return from_json(to_json(a)) == a ? std::string() : std::string("round trip differs");
                    }});
  return checks;
}

struct SelftestProbe {
  std::string probe;
  KeyValues flags;
};

std::vector<SelftestProbe> selftest_probes() {
  return {
      {"weyl", {{"manifold", "torus"}}},
      {"weyl", {{"manifold", "sphere"}, {"grid", "deg:20:200:20"}}},
      {"offdiag", {{"manifold", "torus"}, {"tau", "2"}}},
      {"difference", {{"manifold", "torus"}, {"tau", "2"}}},
      {"deriv", {{"alpha", "1,0"}, {"beta", "1,0"}}},
      {"band", {{"manifold", "torus"}}},
      {"hoelder", {{"manifold", "torus"}, {"delta", "0.5"}, {"grid", "50:150:25"}}},
      {"lp", {{"family", "zonal"}, {"r", "inf"}, {"grid", "20:200:20"}}},
      {"lp", {{"family", "highest-weight"}, {"r", "4"}, {"grid", "20:200:20"}}},
      {"nodal", {{"grid", "20:200:20"}}},
      {"smoothed", {{"grid", "50:150:25"}}},
  };
}

}  // namespace

int run_selftest(const fs::path& out_dir, std::ostream& out) {
  int failures = 0;
  for (const Check& check : selftest_checks()) {
    std::string detail;
    try {
      detail = check.run();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (detail.empty()) {
      out << "PASS " << check.name << "\n";
    } else {
      out << "FAIL " << check.name << ": " << detail << "\n";
      ++failures;
    }
  }

  ensure_directory(out_dir);
  const std::string stamp = timestamp_now();
  int index = 0;
  for (const SelftestProbe& sp : selftest_probes()) {
    KeyValues flags = sp.flags;
    flags["out"] = out_dir.string();
    flags["formats"] = "csv,json";
    const RunConfig config = make_run_config(sp.probe, {}, flags);
    const ProbeResult result = run_probe(config);
    char name[16];
    std::snprintf(name, sizeof name, "%02d", index++);
    const std::string base = std::string(name) + "_" + result.probe + "_" + stamp;
    write_table(result, TableFormat::csv, out_dir / (base + ".csv"));
    write_table(result, TableFormat::json, out_dir / (base + ".json"));
    out << "wrote " << base << ".csv, .json\n";
  }
  out << (failures == 0 ? "selftest: all checks passed" : "selftest: " + std::to_string(failures) + " check(s) failed")
      << "\n";
  return failures;
}

// ---------------------------------------------------------------------------
// Command line

namespace {

void add_run_options(CLI::App& sub, std::map<std::string, std::string>& values, std::string& config_file,
                     int& threads) {
  const std::map<std::string, std::string> help = {
      {"manifold", "torus or sphere"},
      {"n", "dimension (2 or 3)"},
      {"grid", "start:stop:step or v1,v2,...; prefix deg: for sphere degrees"},
      {"tau", "scaled separation lambda*dist"},
      {"delta", "Hoelder exponent in (0,1)"},
      {"sigma", "smoothness index in [0,1]"},
      {"r", "Lebesgue exponent (>= 2 or inf)"},
      {"s", "Sobolev order"},
      {"alpha", "multi-index, comma separated"},
      {"beta", "multi-index, comma separated"},
      {"eps", "smoothing window width"},
      {"out", "output directory"},
      {"formats", "subset of csv,json,svg"},
      {"direction", "torus probe direction, comma separated"},
      {"family", "zonal or highest-weight"},
      {"taus", "tau grid for the Hoelder quotient"},
  };
  for (const auto& [key, text] : help) sub.add_option("--" + key, values[key], text);
  sub.add_option("--config", config_file, "key = value configuration file");
  sub.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"speclab: numerical lab for eigenfunction asymptotics on flat tori and round spheres", "speclab"};
  app.require_subcommand(1);

  std::map<std::string, std::string> values;
  std::string config_file;
  int threads = 0;
  std::vector<CLI::App*> probes;
  for (const std::string& name : probe_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " probe");
    add_run_options(*sub, values, config_file, threads);
    probes.push_back(sub);
  }
  std::string selftest_out = "selftest_out";
  CLI::App* selftest = app.add_subcommand("selftest", "run the invariant suite");
  selftest->add_option("--out", selftest_out, "output directory");
  selftest->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "speclab: error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (threads > 0) set_worker_threads(threads);
    if (selftest->parsed()) return run_selftest(selftest_out, out) == 0 ? kExitOk : kExitFailure;

    for (CLI::App* sub : probes) {
      if (!sub->parsed()) continue;
      KeyValues flags;
      for (const auto& [key, value] : values)
        if (sub->get_option("--" + key)->count() > 0) flags[key] = value;
      KeyValues file;
      if (!config_file.empty()) {
        file = read_config_file(config_file);
        if (auto it = file.find("threads"); it != file.end() && threads == 0) {
          const int t = std::atoi(it->second.c_str());
          if (t <= 0) throw ConfigError("threads must be a positive integer");
          set_worker_threads(t);
        }
        file.erase("threads");
      }
      const RunConfig config = make_run_config(sub->get_name(), file, flags);
      const ProbeResult result = run_probe(config);
      const auto written = write_outputs(result, config, timestamp_now());
      for (const auto& path : written) out << path.string() << "\n";
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "speclab: configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "speclab: configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const RangeError& e) {
    err << "speclab: configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ResourceError& e) {
    err << "speclab: resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::exception& e) {
    err << "speclab: error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace speclab
