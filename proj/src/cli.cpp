#include "stochint/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdint>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "stochint/coefficients.hpp"
#include "stochint/expansion.hpp"
#include "stochint/io.hpp"
#include "stochint/oracle.hpp"
#include "stochint/remainder.hpp"
#include "stochint/rng.hpp"

namespace stochint::cli {
namespace {

using nlohmann::ordered_json;

constexpr const char* kSchemaVersion = "1";

// Raw flag values shared by every subcommand; validated in resolve() before
// any computation starts.
struct CommonOpts {
  double t0 = 0.0;
  double t1 = 1.0;
  std::string basis = "legendre";
  std::string w1 = "const:1";
  std::string w2 = "const:1";
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 1;
  int threads = 1;
  bool no_timestamp = false;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--t0", c.t0, "Left endpoint of the interval")->capture_default_str();
  cmd->add_option("--t1", c.t1, "Right endpoint of the interval")->capture_default_str();
  cmd->add_option("--basis", c.basis, "Basis system: legendre or trig")
      ->capture_default_str();
  cmd->add_option("--w1", c.w1, "Inner weight, const:<c> or poly:<c0>,<c1>,...")
      ->capture_default_str();
  cmd->add_option("--w2", c.w2, "Outer weight, same grammar")->capture_default_str();
  cmd->add_option("--out", c.out, "Output file (stdout when omitted)");
  cmd->add_option("--format", c.format, "Output format: csv or json")
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "Master seed; all randomness derives from it")
      ->capture_default_str();
  cmd->add_option("--threads", c.threads, "Worker cap for parallel module calls")
      ->capture_default_str();
  cmd->add_flag("--no-timestamp", c.no_timestamp,
                "Suppress the generated_at field for byte-identical reruns");
}

struct Resolved {
  Interval iv;
  BasisSystem basis;
  WeightFunction w1;
  WeightFunction w2;
  io::OutputFormat format;
};

WeightFunction parse_weight(const char* flag, const std::string& descriptor) {
  try {
    return WeightFunction::parse(descriptor);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string(flag) + ": " + e.what());
  }
}

Resolved resolve(const CommonOpts& c) {
  if (c.threads < 1) throw std::invalid_argument("--threads: must be >= 1");
  Interval iv(c.t0, c.t1);
  return Resolved{iv,
                  BasisSystem{basis_kind_from_string(c.basis), iv},
                  parse_weight("--w1", c.w1),
                  parse_weight("--w2", c.w2),
                  io::format_from_string(c.format)};
}

void require_nonneg(const char* flag, int value) {
  if (value < 0) {
    throw std::invalid_argument(std::string(flag) + ": must be >= 0, got " +
                                std::to_string(value));
  }
}

NoisePair make_pair(int i1, int i2, int m) {
  // Default m: smallest count that accommodates the requested components.
  const int eff = m > 0 ? m : std::max({1, i1, i2});
  try {
    return NoisePair(i1, i2, eff);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("--i1/--i2/--m: ") + e.what());
  }
}

// Full configuration echo, defaults and tolerances included, shared by the
// JSON body and the CSV comment header.
ordered_json config_echo(const char* command, const CommonOpts& c, const Resolved& r) {
  ordered_json j;
  j["command"] = command;
  j["t0"] = c.t0;
  j["t1"] = c.t1;
  j["basis"] = to_string(r.basis.kind);
  j["w1"] = r.w1.descriptor();
  j["w2"] = r.w2.descriptor();
  j["abs_tol"] = QuadratureOptions{}.abs_tol;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["format"] = io::to_string(r.format);
  return j;
}

ordered_json meta_json(const CoeffMeta& meta) {
  ordered_json j;
  j["t0"] = meta.iv.t0;
  j["t1"] = meta.iv.t1;
  j["basis"] = to_string(meta.basis);
  j["w1"] = meta.w1;
  j["w2"] = meta.w2;
  j["abs_tol"] = meta.abs_tol;
  j["panel_count"] = meta.panel_count;
  j["exact"] = meta.exact;
  j["weight_product"] = meta.weight_product;
  return j;
}

std::string scalar_text(const ordered_json& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

void write_out(const CommonOpts& c, const std::string& content) {
  if (c.out.empty()) {
    std::cout << content;
  } else {
    io::write_file_atomic(c.out, content);
  }
}

void emit_csv(const CommonOpts& c, const ordered_json& config, const io::Table& table) {
  std::string content;
  for (const auto& [key, value] : config.items()) {
    content += "# " + key + "=" + scalar_text(value) + "\n";
  }
  if (!c.no_timestamp) content += "# generated_at=" + io::utc_timestamp() + "\n";
  content += io::render_csv(table);
  write_out(c, content);
}

void emit_json(const CommonOpts& c, const ordered_json& config, ordered_json payload) {
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["config"] = config;
  if (!c.no_timestamp) doc["generated_at"] = io::utc_timestamp();
  doc.update(payload);
  write_out(c, doc.dump(2) + "\n");
}

// Truncation of a larger table; the meta block stays valid since tolerance
// and build path are shared by every entry.
CoeffMatrix slice(const CoeffMatrix& mat, int p1, int p2) {
  return CoeffMatrix{mat.values.topLeftCorner(p1 + 1, p2 + 1), mat.meta};
}

int run_coeffs(const CommonOpts& c, int p1, int p2) {
  const Resolved r = resolve(c);
  require_nonneg("--p1", p1);
  require_nonneg("--p2", p2);
  const CoeffMatrix mat = coeff_matrix(r.w1, r.w2, r.basis, p1, p2);
  ordered_json config = config_echo("coeffs", c, r);
  config["p1"] = p1;
  config["p2"] = p2;
  if (r.format == io::OutputFormat::kCsv) {
    io::Table t{{"j1", "j2", "c"}, {}};
    for (int j1 = 0; j1 <= p1; ++j1) {
      for (int j2 = 0; j2 <= p2; ++j2) {
        t.rows.push_back({std::to_string(j1), std::to_string(j2),
                          io::format_double(mat.values(j1, j2))});
      }
    }
    emit_csv(c, config, t);
  } else {
    ordered_json payload;
    payload["meta"] = meta_json(mat.meta);
    auto& rows = payload["coefficients"] = ordered_json::array();
    for (int j1 = 0; j1 <= p1; ++j1) {
      for (int j2 = 0; j2 <= p2; ++j2) {
        rows.push_back({{"j1", j1}, {"j2", j2}, {"c", mat.values(j1, j2)}});
      }
    }
    emit_json(c, config, std::move(payload));
  }
  return 0;
}

int run_trace(const CommonOpts& c, int p) {
  const Resolved r = resolve(c);
  require_nonneg("--p", p);
  const CoeffMatrix mat = coeff_matrix(r.w1, r.w2, r.basis, p, p);
  const double target = 0.5 * mat.meta.weight_product;
  ordered_json config = config_echo("trace", c, r);
  config["p"] = p;
  if (r.format == io::OutputFormat::kCsv) {
    io::Table t{{"p", "partial_sum", "target", "gap"}, {}};
    for (int q = 0; q <= p; ++q) {
      const double partial = trace_partial_sum(mat, q);
      t.rows.push_back({std::to_string(q), io::format_double(partial),
                        io::format_double(target), io::format_double(partial - target)});
    }
    emit_csv(c, config, t);
  } else {
    ordered_json payload;
    payload["meta"] = meta_json(mat.meta);
    auto& rows = payload["trace"] = ordered_json::array();
    for (int q = 0; q <= p; ++q) {
      const double partial = trace_partial_sum(mat, q);
      rows.push_back({{"p", q},
                      {"partial_sum", partial},
                      {"target", target},
                      {"gap", partial - target}});
    }
    emit_json(c, config, std::move(payload));
  }
  return 0;
}

int run_error_curve(const CommonOpts& c, std::vector<int> plist, int i1, int i2, int m) {
  const Resolved r = resolve(c);
  if (plist.empty()) throw std::invalid_argument("--p-list: need at least one level");
  for (int p : plist) require_nonneg("--p-list", p);
  const NoisePair pair = make_pair(i1, i2, m);
  const int pmax = *std::max_element(plist.begin(), plist.end());
  const CoeffMatrix mat = coeff_matrix(r.w1, r.w2, r.basis, pmax, pmax);
  ordered_json config = config_echo("error-curve", c, r);
  config["p_list"] = plist;
  config["i1"] = pair.i1;
  config["i2"] = pair.i2;
  config["m"] = pair.m;
  std::vector<ErrorReport> reports;
  reports.reserve(plist.size());
  for (int p : plist) reports.push_back(ms_error_bound(slice(mat, p, p), pair));
  if (r.format == io::OutputFormat::kCsv) {
    io::Table t{{"p1", "p2", "proj_error_sq", "diag_integral", "ms_exact_offdiag",
                 "ms_bound_equal"},
                {}};
    for (const auto& rep : reports) {
      t.rows.push_back({std::to_string(rep.p1), std::to_string(rep.p2),
                        io::format_double(rep.proj_error_sq),
                        io::format_double(rep.diag_integral),
                        io::format_double(rep.ms_exact_offdiag),
                        io::format_double(rep.ms_bound_equal)});
    }
    emit_csv(c, config, t);
  } else {
    ordered_json payload;
    payload["meta"] = meta_json(mat.meta);
    auto& rows = payload["errors"] = ordered_json::array();
    for (const auto& rep : reports) {
      rows.push_back({{"p1", rep.p1},
                      {"p2", rep.p2},
                      {"proj_error_sq", rep.proj_error_sq},
                      {"diag_integral", rep.diag_integral},
                      {"ms_exact_offdiag", rep.ms_exact_offdiag},
                      {"ms_bound_equal", rep.ms_bound_equal}});
    }
    emit_json(c, config, std::move(payload));
  }
  return 0;
}

int run_sample(const CommonOpts& c, int p1, int p2, int i1, int i2, int m, int samples) {
  const Resolved r = resolve(c);
  require_nonneg("--p1", p1);
  require_nonneg("--p2", p2);
  if (samples < 1) throw std::invalid_argument("--samples: must be >= 1");
  const NoisePair pair = make_pair(i1, i2, m);
  const CoeffMatrix mat = coeff_matrix(r.w1, r.w2, r.basis, p1, p2);
  const int jmax = std::max(p1, p2);
  ordered_json config = config_echo("sample", c, r);
  config["p1"] = p1;
  config["p2"] = p2;
  config["i1"] = pair.i1;
  config["i2"] = pair.i2;
  config["m"] = pair.m;
  config["samples"] = samples;

  std::vector<ExpansionSample> batch;
  batch.reserve(samples);
  for (int k = 0; k < samples; ++k) {
    const std::uint64_t sub =
        rng::derive(c.seed, rng::kPurposeSampleSeeds, static_cast<std::uint64_t>(k));
    batch.push_back(sample_truncated(mat, make_draws(r.basis, pair.m, jmax, sub), pair));
  }

  if (r.format == io::OutputFormat::kCsv) {
    io::Table t{{"seed", "i1", "i2", "p1", "p2", "stratonovich", "ito"}, {}};
    for (const auto& s : batch) {
      t.rows.push_back({std::to_string(s.seed), std::to_string(s.i1),
                        std::to_string(s.i2), std::to_string(s.p1),
                        std::to_string(s.p2), io::format_double(s.stratonovich),
                        io::format_double(s.ito)});
    }
    emit_csv(c, config, t);
  } else {
    ordered_json payload;
    payload["meta"] = meta_json(mat.meta);
    auto& rows = payload["samples"] = ordered_json::array();
    for (const auto& s : batch) {
      rows.push_back({{"seed", s.seed},
                      {"i1", s.i1},
                      {"i2", s.i2},
                      {"p1", s.p1},
                      {"p2", s.p2},
                      {"stratonovich", s.stratonovich},
                      {"ito", s.ito}});
    }
    emit_json(c, config, std::move(payload));
  }
  return 0;
}

int run_mc_validate(const CommonOpts& c, int p1, int p2, std::vector<int> plist, int i1,
                    int i2, int m, int paths, int grid) {
  const Resolved r = resolve(c);
  const NoisePair pair = make_pair(i1, i2, m);
  std::vector<std::pair<int, int>> levels;
  if (plist.empty()) {
    require_nonneg("--p1", p1);
    require_nonneg("--p2", p2);
    levels.emplace_back(p1, p2);
  } else {
    for (int p : plist) {
      require_nonneg("--p-list", p);
      levels.emplace_back(p, p);
    }
  }
  int pmax1 = 0, pmax2 = 0;
  for (const auto& [a, b] : levels) {
    pmax1 = std::max(pmax1, a);
    pmax2 = std::max(pmax2, b);
  }
  const CoeffMatrix mat = coeff_matrix(r.w1, r.w2, r.basis, pmax1, pmax2);
  ordered_json config = config_echo("mc-validate", c, r);
  if (plist.empty()) {
    config["p1"] = p1;
    config["p2"] = p2;
  } else {
    config["p_list"] = plist;
  }
  config["i1"] = pair.i1;
  config["i2"] = pair.i2;
  config["m"] = pair.m;
  config["paths"] = paths;
  config["grid"] = grid;

  std::vector<ExperimentResult> results;
  results.reserve(levels.size());
  for (const auto& [a, b] : levels) {
    const CoeffMatrix sub = slice(mat, a, b);
    ExperimentConfig cfg{r.w1, r.w2, r.basis, a,      b,
                         pair, grid, paths,   c.seed, c.threads};
    results.push_back(coupled_error_experiment(cfg, &sub));
  }
  bool any_bias = false;
  for (const auto& res : results) any_bias = any_bias || res.bias_flagged;

  if (r.format == io::OutputFormat::kCsv) {
    io::Table t{{"p1", "p2", "n", "paths", "mean_sq_diff", "std_error", "theory",
                 "theory_exact", "half_n_mean", "bias_flagged"},
                {}};
    for (std::size_t k = 0; k < results.size(); ++k) {
      const auto& res = results[k];
      t.rows.push_back({std::to_string(levels[k].first), std::to_string(levels[k].second),
                        std::to_string(res.n), std::to_string(res.paths),
                        io::format_double(res.mean_sq_diff), io::format_double(res.std_error),
                        io::format_double(res.theory), res.theory_exact ? "1" : "0",
                        io::format_double(res.half_n_mean), res.bias_flagged ? "1" : "0"});
    }
    emit_csv(c, config, t);
  } else {
    ordered_json payload;
    payload["meta"] = meta_json(mat.meta);
    auto& rows = payload["results"] = ordered_json::array();
    for (std::size_t k = 0; k < results.size(); ++k) {
      const auto& res = results[k];
      rows.push_back({{"p1", levels[k].first},
                      {"p2", levels[k].second},
                      {"n", res.n},
                      {"paths", res.paths},
                      {"mean_sq_diff", res.mean_sq_diff},
                      {"std_error", res.std_error},
                      {"theory", res.theory},
                      {"theory_exact", res.theory_exact},
                      {"half_n_mean", res.half_n_mean},
                      {"bias_flagged", res.bias_flagged}});
    }
    payload["bias_check"] = any_bias ? "failed" : "passed";
    emit_json(c, config, std::move(payload));
  }
  if (any_bias) {
    std::cerr << "mc-validate: halving the grid moved an estimate by more than "
                 "2 standard errors; increase --grid\n";
    return 2;
  }
  return 0;
}

int run_remainder_grid(const CommonOpts& c, int p1, int p2, int grid_n) {
  const Resolved r = resolve(c);
  require_nonneg("--p1", p1);
  require_nonneg("--p2", p2);
  if (grid_n < 2) throw std::invalid_argument("--grid-n: must be >= 2");
  const CoeffMatrix mat = coeff_matrix(r.w1, r.w2, r.basis, p1, p2);
  ordered_json config = config_echo("remainder-grid", c, r);
  config["p1"] = p1;
  config["p2"] = p2;
  config["grid_n"] = grid_n;
  const double step = r.iv.length() / (grid_n - 1);
  auto node = [&](int k) { return k + 1 == grid_n ? r.iv.t1 : r.iv.t0 + k * step; };
  if (r.format == io::OutputFormat::kCsv) {
    io::Table t{{"x1", "x2", "r"}, {}};
    for (int a = 0; a < grid_n; ++a) {
      for (int b = 0; b < grid_n; ++b) {
        const double x1 = node(a), x2 = node(b);
        t.rows.push_back({io::format_double(x1), io::format_double(x2),
                          io::format_double(remainder_eval(mat, x1, x2))});
      }
    }
    emit_csv(c, config, t);
  } else {
    ordered_json payload;
    payload["meta"] = meta_json(mat.meta);
    auto& rows = payload["grid"] = ordered_json::array();
    for (int a = 0; a < grid_n; ++a) {
      for (int b = 0; b < grid_n; ++b) {
        const double x1 = node(a), x2 = node(b);
        rows.push_back({{"x1", x1}, {"x2", x2}, {"r", remainder_eval(mat, x1, x2)}});
      }
    }
    emit_json(c, config, std::move(payload));
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{
      "Double Stratonovich/Ito integral expansion: coefficients, truncated "
      "sampling, error analysis, and Monte Carlo validation"};
  app.require_subcommand(1);

  CommonOpts c_coeffs, c_trace, c_curve, c_sample, c_mc, c_grid;
  int co_p1 = 0, co_p2 = 0;
  int tr_p = 0;
  std::vector<int> ec_plist;
  int ec_i1 = 1, ec_i2 = 2, ec_m = 0;
  int sa_p1 = 0, sa_p2 = 0, sa_i1 = 1, sa_i2 = 1, sa_m = 0, sa_samples = 1000;
  int mc_p1 = 0, mc_p2 = 0, mc_i1 = 1, mc_i2 = 2, mc_m = 0;
  int mc_paths = 100000, mc_grid = 4096;
  std::vector<int> mc_plist;
  int rg_p1 = 0, rg_p2 = 0, rg_grid_n = 64;

  CLI::App* coeffs = app.add_subcommand("coeffs", "Write the coefficient table");
  add_common(coeffs, c_coeffs);
  coeffs->add_option("--p1", co_p1, "Inner truncation level")->required();
  coeffs->add_option("--p2", co_p2, "Outer truncation level")->required();

  CLI::App* trace = app.add_subcommand(
      "trace", "Diagonal partial sums against half the weight-product integral");
  add_common(trace, c_trace);
  trace->add_option("--p", tr_p, "Largest truncation level")->required();

  CLI::App* curve = app.add_subcommand(
      "error-curve", "Mean-square error functionals along square truncations");
  add_common(curve, c_curve);
  curve->add_option("--p-list", ec_plist, "Truncation levels, e.g. 0,1,2,5")
      ->required()
      ->delimiter(',');
  curve->add_option("--i1", ec_i1, "First noise component")->capture_default_str();
  curve->add_option("--i2", ec_i2, "Second noise component")->capture_default_str();
  curve->add_option("--m", ec_m, "Component count (default: fits i1, i2)");

  CLI::App* sample = app.add_subcommand(
      "sample", "Draw truncated-expansion samples with derived per-sample seeds");
  add_common(sample, c_sample);
  sample->add_option("--p1", sa_p1, "Inner truncation level")->required();
  sample->add_option("--p2", sa_p2, "Outer truncation level")->required();
  sample->add_option("--i1", sa_i1, "First noise component")->capture_default_str();
  sample->add_option("--i2", sa_i2, "Second noise component")->capture_default_str();
  sample->add_option("--m", sa_m, "Component count (default: fits i1, i2)");
  sample->add_option("--samples", sa_samples, "Number of samples")->capture_default_str();

  CLI::App* mc = app.add_subcommand(
      "mc-validate", "Couple the discretized-path oracle to the truncated expansion");
  add_common(mc, c_mc);
  mc->add_option("--p1", mc_p1, "Inner truncation level")->capture_default_str();
  mc->add_option("--p2", mc_p2, "Outer truncation level")->capture_default_str();
  mc->add_option("--p-list", mc_plist, "Square truncation sweep (overrides --p1/--p2)")
      ->delimiter(',');
  mc->add_option("--i1", mc_i1, "First noise component")->capture_default_str();
  mc->add_option("--i2", mc_i2, "Second noise component")->capture_default_str();
  mc->add_option("--m", mc_m, "Component count (default: fits i1, i2)");
  mc->add_option("--paths", mc_paths, "Monte Carlo path count")->capture_default_str();
  mc->add_option("--grid", mc_grid, "Subintervals per path (power of two)")
      ->capture_default_str();

  CLI::App* grid = app.add_subcommand(
      "remainder-grid", "Pointwise remainder values on a uniform grid of the square");
  add_common(grid, c_grid);
  grid->add_option("--p1", rg_p1, "Inner truncation level")->required();
  grid->add_option("--p2", rg_p2, "Outer truncation level")->required();
  grid->add_option("--grid-n", rg_grid_n, "Nodes per axis")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (coeffs->parsed()) return run_coeffs(c_coeffs, co_p1, co_p2);
    if (trace->parsed()) return run_trace(c_trace, tr_p);
    if (curve->parsed()) return run_error_curve(c_curve, ec_plist, ec_i1, ec_i2, ec_m);
    if (sample->parsed()) {
      return run_sample(c_sample, sa_p1, sa_p2, sa_i1, sa_i2, sa_m, sa_samples);
    }
    if (mc->parsed()) {
      return run_mc_validate(c_mc, mc_p1, mc_p2, mc_plist, mc_i1, mc_i2, mc_m, mc_paths,
                             mc_grid);
    }
    if (grid->parsed()) return run_remainder_grid(c_grid, rg_p1, rg_p2, rg_grid_n);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace stochint::cli
