#include "eprlab/report.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include "eprlab/bell.hpp"
#include "eprlab/fourier.hpp"
#include "eprlab/parallel.hpp"
#include "eprlab/version.hpp"

namespace eprlab {

namespace {

using nlohmann::ordered_json;

std::string short_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// JSON value for possibly-NaN doubles (nlohmann serializes NaN as null, but
// being explicit keeps the schema intentional).
ordered_json json_number(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

void write_density_csv(const std::filesystem::path& path,
                       const std::vector<double>& coords,
                       const std::vector<double>& density) {
  std::vector<std::vector<double>> rows(coords.size());
  for (std::size_t j = 0; j < coords.size(); ++j) rows[j] = {coords[j], density[j]};
  write_csv(path, {"coordinate", "density"}, rows);
}

std::vector<double> x_coords(const Grid1D& g) {
  std::vector<double> c(g.n);
  for (std::size_t j = 0; j < g.n; ++j) c[j] = g.x(j);
  return c;
}

std::vector<double> p_coords(const Grid1D& g) {
  std::vector<double> c(g.n);
  for (std::size_t k = 0; k < g.n; ++k) c[k] = g.p(k);
  return c;
}

Field2D build_state(const RunConfig& cfg, const Grid1D& g) {
  if (cfg.state_kind == StateKind::Epr) return epr_pair(g, g, cfg.epr);
  return discrete_entangled(g, g, cfg.discrete);
}

ordered_json dispersion_json(const DispersionReport& d) {
  return {{"mean_x", d.mean_x},
          {"std_x", d.std_x},
          {"mean_p", d.mean_p},
          {"std_p", d.std_p},
          {"product", d.product}};
}

// --- subcommand bodies ------------------------------------------------------

void run_state(const RunConfig& cfg, const std::filesystem::path& out,
               ordered_json& results) {
  const Grid1D g = make_grid(cfg.grid.n, cfg.grid.x_min, cfg.grid.x_max, cfg.constants);
  const Field2D field = build_state(cfg, g);
  results["squared_norm"] = field.squared_norm();
  const Eigen::Matrix4d cov = covariance_matrix(field);
  results["covariance"] = {{"var_x1", cov(0, 0)},   {"var_p1", cov(1, 1)},
                           {"var_x2", cov(2, 2)},   {"var_p2", cov(3, 3)},
                           {"cov_x1_x2", cov(0, 2)}, {"cov_p1_p2", cov(1, 3)}};
  results["corr_x1_x2"] = cov(0, 2) / std::sqrt(cov(0, 0) * cov(2, 2));
  write_density_csv(out / "marginal_x1.csv", x_coords(g), marginal(field, 1));
  write_density_csv(out / "marginal_x2.csv", x_coords(g), marginal(field, 2));
  const Field2D mom = fourier_transform(field, Representation::Momentum);
  write_density_csv(out / "marginal_p1.csv", p_coords(g), marginal(mom, 1));
  write_density_csv(out / "marginal_p2.csv", p_coords(g), marginal(mom, 2));
  if (cfg.state_kind == StateKind::Epr) {
    results["correlation_quality"] = cfg.epr.correlation_quality();
  } else {
    const DiscreteReduction red = analyze_discrete(field, cfg.discrete);
    results["peak_masses"] = red.masses;
    const CounterRng rng(cfg.seed, 0);
    const auto [outcome, reduced] = reduce_discrete(field, cfg.discrete, rng, 0);
    results["reduction_outcome"] = outcome;
    results["reduction_center"] = red.centers[outcome];
    std::vector<std::vector<double>> rows(red.centers.size());
    for (std::size_t i = 0; i < red.centers.size(); ++i)
      rows[i] = {red.centers[i], red.masses[i]};
    write_csv(out / "peak_masses.csv", {"center", "mass"}, rows);
    write_density_csv(out / "reduced_marginal_x2.csv", x_coords(g),
                      marginal(reduced, 2));
  }
}

void run_evolve(const RunConfig& cfg, const std::filesystem::path& out,
                ordered_json& results, int workers) {
  const Grid1D g = make_grid(cfg.grid.n, cfg.grid.x_min, cfg.grid.x_max, cfg.constants);
  const Field2D field = build_state(cfg, g);
  results["rows"] = ordered_json::array();
  std::vector<ordered_json> rows(cfg.delays.size());
  std::vector<std::pair<std::vector<double>, std::vector<double>>> densities(
      cfg.delays.size());
  parallel_for(cfg.delays.size(), workers, [&](std::size_t i) {
    const double tau = cfg.delays[i];
    const Field2D evolved = free_evolve(field, tau, cfg.constants);
    const Eigen::Matrix4d cov = covariance_matrix(evolved);
    rows[i] = {{"delay", tau},
               {"norm_sq", evolved.squared_norm()},
               {"std_x1", std::sqrt(cov(0, 0))},
               {"std_x2", std::sqrt(cov(2, 2))},
               {"std_p1", std::sqrt(cov(1, 1))},
               {"std_p2", std::sqrt(cov(3, 3))},
               {"var_p_sum", cov(1, 1) + cov(3, 3) + 2.0 * cov(1, 3)}};
    densities[i] = {marginal(evolved, 1), marginal(evolved, 2)};
  });
  for (std::size_t i = 0; i < cfg.delays.size(); ++i) {
    results["rows"].push_back(rows[i]);
    const std::string tag = short_double(cfg.delays[i]);
    write_density_csv(out / ("marginal_x1_tau" + tag + ".csv"), x_coords(g),
                      densities[i].first);
    write_density_csv(out / ("marginal_x2_tau" + tag + ".csv"), x_coords(g),
                      densities[i].second);
  }
}

void run_discriminate(const RunConfig& cfg, const std::filesystem::path& out,
                      ordered_json& results, int workers) {
  DiscriminatorConfig dc;
  dc.epr = cfg.epr;
  dc.slit = cfg.aperture;
  dc.measurement_time = cfg.measurement_time;
  dc.delays = cfg.delays;
  dc.geometry = cfg.geometry;
  dc.grid = cfg.grid;
  dc.constants = cfg.constants;
  dc.seed = cfg.seed;
  const DiscriminatorReport rep = run_discriminator(dc, workers);
  results["detection_probability"] = rep.detection_probability;
  results["rows"] = ordered_json::array();
  const auto coords = x_coords(rep.grid2);
  for (const ModelRow& row : rep.rows) {
    ordered_json j = {{"model", row.model}, {"delay", row.delay}};
    j["dispersion"] = dispersion_json(row.dispersion);
    j["angular_width"] = json_number(row.angular_width);
    results["rows"].push_back(j);
    std::string name = row.model;
    for (char& ch : name) ch = static_cast<char>(std::tolower(ch));
    write_density_csv(out / (name + "_tau" + short_double(row.delay) + ".csv"),
                      coords, row.density);
  }
  results["residuals"] = ordered_json::array();
  for (std::size_t i = 0; i < rep.residual_mean.size(); ++i)
    results["residuals"].push_back({{"delay", dc.delays[i]},
                                    {"mean", rep.residual_mean[i]},
                                    {"std", rep.residual_std[i]}});
}

void run_signal_test(const RunConfig& cfg, const std::filesystem::path& out,
                     ordered_json& results, int workers) {
  SignalingConfig sc;
  sc.epr = cfg.epr;
  sc.slit_high = cfg.aperture;
  sc.slit_low = cfg.aperture_low;
  sc.blocks = cfg.blocks;
  sc.pairs_per_block = cfg.pairs_per_block;
  sc.measurement_time = cfg.measurement_time;
  sc.delay = cfg.delays.back();
  sc.grid = cfg.grid;
  sc.constants = cfg.constants;
  sc.model = cfg.model;
  sc.seed = cfg.seed;
  const SignalingReport rep = run_signaling_test(sc, workers);
  results["model"] = to_string(cfg.model);
  results["delay"] = sc.delay;
  results["blocks"] = sc.blocks;
  results["pairs_per_block"] = sc.pairs_per_block;
  results["predicted_std_high"] = rep.predicted_std_high;
  results["predicted_std_low"] = rep.predicted_std_low;
  results["threshold"] = rep.threshold;
  results["accuracy"] = rep.accuracy;
  results["binomial_z"] = rep.binomial_z;
  results["welch_t"] = rep.welch_t;
  results["welch_p"] = rep.welch_p;
  results["detection_rate_high"] = rep.detection_rate_high;
  results["detection_rate_low"] = rep.detection_rate_low;
  std::vector<std::vector<double>> rows(rep.blocks.size());
  for (std::size_t i = 0; i < rep.blocks.size(); ++i) {
    const BlockResult& b = rep.blocks[i];
    rows[i] = {static_cast<double>(b.block), static_cast<double>(b.bit), b.sigma_hat,
               static_cast<double>(b.guess), b.correct ? 1.0 : 0.0};
  }
  write_csv(out / "blocks.csv", {"block", "bit", "sigma_hat", "guess", "correct"},
            rows);
}

void run_kim_shih_cmd(const RunConfig& cfg, const std::filesystem::path& out,
                      ordered_json& results) {
  KimShihConfig kc;
  kc.epr = cfg.epr;
  kc.slit = cfg.aperture;
  kc.measurement_time = cfg.measurement_time;
  kc.delay = cfg.delays.back();
  kc.grid = cfg.grid;
  kc.constants = cfg.constants;
  const BoundReport rep = run_kim_shih(kc);
  results["delay"] = kc.delay;
  results["conditional_std_p2"] = rep.conditional_std_p2;
  results["oracle_std_p2"] = rep.oracle_std_p2;
  results["collapse_bound"] = rep.collapse_bound;
  results["ratio"] = rep.ratio;
  results["oracle_ratio"] = rep.oracle_ratio;
  results["below_bound"] = rep.below_bound;
  results["uncertainty_product"] = rep.uncertainty_product;
  results["detection_probability"] = rep.detection_probability;
  write_csv(out / "kim_shih.csv",
            {"conditional_std_p2", "oracle_std_p2", "collapse_bound", "ratio"},
            {{rep.conditional_std_p2, rep.oracle_std_p2, rep.collapse_bound,
              rep.ratio}});
}

void run_persistence(const RunConfig& cfg, const std::filesystem::path& out,
                     ordered_json& results, int workers) {
  PersistenceConfig pc;
  pc.epr = cfg.epr;
  pc.slit = cfg.aperture;
  pc.measurement_time = cfg.measurement_time;
  pc.delays = cfg.delays;
  pc.grid = cfg.grid;
  pc.constants = cfg.constants;
  const PersistenceReport rep = run_correlation_persistence(pc, workers);
  results["detection_probability"] = rep.detection_probability;
  results["rows"] = ordered_json::array();
  std::vector<std::vector<double>> csv;
  for (const PersistenceRow& r : rep.rows) {
    results["rows"].push_back({{"delay", r.delay},
                               {"grid_mean_x2", r.grid_mean_x2},
                               {"grid_std_x2", r.grid_std_x2},
                               {"oracle_mean_x2", r.oracle_mean_x2},
                               {"oracle_std_x2", r.oracle_std_x2},
                               {"grid_residual_mean", r.grid_residual_mean},
                               {"grid_residual_std", r.grid_residual_std},
                               {"oracle_residual_mean", r.oracle_residual_mean},
                               {"oracle_residual_std", r.oracle_residual_std}});
    csv.push_back({r.delay, r.grid_mean_x2, r.grid_std_x2, r.oracle_mean_x2,
                   r.oracle_std_x2, r.grid_residual_mean, r.grid_residual_std,
                   r.oracle_residual_mean, r.oracle_residual_std});
  }
  write_csv(out / "persistence.csv",
            {"delay", "grid_mean_x2", "grid_std_x2", "oracle_mean_x2", "oracle_std_x2",
             "grid_residual_mean", "grid_residual_std", "oracle_residual_mean",
             "oracle_residual_std"},
            csv);
}

void run_bell(const std::filesystem::path& out, ordered_json& results) {
  const LhvEnumeration e = enumerate_lhv();
  results["lhv_max_abs_chsh"] = e.max_abs;
  results["lhv_count_at_max"] = e.count_at_max;
  results["quantum_chsh"] = singlet_chsh_standard();
  results["strategy_chsh"] = e.values;
  std::vector<std::vector<double>> rows(16);
  for (int i = 0; i < 16; ++i) {
    const LhvStrategy& s = e.strategies[i];
    rows[i] = {static_cast<double>(s.alice[0]), static_cast<double>(s.alice[1]),
               static_cast<double>(s.bob[0]), static_cast<double>(s.bob[1]),
               e.values[i]};
  }
  write_csv(out / "strategies.csv", {"a1", "a2", "b1", "b2", "chsh"}, rows);
}

int run_oracle_check(const RunConfig& cfg, const std::filesystem::path& out,
                     ordered_json& results) {
  const Grid1D g = make_grid(cfg.grid.n, cfg.grid.x_min, cfg.grid.x_max, cfg.constants);
  const Field2D field = epr_pair(g, g, cfg.epr);
  const Eigen::Matrix4d grid_cov = covariance_matrix(field);
  const CovarianceState oracle = epr_covariance(cfg.epr, cfg.constants);
  const double tau = cfg.delays.back();

  struct Row {
    std::string quantity;
    double grid, oracle, scale, tol;
  };
  std::vector<Row> rows;
  const auto push = [&](const std::string& q, double gv, double ov, double scale,
                        double tol) { rows.push_back({q, gv, ov, scale, tol}); };

  push("var_x1", grid_cov(0, 0), oracle.cov(0, 0), oracle.cov(0, 0), 1e-3);
  push("var_p1", grid_cov(1, 1), oracle.cov(1, 1), oracle.cov(1, 1), 1e-3);
  push("var_x2", grid_cov(2, 2), oracle.cov(2, 2), oracle.cov(2, 2), 1e-3);
  push("var_p2", grid_cov(3, 3), oracle.cov(3, 3), oracle.cov(3, 3), 1e-3);
  push("cov_x1_x2", grid_cov(0, 2), oracle.cov(0, 2), oracle.cov(0, 0), 1e-3);
  push("cov_p1_p2", grid_cov(1, 3), oracle.cov(1, 3), oracle.cov(1, 1), 1e-3);

  const ConditionalEnsemble ens = condition_on_slit(field, cfg.aperture);
  const Aperture snapped = cfg.aperture.snapped(g);
  const SlitConditionedState o0 =
      slit_conditioned_state(cfg.epr, snapped, 0.0, 0.0, cfg.constants);
  const DispersionReport d0 = ens.mixture_moments();
  push("detection_probability", ens.detection_probability, o0.detection_probability,
       o0.detection_probability, 5e-3);
  push("conditional_mean_x2", d0.mean_x, o0.mean(0), o0.std_x2(), 5e-3);
  push("conditional_std_x2", d0.std_x, o0.std_x2(), o0.std_x2(), 5e-3);
  push("conditional_std_p2", d0.std_p, o0.std_p2(), o0.std_p2(), 5e-3);

  const ConditionalEnsemble evolved = ens.evolved(tau, cfg.constants);
  const SlitConditionedState ot =
      slit_conditioned_state(cfg.epr, snapped, 0.0, tau, cfg.constants);
  const Grid1D& g2 = evolved.components.front().grid;
  const DensityMoments mt =
      density_moments(evolved.position_density(), g2.dx, g2.x(0), g2.dx);
  push("evolved_mean_x2", mt.mean, ot.mean(0), ot.std_x2(), 5e-3);
  push("evolved_std_x2", std::sqrt(mt.var), ot.std_x2(), ot.std_x2(), 5e-3);

  const auto nu = oracle.symplectic_eigenvalues();
  push("symplectic_nu_min", nu[0], 0.5 * cfg.constants.hbar, 0.5 * cfg.constants.hbar,
       1e-9);
  push("symplectic_nu_max", nu[1], 0.5 * cfg.constants.hbar, 0.5 * cfg.constants.hbar,
       1e-9);

  bool all_pass = true;
  results["rows"] = ordered_json::array();
  std::ofstream csv(out / "oracle_check.csv");
  if (!csv) throw std::runtime_error("cannot open oracle_check.csv");
  csv << "quantity,grid,oracle,rel_dev,tolerance,pass\n";
  for (const Row& r : rows) {
    const double dev = std::abs(r.grid - r.oracle) / std::abs(r.scale);
    const bool pass = dev <= r.tol;
    all_pass = all_pass && pass;
    results["rows"].push_back({{"quantity", r.quantity},
                               {"grid", r.grid},
                               {"oracle", r.oracle},
                               {"rel_dev", dev},
                               {"tolerance", r.tol},
                               {"pass", pass}});
    csv << r.quantity << ',' << format_double(r.grid) << ',' << format_double(r.oracle)
        << ',' << format_double(dev) << ',' << format_double(r.tol) << ','
        << (pass ? 1 : 0) << "\n";
  }
  results["all_pass"] = all_pass;
  return all_pass ? 0 : 1;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
}

int dispatch(const RunConfig& cfg, const std::string& subcommand,
             const std::filesystem::path& out_dir, int workers) {
  std::filesystem::create_directories(out_dir);
  ordered_json report;
  report["version"] = kVersion;
  report["subcommand"] = subcommand;
  report["timestamp"] = timestamp_utc();
  report["seed"] = cfg.seed;
  report["config"] = resolved_json(cfg);
  ordered_json& results = report["results"] = ordered_json::object();

  int status = 0;
  if (subcommand == "state") {
    run_state(cfg, out_dir, results);
  } else if (subcommand == "evolve") {
    run_evolve(cfg, out_dir, results, workers);
  } else if (subcommand == "discriminate") {
    run_discriminate(cfg, out_dir, results, workers);
  } else if (subcommand == "signal-test") {
    run_signal_test(cfg, out_dir, results, workers);
  } else if (subcommand == "kim-shih") {
    run_kim_shih_cmd(cfg, out_dir, results);
  } else if (subcommand == "persistence") {
    run_persistence(cfg, out_dir, results, workers);
  } else if (subcommand == "bell") {
    run_bell(out_dir, results);
  } else if (subcommand == "oracle-check") {
    status = run_oracle_check(cfg, out_dir, results);
  } else {
    throw std::invalid_argument("subcommand: unknown \"" + subcommand + "\"");
  }

  std::ofstream out(out_dir / "report.json");
  if (!out) throw std::runtime_error("cannot open report.json for writing");
  out << report.dump(2) << "\n";
  return status;
}

}  // namespace eprlab
