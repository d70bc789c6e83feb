#include "eprlab/protocols.hpp"

#include <cmath>
#include <stdexcept>

#include "eprlab/fourier.hpp"
#include "eprlab/parallel.hpp"

namespace eprlab {

namespace {

Grid1D grid_from_spec(const GridSpec& spec, const PhysicalConstants& c) {
  return make_grid(spec.n, spec.x_min, spec.x_max, c);
}

void check_delays(const std::vector<double>& delays) {
  if (delays.empty())
    throw std::invalid_argument("times.delays: must be nonempty");
  double prev = -1.0;
  for (double d : delays) {
    if (!(d >= 0.0) || !std::isfinite(d))
      throw std::invalid_argument("times.delays: must be nonnegative");
    if (d <= prev)
      throw std::invalid_argument("times.delays: must be strictly ascending");
    prev = d;
  }
}

DispersionReport dispersion_from_marginals(const Field2D& field) {
  const Grid1D& g = field.grid2;
  const DensityMoments mx =
      density_moments(marginal(field, 2), g.dx, g.x(0), g.dx);
  const Field2D mom = fourier_transform_axis(field, 2, Representation::Momentum);
  const DensityMoments mp =
      density_moments(marginal(mom, 2), g.dp(), g.p(0), g.dp());
  DispersionReport r;
  r.mean_x = mx.mean;
  r.std_x = std::sqrt(mx.var);
  r.mean_p = mp.mean;
  r.std_p = std::sqrt(mp.var);
  r.product = r.std_x * r.std_p;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

DiscriminatorReport run_discriminator(const DiscriminatorConfig& cfg, int workers) {
  validate(cfg.constants);
  check_delays(cfg.delays);
  if (!(cfg.measurement_time >= 0.0))
    throw std::invalid_argument("times.measurement_time: must be >= 0");
  const Grid1D g = grid_from_spec(cfg.grid, cfg.constants);
  Field2D base = epr_pair(g, g, cfg.epr);
  if (cfg.measurement_time != 0.0)
    base = free_evolve(base, cfg.measurement_time, cfg.constants);

  const ConditionalEnsemble ens0 = condition_on_slit(base, cfg.slit);
  const Field1D packet0 = collapse_packet_m1(g, cfg.slit.center, cfg.slit,
                                             cfg.constants);

  const std::size_t nd = cfg.delays.size();
  DiscriminatorReport report;
  report.grid2 = g;
  report.detection_probability = ens0.detection_probability;
  report.rows.resize(3 * nd);
  report.residual_mean.resize(nd);
  report.residual_std.resize(nd);

  parallel_for(nd, workers, [&](std::size_t di) {
    const double tau = cfg.delays[di];
    const double t_abs = cfg.measurement_time + tau;

    // M1: Proposition-B packet, spreading freely after the reduction.
    {
      const Field1D f = free_evolve(packet0, tau, cfg.constants);
      ModelRow& row = report.rows[di];
      row.model = "M1";
      row.delay = tau;
      row.dispersion = moments(f);
      row.angular_width = angular_width(row.dispersion.std_x, t_abs, cfg.geometry);
      row.density = f.density();
    }
    // M2: exact conditional ensemble.
    {
      const ConditionalEnsemble ens = ens0.evolved(tau, cfg.constants);
      ModelRow& row = report.rows[nd + di];
      row.model = "M2";
      row.delay = tau;
      row.dispersion = ens.mixture_moments();
      row.angular_width = angular_width(row.dispersion.std_x, t_abs, cfg.geometry);
      row.density = ens.position_density();
      const DensityMoments res = ens.residual_moments();
      report.residual_mean[di] = res.mean;
      report.residual_std[di] = std::sqrt(res.var);
    }
    // M3: unconditioned marginal of particle 2.
    {
      const Field2D evolved = free_evolve_axis(base, tau, 2, cfg.constants);
      ModelRow& row = report.rows[2 * nd + di];
      row.model = "M3";
      row.delay = tau;
      row.dispersion = dispersion_from_marginals(evolved);
      row.angular_width = angular_width(row.dispersion.std_x, t_abs, cfg.geometry);
      row.density = marginal(evolved, 2);
    }
  });
  return report;
}

// ---------------------------------------------------------------------------

namespace {

struct SignalPrediction {
  double std_high = 0.0;
  double std_low = 0.0;
  double p_high = 0.0;
  double p_low = 0.0;
};

// Receiver-side position std of particle 2 at the readout plane, per sender
// bit, under the configured model. Pure covariance algebra; detection
// statistics use the lattice-snapped window so they match the sampled run.
SignalPrediction predict_dispersions(const SignalingConfig& cfg, const Grid1D& g) {
  SignalPrediction pred;
  const CovarianceState at_meas = evolve_covariance(
      epr_covariance(cfg.epr, cfg.constants), cfg.measurement_time, cfg.constants);
  const CovarianceState at_readout =
      evolve_covariance_axis(at_meas, cfg.delay, 2, cfg.constants);
  const double marg_var = at_readout.cov(2, 2);
  const double marg_mean = at_readout.mean(2);

  const auto mixture_std = [&](const Aperture& slit) {
    const SlitConditionedState s = slit_conditioned_state(
        cfg.epr, slit.snapped(g), cfg.measurement_time, cfg.delay, cfg.constants);
    // Detected branch: packet at -x1 spreading per spread_law; undetected
    // branch: the untouched marginal.
    const double sc = spread_law(0.5 * slit.effective_width(), cfg.delay,
                                 cfg.constants);
    const double mean_d = -s.outcome_mean;
    const double var_d = sc * sc + s.outcome_var;
    const double p = s.detection_probability;
    const double mean = p * mean_d + (1.0 - p) * marg_mean;
    const double var = p * (var_d + mean_d * mean_d) +
                       (1.0 - p) * (marg_var + marg_mean * marg_mean) - mean * mean;
    return std::pair<double, double>(std::sqrt(var), p);
  };

  if (cfg.model == Model::Conditional) {
    pred.std_high = pred.std_low = std::sqrt(marg_var);
    const auto ph = slit_conditioned_state(cfg.epr, cfg.slit_high.snapped(g),
                                           cfg.measurement_time, cfg.delay,
                                           cfg.constants);
    const auto pl = slit_conditioned_state(cfg.epr, cfg.slit_low.snapped(g),
                                           cfg.measurement_time, cfg.delay,
                                           cfg.constants);
    pred.p_high = ph.detection_probability;
    pred.p_low = pl.detection_probability;
  } else {
    const auto hi = mixture_std(cfg.slit_high);
    const auto lo = mixture_std(cfg.slit_low);
    pred.std_high = hi.first;
    pred.p_high = hi.second;
    pred.std_low = lo.first;
    pred.p_low = lo.second;
  }
  return pred;
}

}  // namespace

SignalingReport run_signaling_test(const SignalingConfig& cfg, int workers) {
  validate(cfg.constants);
  if (cfg.blocks < 20)
    throw std::invalid_argument("protocol.blocks: must be >= 20");
  if (cfg.pairs_per_block < 100)
    throw std::invalid_argument("protocol.pairs_per_block: must be >= 100");
  const double whigh = cfg.slit_high.effective_width();
  const double wlow = cfg.slit_low.effective_width();
  if (std::max(whigh, wlow) < 2.0 * std::min(whigh, wlow))
    throw std::invalid_argument("aperture widths: must differ by a factor >= 2");
  if (!(cfg.delay >= 0.0))
    throw std::invalid_argument("times.delays: must be nonnegative");

  const Grid1D g = grid_from_spec(cfg.grid, cfg.constants);
  Field2D base = epr_pair(g, g, cfg.epr);
  if (cfg.measurement_time != 0.0)
    base = free_evolve(base, cfg.measurement_time, cfg.constants);
  // Receiver reads x2 a delay after the slit plane: evolve particle 2 only,
  // then sample (x1 at the slit plane, x2 at the readout plane) jointly.
  const Field2D readout = free_evolve_axis(base, cfg.delay, 2, cfg.constants);
  const JointSampler sampler(readout);

  const SignalPrediction pred = predict_dispersions(cfg, g);
  const double threshold = 0.5 * (pred.std_high + pred.std_low);
  // Orientation of the decision rule; ties resolve to the low slit.
  const bool low_is_larger = pred.std_low >= pred.std_high;

  const double sc_high =
      spread_law(0.5 * cfg.slit_high.effective_width(), cfg.delay, cfg.constants);
  const double sc_low =
      spread_law(0.5 * cfg.slit_low.effective_width(), cfg.delay, cfg.constants);

  SignalingReport report;
  report.blocks.resize(cfg.blocks);
  report.predicted_std_high = pred.std_high;
  report.predicted_std_low = pred.std_low;
  report.threshold = threshold;

  std::vector<std::size_t> detected_high(cfg.blocks, 0), detected_low(cfg.blocks, 0);
  parallel_for(cfg.blocks, workers, [&](std::size_t b) {
    const int bit = static_cast<int>(b % 2);  // 0 -> high slit, 1 -> low slit
    const Aperture& slit = bit == 0 ? cfg.slit_high : cfg.slit_low;
    const double sc = bit == 0 ? sc_high : sc_low;
    const CounterRng rng(cfg.seed, b);
    double sum = 0.0, sum2 = 0.0;
    std::size_t detected = 0;
    for (std::size_t i = 0; i < cfg.pairs_per_block; ++i) {
      const std::uint64_t c = 3 * static_cast<std::uint64_t>(i);
      const JointSampler::Sample s = sampler.sample(rng, c);
      // Detection at lattice resolution: the owning cell's center decides.
      const double t = slit.transmission(g.x(s.j1));
      bool hit = t >= 1.0;
      if (!hit && t > 0.0) hit = rng.uniform(c + 1) < t;
      double x2 = s.x2;
      // Nonlocal reduction: detected pairs collapse to a packet at -x1;
      // undetected pairs count as unmeasured, so their partner follows the
      // untouched marginal rather than the miss-conditioned joint draw.
      if (cfg.model == Model::Collapse)
        x2 = hit ? -s.x1 + sc * rng.normal_pair(c + 2)[0]
                 : sampler.sample_marginal2(rng, c + 2);
      if (hit) ++detected;
      sum += x2;
      sum2 += x2 * x2;
    }
    const double m = static_cast<double>(cfg.pairs_per_block);
    const double mean = sum / m;
    const double var = (sum2 - m * mean * mean) / (m - 1.0);
    BlockResult& r = report.blocks[b];
    r.block = b;
    r.bit = bit;
    r.sigma_hat = std::sqrt(std::max(0.0, var));
    const bool above = r.sigma_hat > threshold;
    r.guess = (above == low_is_larger) ? 1 : 0;
    r.correct = r.guess == bit;
    (bit == 0 ? detected_high : detected_low)[b] = detected;
  });

  // Accuracy and a two-sample comparison of the block populations.
  std::size_t correct = 0;
  double mean_h = 0.0, mean_l = 0.0;
  std::size_t n_h = 0, n_l = 0;
  for (const BlockResult& r : report.blocks) {
    correct += r.correct ? 1 : 0;
    if (r.bit == 0) {
      mean_h += r.sigma_hat;
      ++n_h;
    } else {
      mean_l += r.sigma_hat;
      ++n_l;
    }
  }
  mean_h /= static_cast<double>(n_h);
  mean_l /= static_cast<double>(n_l);
  double var_h = 0.0, var_l = 0.0;
  for (const BlockResult& r : report.blocks) {
    const double d = r.sigma_hat - (r.bit == 0 ? mean_h : mean_l);
    (r.bit == 0 ? var_h : var_l) += d * d;
  }
  var_h /= static_cast<double>(n_h - 1);
  var_l /= static_cast<double>(n_l - 1);
  report.accuracy = static_cast<double>(correct) / static_cast<double>(cfg.blocks);
  report.binomial_z = (report.accuracy - 0.5) /
                      (0.5 / std::sqrt(static_cast<double>(cfg.blocks)));
  const double se = std::sqrt(var_h / static_cast<double>(n_h) +
                              var_l / static_cast<double>(n_l));
  report.welch_t = se > 0.0 ? (mean_h - mean_l) / se : 0.0;
  report.welch_p = 2.0 * normal_cdf(-std::abs(report.welch_t));
  std::size_t dh = 0, dl = 0;
  for (std::size_t b = 0; b < cfg.blocks; ++b) {
    dh += detected_high[b];
    dl += detected_low[b];
  }
  const double per_arm =
      static_cast<double>(cfg.pairs_per_block) * std::ceil(cfg.blocks / 2.0);
  report.detection_rate_high = static_cast<double>(dh) / per_arm;
  report.detection_rate_low =
      static_cast<double>(dl) /
      (static_cast<double>(cfg.pairs_per_block) * std::floor(cfg.blocks / 2.0));
  return report;
}

// ---------------------------------------------------------------------------

BoundReport run_kim_shih(const KimShihConfig& cfg) {
  validate(cfg.constants);
  if (!(cfg.delay >= 0.0))
    throw std::invalid_argument("times.delays: must be nonnegative");
  const Grid1D g = grid_from_spec(cfg.grid, cfg.constants);
  Field2D base = epr_pair(g, g, cfg.epr);
  if (cfg.measurement_time != 0.0)
    base = free_evolve(base, cfg.measurement_time, cfg.constants);
  const ConditionalEnsemble ens =
      condition_on_slit(base, cfg.slit).evolved(cfg.delay, cfg.constants);
  const DispersionReport disp = ens.mixture_moments();
  const SlitConditionedState oracle = slit_conditioned_state(
      cfg.epr, cfg.slit.snapped(g), cfg.measurement_time, cfg.delay, cfg.constants);
  BoundReport report;
  report.conditional_std_p2 = disp.std_p;
  report.oracle_std_p2 = oracle.std_p2();
  report.collapse_bound = cfg.constants.hbar / cfg.slit.effective_width();
  report.ratio = report.conditional_std_p2 / report.collapse_bound;
  report.oracle_ratio = report.oracle_std_p2 / report.collapse_bound;
  report.below_bound = report.ratio < 1.0;
  report.uncertainty_product = disp.product;
  report.detection_probability = ens.detection_probability;
  return report;
}

// ---------------------------------------------------------------------------

PersistenceReport run_correlation_persistence(const PersistenceConfig& cfg,
                                              int workers) {
  validate(cfg.constants);
  check_delays(cfg.delays);
  const Grid1D g = grid_from_spec(cfg.grid, cfg.constants);
  Field2D base = epr_pair(g, g, cfg.epr);
  if (cfg.measurement_time != 0.0)
    base = free_evolve(base, cfg.measurement_time, cfg.constants);
  const ConditionalEnsemble ens0 = condition_on_slit(base, cfg.slit);
  const Aperture snapped = cfg.slit.snapped(g);

  PersistenceReport report;
  report.detection_probability = ens0.detection_probability;
  report.rows.resize(cfg.delays.size());
  parallel_for(cfg.delays.size(), workers, [&](std::size_t di) {
    const double tau = cfg.delays[di];
    const ConditionalEnsemble ens = ens0.evolved(tau, cfg.constants);
    const Grid1D& g2 = ens.components.front().grid;
    const DensityMoments mx =
        density_moments(ens.position_density(), g2.dx, g2.x(0), g2.dx);
    const DensityMoments res = ens.residual_moments();
    const SlitConditionedState oracle = slit_conditioned_state(
        cfg.epr, snapped, cfg.measurement_time, tau, cfg.constants);
    PersistenceRow& row = report.rows[di];
    row.delay = tau;
    row.grid_mean_x2 = mx.mean;
    row.grid_std_x2 = std::sqrt(mx.var);
    row.oracle_mean_x2 = oracle.mean(0);
    row.oracle_std_x2 = oracle.std_x2();
    row.grid_residual_mean = res.mean;
    row.grid_residual_std = std::sqrt(res.var);
    row.oracle_residual_mean = oracle.residual_mean();
    row.oracle_residual_std = oracle.residual_std();
  });
  return report;
}

}  // namespace eprlab
