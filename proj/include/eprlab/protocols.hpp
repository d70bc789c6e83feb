#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eprlab/measurement.hpp"
#include "eprlab/oracle.hpp"

namespace eprlab {

struct GridSpec {
  std::size_t n = 1024;
  double x_min = -40.0;
  double x_max = 40.0;
};

// Receiver-side physics assumed for the signaling run. Collapse is the
// nonlocal-reduction reading (detected pairs replaced by localized packets,
// undetected pairs left in the marginal); Conditional is standard QM with no
// coincidence information, i.e. the plain marginal ensemble.
enum class Model { Collapse, Conditional };

// ---------------------------------------------------------------------------

struct DiscriminatorConfig {
  EprParams epr;
  Aperture slit;
  double measurement_time = 0.0;
  std::vector<double> delays{0.0, 0.5, 1.0};
  ParaxialGeometry geometry;
  GridSpec grid;
  PhysicalConstants constants;
  std::uint64_t seed = 0;
};

// One (model, delay) cell: particle-2 dispersion, paraxial angular width
// (NaN at zero flight distance) and the detection density on grid2.
struct ModelRow {
  std::string model;  // "M1" | "M2" | "M3"
  double delay = 0.0;
  DispersionReport dispersion;
  double angular_width = 0.0;
  std::vector<double> density;
};

struct DiscriminatorReport {
  std::vector<ModelRow> rows;  // model-major, delays in config order
  std::vector<double> residual_mean;  // x1 + x2 under M2, per delay
  std::vector<double> residual_std;
  double detection_probability = 0.0;
  Grid1D grid2;
};

DiscriminatorReport run_discriminator(const DiscriminatorConfig& cfg, int workers = 1);

// ---------------------------------------------------------------------------

struct SignalingConfig {
  EprParams epr;
  Aperture slit_high;
  Aperture slit_low{ApertureKind::Tophat, 0.0, 0.2};
  std::size_t blocks = 50;
  std::size_t pairs_per_block = 2000;
  double measurement_time = 0.0;
  double delay = 1.0;
  GridSpec grid;
  PhysicalConstants constants;
  Model model = Model::Conditional;
  std::uint64_t seed = 0;
};

struct BlockResult {
  std::size_t block = 0;
  int bit = 0;  // 0 -> slit_high, 1 -> slit_low (sender alternates)
  double sigma_hat = 0.0;
  int guess = 0;
  bool correct = false;
};

struct SignalingReport {
  std::vector<BlockResult> blocks;
  double predicted_std_high = 0.0;  // oracle prediction under cfg.model
  double predicted_std_low = 0.0;
  double threshold = 0.0;
  double accuracy = 0.0;
  double binomial_z = 0.0;  // accuracy against the chance rate 0.5
  double welch_t = 0.0;     // two-sample statistic between block populations
  double welch_p = 0.0;
  double detection_rate_high = 0.0;
  double detection_rate_low = 0.0;
};

SignalingReport run_signaling_test(const SignalingConfig& cfg, int workers = 1);

// ---------------------------------------------------------------------------

struct KimShihConfig {
  EprParams epr{0.5, 10.0};
  Aperture slit{ApertureKind::Tophat, 0.0, 0.2};
  double measurement_time = 0.0;
  double delay = 1.0;
  GridSpec grid;
  PhysicalConstants constants;
};

struct BoundReport {
  double conditional_std_p2 = 0.0;  // grid ensemble
  double oracle_std_p2 = 0.0;
  double collapse_bound = 0.0;  // hbar / a_eff
  double ratio = 0.0;
  double oracle_ratio = 0.0;
  bool below_bound = false;
  double uncertainty_product = 0.0;
  double detection_probability = 0.0;
};

BoundReport run_kim_shih(const KimShihConfig& cfg);

// ---------------------------------------------------------------------------

struct PersistenceConfig {
  EprParams epr;
  Aperture slit{ApertureKind::Tophat, 2.0, 1.0};
  double measurement_time = 0.0;
  std::vector<double> delays{0.0, 0.5, 1.0};
  GridSpec grid;
  PhysicalConstants constants;
};

// Conditional statistics of x2 and the x1 + x2 residual at each delay,
// computed both by evolving the conditioned grid ensemble and by the
// covariance-form oracle.
struct PersistenceRow {
  double delay = 0.0;
  double grid_mean_x2 = 0.0;
  double grid_std_x2 = 0.0;
  double oracle_mean_x2 = 0.0;
  double oracle_std_x2 = 0.0;
  double grid_residual_mean = 0.0;
  double grid_residual_std = 0.0;
  double oracle_residual_mean = 0.0;
  double oracle_residual_std = 0.0;
};

struct PersistenceReport {
  std::vector<PersistenceRow> rows;
  double detection_probability = 0.0;
};

PersistenceReport run_correlation_persistence(const PersistenceConfig& cfg,
                                              int workers = 1);

}  // namespace eprlab
