#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace isac {

using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Thrown when a requested constraint set cannot be satisfied at all
/// (e.g. a side-lobe bound tighter than the unconstrained minimum).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Static OFDM system parameters.
struct OfdmConfig {
  int k = 128;                 ///< number of sub-carriers, >= 2
  double delta_f = 1e6 / 128;  ///< sub-carrier spacing [Hz]
  double n0 = 1e-6;            ///< noise power spectral density [W/Hz]
  double p_total = 1.0;        ///< total power budget [W]
  int oversample = 16;         ///< delay bins per sub-carrier
  double tau = 0.0;            ///< reference echo delay [s], in [0, 1/delta_f)

  int n_bins() const { return k * oversample; }
  double symbol_duration() const { return 1.0 / delta_f; }

  void validate() const;
};

/// Non-negative per-sub-carrier powers summing to the budget.
struct PowerAllocation {
  Vec p;

  double total() const { return p.sum(); }
  void validate(const OfdmConfig& cfg, double rel_tol = 1e-9) const;
};

/// Per-sub-carrier complex channel gains.
struct ChannelRealization {
  CVec h;

  /// g_k = |h_k|^2 / (n0 * delta_f)
  Vec gain_over_noise(const OfdmConfig& cfg) const;
};

/// Oversampled pulse-compression magnitude with its lobe partition.
///
/// The main lobe is the circularly contiguous run of bins strictly between
/// the first local minima on either side of the global peak; the boundary
/// minima themselves count as side lobes.
struct RangeProfile {
  Vec magnitude;
  Index peak_index = 0;
  std::vector<Index> mainlobe_bins;
  std::vector<Index> sidelobe_bins;

  // distance from the peak to the boundary minimum on each side
  Index left_extent = 1;
  Index right_extent = 1;
};

/// Scalar figures of merit for one allocation.
struct SensingReport {
  double capacity_bits = 0.0;
  double psl_db = 0.0;  ///< <= 0; -inf when every side-lobe bin is exactly zero
  double accuracy_proxy = 0.0;
  double mlw_bins = 0.0;
  double capacity_loss = 0.0;      ///< (C_ref - C) / C_ref when a reference is attached
  double accuracy_loss_pct = 0.0;  ///< main-lobe width increase vs reference [%]
  double suppression_db = 0.0;     ///< -psl_db
};

/// Iteration knobs for the projected-gradient solvers.
struct SolverSettings {
  int max_iters = 20000;
  double step_init = 0.0;  ///< 0 selects p_total / k
  double tol = 1e-9;       ///< objective-change convergence threshold
  std::uint64_t seed = 0;  ///< reserved for randomized restarts

  void validate() const;
};

struct SolverResult {
  PowerAllocation allocation;
  bool converged = false;
  int iterations = 0;
};

/// Constraint thresholds for the dynamic allocation decision.
struct Thresholds {
  double gamma_psl_db = -20.0;  ///< side-lobe bound [dB], <= 0
  double gamma_acc = 1.0;       ///< accuracy-proxy lower bound, > 0
  double gamma_c = 0.2;         ///< capacity-loss bound, in (0, 1)
  double epsilon = 0.01;        ///< blend-search grid resolution
  bool improve_accuracy_when_satisfied = false;

  /// When set, accuracy satisfaction means mlw_3db <= bound instead of
  /// accuracy_proxy >= gamma_acc. Used by the capacity-surface sweep,
  /// whose accuracy axis is a main-lobe-width bound.
  std::optional<double> mlw_bound_bins;

  void validate() const;
};

enum class Mode { Isac, CommOnly };
enum class Branch { BothViolated, BlendTowardEdges, BlendTowardPslOpt, WfAlreadyFeasible };

const char* to_string(Mode m);
const char* to_string(Branch b);

/// Result of the dynamic ISAC-vs-communication decision.
struct DecisionOutcome {
  Mode mode = Mode::CommOnly;
  Branch branch = Branch::BothViolated;
  PowerAllocation allocation;
  double alpha = 0.0;
  SensingReport report;
  bool feasible = false;  ///< all three constraints hold at `allocation`
};

}  // namespace isac
