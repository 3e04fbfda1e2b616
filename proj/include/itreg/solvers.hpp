#pragma once

#include <functional>
#include <string>
#include <vector>

#include "itreg/linops.hpp"
#include "itreg/regularizers.hpp"

namespace itreg {

enum class SolverVariant { dgd, adgd };

enum class ProxSchedule { fixed, increasing };

struct IterateView {
  int t;
  const Vector& primal;    // regularized output at t
  const Vector* averaged;  // running mean (DGD only, else nullptr)
  const Vector& dual;
};

struct MetricCallback {
  std::string name;
  std::function<double(const IterateView&)> fn;
};

/// gamma <= 0 means "estimate ||X|| by the power method, inflate by the
/// 1.01 safety factor, and set gamma = alpha / norm^2".
struct SolverConfig {
  SolverVariant variant = SolverVariant::dgd;
  int max_iterations = 100;
  double gamma = 0.0;
  int record_every = 1;
  bool store_iterates = false;
  bool record_dual_objective = true;
  ProxSchedule prox_schedule = ProxSchedule::fixed;
  std::vector<MetricCallback> callbacks;
};

struct TraceEntry {
  int t = 0;
  double dual_objective = std::numeric_limits<double>::quiet_NaN();
  double theta = std::numeric_limits<double>::quiet_NaN();  // ADGD only
  std::vector<double> metrics;
};

/// Per-recorded-iteration diagnostics plus, when requested, iterate
/// snapshots parallel to `entries`. The final iterates are always kept.
struct SolverTrace {
  SolverVariant variant = SolverVariant::dgd;
  double gamma = 0.0;
  double norm_estimate = 0.0;  // 0 when gamma was supplied explicitly
  int iterations_run = 0;      // primal iterates computed (max_iterations + 1)
  std::vector<std::string> metric_names;
  std::vector<TraceEntry> entries;
  std::vector<Vector> primal_iterates;
  std::vector<Vector> averaged_iterates;  // DGD
  std::vector<Vector> dual_iterates;
  std::vector<Vector> z_iterates;  // ADGD
  std::vector<Vector> r_iterates;  // ADGD
  Vector final_primal;
  Vector final_averaged;  // DGD
  Vector final_dual;
};

SolverTrace run_dgd(const LinearOperator& op, const Vector& y_obs,
                    Regularizer& reg, const SolverConfig& cfg);

SolverTrace run_adgd(const LinearOperator& op, const Vector& y_obs,
                     Regularizer& reg, const SolverConfig& cfg);

/// The noise-free auxiliary iteration: identical code path driven by the
/// exact data, dispatching on cfg.variant.
SolverTrace run_reference(const LinearOperator& op, const Vector& y_exact,
                          Regularizer& reg, const SolverConfig& cfg);

/// theta_0 = 1, theta_{t+1} = (1 + sqrt(1 + 4 theta_t^2)) / 2.
double theta_next(double theta);

/// Columns: t, dual_objective, theta (ADGD), then one column per metric.
void export_trace_csv(const SolverTrace& trace, const std::string& path);

/// gamma = alpha / (1.01 * norm_estimate)^2 from a fresh power-method run.
double default_gamma(const LinearOperator& op, double alpha);

}  // namespace itreg
