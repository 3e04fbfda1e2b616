#pragma once

#include <functional>
#include <optional>
#include <string>

#include "itreg/solvers.hpp"

namespace itreg {

/// Constants of the a-priori stopping guarantee:
///   DGD:  a = 2/||X||,  b = ||X|| ||v'|| / alpha, t_delta = ceil(c/delta),
///         bound(t) = a sqrt(t) delta + b / sqrt(t),
///         final = [a(sqrt(c)+1) + b/sqrt(c)] sqrt(delta);
///   ADGD: a = 4/||X||,  b = 2||X|| ||v'|| / alpha,
///         t_delta = ceil(c delta^{-1/2}),
///         bound(t) = a t delta + b / t,
///         final = [a(c+1) + b/c] sqrt(delta).
struct StoppingCertificate {
  SolverVariant variant = SolverVariant::dgd;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double delta = 0.0;
  long t_delta = 0;
  double final_bound = 0.0;
};

/// c defaults to the scale of the unconstrained bound minimizer:
/// b/a for DGD and sqrt(b/a) for ADGD.
StoppingCertificate make_certificate(SolverVariant variant, double x_norm,
                                     double v_dual_norm, double alpha,
                                     double delta,
                                     std::optional<double> c = std::nullopt);

/// Pointwise theoretical bound; valid for t >= 1 (DGD) or t >= 2 (ADGD).
double bound_at(const StoppingCertificate& cert, long t);

struct HoldoutResult {
  int t_star = 0;
  double score = 0.0;
};

enum class IterateSelector { primal, averaged };

/// Minimizes the validation score over the recorded iterates; ties break
/// to the smallest t. Requires a trace with stored iterate snapshots.
HoldoutResult holdout_stop(
    const SolverTrace& trace,
    const std::function<double(int t, const Vector& iterate)>& validation_eval,
    IterateSelector selector = IterateSelector::primal);

/// Same rule over an already-recorded metric column.
HoldoutResult holdout_stop_metric(const SolverTrace& trace,
                                  const std::string& metric_name);

}  // namespace itreg
