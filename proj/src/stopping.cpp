#include "itreg/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace itreg {

StoppingCertificate make_certificate(SolverVariant variant, double x_norm,
                                     double v_dual_norm, double alpha,
                                     double delta, std::optional<double> c) {
  if (x_norm <= 0.0 || v_dual_norm <= 0.0 || alpha <= 0.0)
    throw std::invalid_argument(
        "make_certificate: x_norm, v_dual_norm, and alpha must be positive");
  if (!(delta > 0.0 && delta <= 1.0)) {
    std::ostringstream msg;
    msg << "make_certificate: delta must lie in (0, 1], got " << delta;
    throw std::invalid_argument(msg.str());
  }

  StoppingCertificate cert;
  cert.variant = variant;
  cert.delta = delta;
  if (variant == SolverVariant::dgd) {
    cert.a = 2.0 / x_norm;
    cert.b = x_norm * v_dual_norm / alpha;
    cert.c = c.value_or(cert.b / cert.a);
    if (cert.c <= 0.0)
      throw std::invalid_argument("make_certificate: c must be positive");
    cert.t_delta = static_cast<long>(std::ceil(cert.c / delta));
    cert.final_bound = (cert.a * (std::sqrt(cert.c) + 1.0) +
                        cert.b / std::sqrt(cert.c)) *
                       std::sqrt(delta);
  } else {
    cert.a = 4.0 / x_norm;
    cert.b = 2.0 * x_norm * v_dual_norm / alpha;
    cert.c = c.value_or(std::sqrt(cert.b / cert.a));
    if (cert.c <= 0.0)
      throw std::invalid_argument("make_certificate: c must be positive");
    cert.t_delta = static_cast<long>(std::ceil(cert.c / std::sqrt(delta)));
    cert.final_bound =
        (cert.a * (cert.c + 1.0) + cert.b / cert.c) * std::sqrt(delta);
  }
  return cert;
}

double bound_at(const StoppingCertificate& cert, long t) {
  const long min_t = cert.variant == SolverVariant::dgd ? 1 : 2;
  if (t < min_t) {
    std::ostringstream msg;
    msg << "bound_at: bound is stated for t >= " << min_t << ", got " << t;
    throw std::invalid_argument(msg.str());
  }
  const double td = static_cast<double>(t);
  if (cert.variant == SolverVariant::dgd)
    return cert.a * std::sqrt(td) * cert.delta + cert.b / std::sqrt(td);
  return cert.a * td * cert.delta + cert.b / td;
}

HoldoutResult holdout_stop(
    const SolverTrace& trace,
    const std::function<double(int t, const Vector& iterate)>& validation_eval,
    IterateSelector selector) {
  if (trace.entries.empty())
    throw std::invalid_argument("holdout_stop: empty trace");
  if (trace.primal_iterates.size() != trace.entries.size())
    throw std::invalid_argument(
        "holdout_stop: trace has no iterate snapshots "
        "(run with store_iterates)");
  if (selector == IterateSelector::averaged &&
      trace.averaged_iterates.size() != trace.entries.size())
    throw std::invalid_argument(
        "holdout_stop: trace has no averaged iterates");

  HoldoutResult best;
  bool first = true;
  for (std::size_t k = 0; k < trace.entries.size(); ++k) {
    const Vector& candidate = selector == IterateSelector::averaged
                                  ? trace.averaged_iterates[k]
                                  : trace.primal_iterates[k];
    const double score = validation_eval(trace.entries[k].t, candidate);
    if (first || score < best.score) {
      best.t_star = trace.entries[k].t;
      best.score = score;
      first = false;
    }
  }
  return best;
}

HoldoutResult holdout_stop_metric(const SolverTrace& trace,
                                  const std::string& metric_name) {
  if (trace.entries.empty())
    throw std::invalid_argument("holdout_stop: empty trace");
  const auto it = std::find(trace.metric_names.begin(),
                            trace.metric_names.end(), metric_name);
  if (it == trace.metric_names.end())
    throw std::invalid_argument("holdout_stop: unknown metric column " +
                                metric_name);
  const std::size_t col = it - trace.metric_names.begin();
  HoldoutResult best;
  bool first = true;
  for (const auto& e : trace.entries) {
    const double score = e.metrics.at(col);
    if (first || score < best.score) {
      best.t_star = e.t;
      best.score = score;
      first = false;
    }
  }
  return best;
}

}  // namespace itreg
