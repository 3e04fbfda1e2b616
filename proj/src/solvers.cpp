#include "itreg/solvers.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace itreg {

namespace {

constexpr double kNormSafety = 1.01;
constexpr double kDivergenceLimit = 1e12;

void check_inputs(const LinearOperator& op, const Vector& y,
                  const SolverConfig& cfg) {
  if (y.size() != op.codomain_dim()) {
    std::ostringstream msg;
    msg << "solver: expected observation of length " << op.codomain_dim()
        << ", got " << y.size();
    throw std::invalid_argument(msg.str());
  }
  if (cfg.max_iterations <= 0)
    throw std::invalid_argument("solver: max_iterations must be positive");
  if (cfg.record_every <= 0)
    throw std::invalid_argument("solver: record_every must be positive");
}

void check_iterate(const Vector& v, const char* name, int t) {
  if (!v.allFinite()) {
    std::ostringstream msg;
    msg << "solver: non-finite " << name << " at iteration " << t;
    throw std::runtime_error(msg.str());
  }
  if (v.norm() > kDivergenceLimit) {
    std::ostringstream msg;
    msg << "solver: diverged (" << name << " norm exceeds 1e12) at iteration "
        << t;
    throw std::runtime_error(msg.str());
  }
}

int prox_budget(const Regularizer& reg, const SolverConfig& cfg, int t) {
  if (cfg.prox_schedule == ProxSchedule::fixed || reg.prox_is_exact())
    return -1;  // regularizer default
  return static_cast<int>(
      std::ceil(reg.tv_inner_budget() * (1.0 + std::log1p(double(t)))));
}

struct Recorder {
  SolverTrace& trace;
  const SolverConfig& cfg;
  const Regularizer& reg;
  const LinearOperator& op;
  const Vector& y;

  bool due(int t) const {
    return t % cfg.record_every == 0 || t == cfg.max_iterations;
  }

  void record(int t, const Vector& w, const Vector* u, const Vector& v,
              double theta, const Vector* z, const Vector* r) {
    TraceEntry entry;
    entry.t = t;
    entry.theta = theta;
    if (cfg.record_dual_objective)
      entry.dual_objective = dual_objective(reg, op, y, v);
    IterateView view{t, w, u, v};
    entry.metrics.reserve(cfg.callbacks.size());
    for (const auto& cb : cfg.callbacks) entry.metrics.push_back(cb.fn(view));
    trace.entries.push_back(std::move(entry));
    if (cfg.store_iterates) {
      trace.primal_iterates.push_back(w);
      trace.dual_iterates.push_back(v);
      if (u != nullptr) trace.averaged_iterates.push_back(*u);
      if (z != nullptr) trace.z_iterates.push_back(*z);
      if (r != nullptr) trace.r_iterates.push_back(*r);
    }
  }
};

SolverTrace run_core(const LinearOperator& op, const Vector& y,
                     Regularizer& reg, const SolverConfig& cfg) {
  check_inputs(op, y, cfg);

  SolverTrace trace;
  trace.variant = cfg.variant;
  if (cfg.gamma > 0.0) {
    trace.gamma = cfg.gamma;
  } else {
    const OpNormEstimate est = op_norm(op);
    if (est.zero_operator)
      throw std::invalid_argument("solver: zero operator has no step size");
    trace.norm_estimate = est.value;
    trace.gamma = reg.alpha() / std::pow(kNormSafety * est.value, 2);
  }
  for (const auto& cb : cfg.callbacks) trace.metric_names.push_back(cb.name);

  const double gamma = trace.gamma;
  const double alpha = reg.alpha();
  Recorder rec{trace, cfg, reg, op, y};

  if (cfg.variant == SolverVariant::dgd) {
    Vector v = Vector::Zero(op.codomain_dim());
    Vector w, u;
    for (int t = 0; t <= cfg.max_iterations; ++t) {
      w = prox_f(reg, -op.adjoint(v) / alpha, prox_budget(reg, cfg, t)).point;
      check_iterate(w, "primal iterate", t);
      if (t == 0)
        u = w;
      else
        u += (w - u) / double(t + 1);  // running mean
      if (rec.due(t)) rec.record(t, w, &u, v, std::nan(""), nullptr, nullptr);
      if (t < cfg.max_iterations) {
        v += gamma * (op.apply(w) - y);
        check_iterate(v, "dual iterate", t + 1);
      }
    }
    trace.final_primal = w;
    trace.final_averaged = u;
    trace.final_dual = v;
  } else {
    Vector v = Vector::Zero(op.codomain_dim());
    Vector z_prev = Vector::Zero(op.codomain_dim());  // z_{-1} = z_0 = 0
    double theta = 1.0;
    Vector w, r, z_new;
    for (int t = 0; t <= cfg.max_iterations; ++t) {
      w = prox_f(reg, -op.adjoint(z_prev) / alpha, prox_budget(reg, cfg, t))
              .point;
      check_iterate(w, "primal iterate", t);
      r = prox_f(reg, -op.adjoint(v) / alpha, prox_budget(reg, cfg, t)).point;
      z_new = v + gamma * (op.apply(r) - y);
      check_iterate(z_new, "dual iterate", t);
      const double th_next = theta_next(theta);
      if (rec.due(t)) rec.record(t, w, nullptr, v, theta, &z_new, &r);
      if (t < cfg.max_iterations) {
        v = z_new + ((theta - 1.0) / th_next) * (z_new - z_prev);
        check_iterate(v, "extrapolated dual iterate", t + 1);
      }
      z_prev = z_new;
      theta = th_next;
    }
    trace.final_primal = w;
    trace.final_dual = v;
  }
  trace.iterations_run = cfg.max_iterations + 1;
  return trace;
}

}  // namespace

double theta_next(double theta) {
  return (1.0 + std::sqrt(1.0 + 4.0 * theta * theta)) / 2.0;
}

SolverTrace run_dgd(const LinearOperator& op, const Vector& y_obs,
                    Regularizer& reg, const SolverConfig& cfg) {
  if (cfg.variant != SolverVariant::dgd)
    throw std::invalid_argument("run_dgd: config variant is not DGD");
  return run_core(op, y_obs, reg, cfg);
}

SolverTrace run_adgd(const LinearOperator& op, const Vector& y_obs,
                     Regularizer& reg, const SolverConfig& cfg) {
  if (cfg.variant != SolverVariant::adgd)
    throw std::invalid_argument("run_adgd: config variant is not ADGD");
  return run_core(op, y_obs, reg, cfg);
}

SolverTrace run_reference(const LinearOperator& op, const Vector& y_exact,
                          Regularizer& reg, const SolverConfig& cfg) {
  return run_core(op, y_exact, reg, cfg);
}

double default_gamma(const LinearOperator& op, double alpha) {
  const OpNormEstimate est = op_norm(op);
  if (est.zero_operator)
    throw std::invalid_argument("default_gamma: zero operator");
  return alpha / std::pow(kNormSafety * est.value, 2);
}

void export_trace_csv(const SolverTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace csv: " + path);
  out.precision(17);
  out << "# itreg-trace-v1\n";
  out << "t,dual_objective";
  const bool with_theta = trace.variant == SolverVariant::adgd;
  if (with_theta) out << ",theta";
  for (const auto& name : trace.metric_names) out << ',' << name;
  out << '\n';
  for (const auto& e : trace.entries) {
    out << e.t << ',' << e.dual_objective;
    if (with_theta) out << ',' << e.theta;
    for (double m : e.metrics) out << ',' << m;
    out << '\n';
  }
}

}  // namespace itreg
