#include "itreg/regularizers.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "itreg/grid.hpp"

namespace itreg {

namespace {

double soft_threshold(double x, double tau) {
  if (x > tau) return x - tau;
  if (x < -tau) return x + tau;
  return 0.0;
}

// Discrete gradient: forward differences, zero past the last row/column.
// Dual fields are stacked (px, py), each a row-major rows x cols block.
void tv_grad(const Vector& u, GridShape s, Vector& out) {
  const Index rc = s.size();
  out.setZero();
  for (Index i = 0; i < s.rows; ++i) {
    for (Index j = 0; j < s.cols; ++j) {
      const Index idx = i * s.cols + j;
      if (j < s.cols - 1) out[idx] = u[idx + 1] - u[idx];
      if (i < s.rows - 1) out[rc + idx] = u[idx + s.cols] - u[idx];
    }
  }
}

void tv_div_adjoint(const Vector& p, GridShape s, Vector& out) {
  const Index rc = s.size();
  out.setZero();
  for (Index i = 0; i < s.rows; ++i) {
    for (Index j = 0; j < s.cols; ++j) {
      const Index idx = i * s.cols + j;
      double acc = 0.0;
      if (j > 0) acc += p[idx - 1];
      if (j < s.cols - 1) acc -= p[idx];
      if (i > 0) acc += p[rc + idx - s.cols];
      if (i < s.rows - 1) acc -= p[rc + idx];
      out[idx] = acc;
    }
  }
}

void project_unit_pairs(Vector& p, Index rc) {
  for (Index k = 0; k < rc; ++k) {
    const double nrm = std::hypot(p[k], p[rc + k]);
    if (nrm > 1.0) {
      p[k] /= nrm;
      p[rc + k] /= nrm;
    }
  }
}

double tv_value_flat(const Vector& u, GridShape s) {
  double total = 0.0;
  for (Index i = 0; i < s.rows; ++i) {
    for (Index j = 0; j < s.cols; ++j) {
      const Index idx = i * s.cols + j;
      const double dx = (j < s.cols - 1) ? u[idx + 1] - u[idx] : 0.0;
      const double dy = (i < s.rows - 1) ? u[idx + s.cols] - u[idx] : 0.0;
      total += std::hypot(dx, dy);
    }
  }
  return total;
}

// Accelerated projected gradient on the dual of
//   min_u TV(u) + (1/(2 tau)) ||u - w||^2,
// the classical fast gradient projection scheme with step bound
// ||D||^2 <= 8. warm (when nonempty) seeds the dual field.
ProxResult tv_prox(GridShape s, double tau, const Vector& w, int budget,
                   Vector* warm_state) {
  const Index rc = s.size();
  Vector p_acc(2 * rc);
  if (warm_state != nullptr && warm_state->size() == 2 * rc) {
    p_acc = *warm_state;
    project_unit_pairs(p_acc, rc);  // keep warm points feasible
  } else {
    p_acc.setZero();
  }
  Vector q = p_acc;
  Vector u(rc), grad(2 * rc), div(rc);
  double theta = 1.0;
  const double step = 1.0 / (8.0 * tau);

  ProxResult res;
  res.precision = ProxPrecision::inexact;
  res.inner_objectives.reserve(budget);

  Vector cand = p_acc;
  for (int k = 0; k < budget; ++k) {
    tv_div_adjoint(q, s, div);
    u = w - tau * div;
    tv_grad(u, s, grad);
    cand = q + step * grad;
    project_unit_pairs(cand, rc);

    const double theta_next = (1.0 + std::sqrt(1.0 + 4.0 * theta * theta)) / 2.0;
    q = cand + ((theta - 1.0) / theta_next) * (cand - p_acc);
    p_acc = cand;
    theta = theta_next;

    tv_div_adjoint(p_acc, s, div);
    u = w - tau * div;
    res.inner_objectives.push_back(tv_value_flat(u, s) +
                                   (u - w).squaredNorm() / (2.0 * tau));
  }

  tv_div_adjoint(p_acc, s, div);
  res.point = w - tau * div;
  res.inner_iterations_used = budget;

  // weak-duality gap in the original prox-objective scale
  const double primal_scaled =
      tau * tv_value_flat(res.point, s) + 0.5 * (res.point - w).squaredNorm();
  Vector dw(2 * rc);
  tv_grad(w, s, dw);
  const double dual_scaled =
      tau * dw.dot(p_acc) - 0.5 * tau * tau * div.squaredNorm();
  res.estimated_gap = std::max(0.0, (primal_scaled - dual_scaled) / tau);

  if (warm_state != nullptr) *warm_state = p_acc;
  return res;
}

void check_finite(const Vector& w, const char* what) {
  if (!w.allFinite()) {
    std::ostringstream msg;
    msg << what << ": non-finite input vector";
    throw std::invalid_argument(msg.str());
  }
}

void check_grid_length(const Vector& w, GridShape s, const char* what) {
  if (w.size() != s.size()) {
    std::ostringstream msg;
    msg << what << ": expected flattened " << s.rows << "x" << s.cols
        << " vector of length " << s.size() << ", got " << w.size();
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

Regularizer::Regularizer(double alpha, PenaltyKind penalty, GridShape shape,
                         int inner_budget)
    : alpha_(alpha),
      penalty_(penalty),
      shape_(shape),
      tv_inner_budget_(inner_budget) {
  if (alpha <= 0.0)
    throw std::invalid_argument("regularizer: alpha must be positive");
  if ((penalty == PenaltyKind::nuclear || penalty == PenaltyKind::tv) &&
      shape.size() <= 0)
    throw std::invalid_argument("regularizer: matrix penalty needs a grid");
  if (penalty == PenaltyKind::tv && inner_budget <= 0)
    throw std::invalid_argument("regularizer: tv inner budget must be positive");
}

Regularizer Regularizer::zero(double alpha) {
  return Regularizer(alpha, PenaltyKind::zero, {}, 0);
}

Regularizer Regularizer::l1(double alpha) {
  return Regularizer(alpha, PenaltyKind::l1, {}, 0);
}

Regularizer Regularizer::nuclear(double alpha, GridShape shape) {
  return Regularizer(alpha, PenaltyKind::nuclear, shape, 0);
}

Regularizer Regularizer::tv(double alpha, GridShape shape, int inner_budget) {
  return Regularizer(alpha, PenaltyKind::tv, shape, inner_budget);
}

Regularizer Regularizer::fresh_clone() const {
  Regularizer copy = *this;
  copy.tv_warm_.resize(0);
  return copy;
}

ProxResult prox_penalty(PenaltyKind penalty, GridShape shape, double tau,
                        const Vector& w, int inner_budget,
                        Vector* warm_state) {
  check_finite(w, "prox");
  if (tau <= 0.0) throw std::invalid_argument("prox: tau must be positive");
  switch (penalty) {
    case PenaltyKind::zero: {
      ProxResult res;
      res.point = w;
      return res;
    }
    case PenaltyKind::l1: {
      ProxResult res;
      res.point.resize(w.size());
      for (Index i = 0; i < w.size(); ++i)
        res.point[i] = soft_threshold(w[i], tau);
      return res;
    }
    case PenaltyKind::nuclear: {
      check_grid_length(w, shape, "nuclear prox");
      Matrix A = to_grid(w, shape);
      Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
      if (svd.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "nuclear prox: SVD failed to converge on a " << shape.rows
            << "x" << shape.cols << " matrix (max |entry| "
            << A.cwiseAbs().maxCoeff() << ")";
        throw std::runtime_error(msg.str());
      }
      Vector sv = svd.singularValues();
      for (Index i = 0; i < sv.size(); ++i)
        sv[i] = std::max(sv[i] - tau, 0.0);
      ProxResult res;
      res.point = from_grid(svd.matrixU() * sv.asDiagonal() *
                            svd.matrixV().transpose());
      return res;
    }
    case PenaltyKind::tv: {
      check_grid_length(w, shape, "tv prox");
      return tv_prox(shape, tau, w, inner_budget, warm_state);
    }
  }
  throw std::logic_error("prox: unknown penalty kind");
}

ProxResult prox_f(Regularizer& reg, const Vector& w,
                  int inner_budget_override) {
  const int budget =
      inner_budget_override > 0 ? inner_budget_override : reg.tv_inner_budget_;
  return prox_penalty(reg.penalty_, reg.shape_, 1.0 / reg.alpha_, w, budget,
                      reg.penalty_ == PenaltyKind::tv ? &reg.tv_warm_
                                                      : nullptr);
}

double penalty_value(PenaltyKind penalty, GridShape shape, const Vector& w) {
  switch (penalty) {
    case PenaltyKind::zero:
      return 0.0;
    case PenaltyKind::l1:
      return w.lpNorm<1>();
    case PenaltyKind::nuclear: {
      check_grid_length(w, shape, "nuclear value");
      Eigen::BDCSVD<Matrix> svd(to_grid(w, shape));
      return svd.singularValues().sum();
    }
    case PenaltyKind::tv:
      check_grid_length(w, shape, "tv value");
      return tv_value_flat(w, shape);
  }
  throw std::logic_error("penalty_value: unknown penalty kind");
}

double penalty_value(const Regularizer& reg, const Vector& w) {
  return penalty_value(reg.penalty(), reg.shape(), w);
}

double regularizer_value(const Regularizer& reg, const Vector& w) {
  return penalty_value(reg, w) + 0.5 * reg.alpha() * w.squaredNorm();
}

double conjugate_value(const Regularizer& reg, const Vector& v) {
  check_finite(v, "conjugate_value");
  const double alpha = reg.alpha();
  const Vector scaled = v / alpha;
  // cold inner start: the warm slot belongs to the owning solver run
  ProxResult prox = prox_penalty(reg.penalty(), reg.shape(), 1.0 / alpha,
                                 scaled, reg.tv_inner_budget(), nullptr);
  const double env = penalty_value(reg, prox.point) +
                     0.5 * alpha * (prox.point - scaled).squaredNorm();
  return v.squaredNorm() / (2.0 * alpha) - env;
}

Vector dual_gradient(const Regularizer& reg, const Vector& v) {
  check_finite(v, "dual_gradient");
  return prox_penalty(reg.penalty(), reg.shape(), 1.0 / reg.alpha(),
                      v / reg.alpha(), reg.tv_inner_budget(), nullptr)
      .point;
}

double dual_objective(const Regularizer& reg, const LinearOperator& op,
                      const Vector& y_obs, const Vector& v) {
  if (y_obs.size() != op.codomain_dim() || v.size() != op.codomain_dim()) {
    std::ostringstream msg;
    msg << "dual_objective: expected codomain vectors of length "
        << op.codomain_dim() << ", got y " << y_obs.size() << " and v "
        << v.size();
    throw std::invalid_argument(msg.str());
  }
  return conjugate_value(reg, -op.adjoint(v)) + y_obs.dot(v);
}

double tv_value(const Matrix& u) {
  return tv_value_flat(from_grid(u), GridShape{u.rows(), u.cols()});
}

}  // namespace itreg
