#pragma once

#include "itreg/linops.hpp"

namespace itreg {

enum class PenaltyKind { zero, l1, nuclear, tv };

enum class ProxPrecision { exact, inexact };

struct ProxResult {
  Vector point;
  int inner_iterations_used = 0;
  ProxPrecision precision = ProxPrecision::exact;
  double estimated_gap = 0.0;  // primal-dual gap estimate when inexact
  /// tv only: primal denoising objective after each inner step
  std::vector<double> inner_objectives;
};

/// R = F + (alpha/2)||.||^2 with F selected by the penalty kind.
/// zero/l1/nuclear are immutable; tv carries a warm-start slot for the
/// inner dual variable, so one solver run must own a tv instance
/// exclusively (use fresh_clone for concurrent runs).
class Regularizer {
 public:
  static Regularizer zero(double alpha);
  static Regularizer l1(double alpha);
  static Regularizer nuclear(double alpha, GridShape shape);
  static Regularizer tv(double alpha, GridShape shape, int inner_budget = 20);

  double alpha() const { return alpha_; }
  PenaltyKind penalty() const { return penalty_; }
  GridShape shape() const { return shape_; }
  int tv_inner_budget() const { return tv_inner_budget_; }
  bool prox_is_exact() const { return penalty_ != PenaltyKind::tv; }

  void reset_warm_start() { tv_warm_.resize(0); }
  Regularizer fresh_clone() const;

  friend ProxResult prox_f(Regularizer& reg, const Vector& w,
                           int inner_budget_override);

 private:
  Regularizer(double alpha, PenaltyKind penalty, GridShape shape,
              int inner_budget);

  double alpha_;
  PenaltyKind penalty_;
  GridShape shape_{};       // nuclear/tv
  int tv_inner_budget_ = 20;
  Vector tv_warm_;          // stacked dual field (2 * rows * cols), empty = cold
};

/// prox_{alpha^-1 F}(w) = argmin_u F(u) + (alpha/2)||u - w||^2.
/// For tv this runs the inner accelerated dual solver, warm-started from
/// the stored dual variable; a positive override replaces the budget for
/// this call (used by the increasing-precision schedule).
ProxResult prox_f(Regularizer& reg, const Vector& w,
                  int inner_budget_override = -1);

/// prox_{tau F}(w) = argmin_u F(u) + (1/(2 tau))||u - w||^2, the shared
/// primitive behind prox_f (tau = 1/alpha) and the Tikhonov prox steps
/// (tau = step * lambda). warm_state may be null for a cold start.
ProxResult prox_penalty(PenaltyKind penalty, GridShape shape, double tau,
                        const Vector& w, int inner_budget,
                        Vector* warm_state);

/// F(w).
double penalty_value(const Regularizer& reg, const Vector& w);
double penalty_value(PenaltyKind penalty, GridShape shape, const Vector& w);

/// R(w) = F(w) + (alpha/2)||w||^2.
double regularizer_value(const Regularizer& reg, const Vector& w);

/// R*(v) = ||v||^2/(2 alpha) - env(v) with env the Moreau envelope of F
/// evaluated at the prox point. Exact for closed-form penalties; an upper
/// bound for tv (cold inner start, the warm slot is not touched).
double conjugate_value(const Regularizer& reg, const Vector& v);

/// grad R*(v) = prox_{alpha^-1 F}(v / alpha); 1/alpha-Lipschitz.
Vector dual_gradient(const Regularizer& reg, const Vector& v);

/// D(v) = R*(-X^T v) + <y_obs, v>.
double dual_objective(const Regularizer& reg, const LinearOperator& op,
                      const Vector& y_obs, const Vector& v);

/// Isotropic discrete total variation, forward differences, replicate
/// boundary (zero difference past the last row/column).
double tv_value(const Matrix& u);

}  // namespace itreg
