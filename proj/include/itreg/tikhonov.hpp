#pragma once

#include <functional>
#include <string>
#include <vector>

#include "itreg/linops.hpp"
#include "itreg/regularizers.hpp"

namespace itreg {

struct PathConfig {
  double lambda0 = 0.0;  // <= 0: data-driven default (see default_lambda0)
  double grid_factor = 0.5;
  int num_lambdas = 20;
  double inner_tol_scale = 1e-3;  // inner tolerance = inner_tol_scale * delta
  double delta = 1.0;
  int inner_max_iter = 5000;
};

struct PathPoint {
  double lambda = 0.0;
  Vector solution;
  int inner_iterations = 0;
  double validation_score = std::numeric_limits<double>::quiet_NaN();
};

struct PathResult {
  std::vector<PathPoint> points;
  long total_inner_iterations = 0;
  int selected_index = -1;
  bool lambda0_warning = false;  // first solution not ~argmin R
  bool refit_performed = false;
  bool refit_empty_support = false;
  Vector refit_solution;  // empty unless refit_performed
};

struct FistaResult {
  Vector solution;
  int iterations = 0;
};

/// Monotone FISTA on ||y - Xw||^2 + lambda (F(w) + (alpha/2)||w||^2):
/// the ridge part stays in the smooth term, lambda F goes in the prox,
/// step 1/(2||X||^2 + lambda alpha). Stops when the distance between
/// successive primal iterates drops below tol. x_norm <= 0 means
/// "estimate internally".
FistaResult fista_solve(const LinearOperator& op, const Vector& y_obs,
                        Regularizer& reg, double lambda, const Vector& w_init,
                        double tol, int max_iter, double x_norm = 0.0);

/// Geometric grid lambda_i = lambda0 * grid_factor^i, each solve
/// warm-started from the previous solution.
PathResult solve_path(const LinearOperator& op, const Vector& y_obs,
                      Regularizer& reg, const PathConfig& cfg);

/// Scores every grid point (after the optional least-squares refit on the
/// nonzero support), selects the argmin (ties -> larger lambda), and
/// stores the selected refit solution. Refit requires a dense operator.
PathResult& select_and_refit(
    PathResult& path,
    const std::function<double(const Vector&)>& validation_eval, bool refit,
    const LinearOperator& op, const Vector& y_obs);

/// 2 ||X^T y||_inf for l1 (the pure-l1 part of the path is identically 0
/// above it), spectral-norm analogue for nuclear.
double default_lambda0(const LinearOperator& op, const Vector& y_obs,
                       const Regularizer& reg);

/// ||y - Xw||^2 + lambda R(w).
double penalized_objective(const LinearOperator& op, const Vector& y_obs,
                           const Regularizer& reg, double lambda,
                           const Vector& w);

/// Least squares restricted to {j : |w_j| > 1e-10} via normal equations
/// with ridge jitter 1e-12; empty support yields the zero vector and sets
/// the flag.
Vector refit_least_squares(const LinearOperator& op, const Vector& y_obs,
                           const Vector& w, bool& empty_support);

/// Columns: lambda, inner_iters, validation_score, selected.
void export_path_csv(const PathResult& path, const std::string& out_path);

}  // namespace itreg
