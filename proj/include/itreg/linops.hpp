#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace itreg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

struct GridShape {
  Index rows = 0;
  Index cols = 0;
  Index size() const { return rows * cols; }
};

enum class OperatorKind { dense, entry_mask, blur, composite };

/// Immutable forward/adjoint map between finite-dimensional real spaces.
/// Grid-structured kinds (entry_mask, blur) act on row-major flattened
/// vectors. composite is the chain outer∘inner; it is built internally by
/// the experiment harness (e.g. mask∘blur for held-out-pixel validation)
/// and is not loadable from files.
class LinearOperator {
 public:
  static LinearOperator dense(Matrix coefficients);
  /// indices are (row, col) pairs into the grid; duplicates are collapsed.
  static LinearOperator entry_mask(GridShape shape,
                                   const std::vector<std::pair<Index, Index>>& omega);
  static LinearOperator entry_mask_flat(GridShape shape, std::vector<Index> flat);
  /// 1-D separable kernel, odd length, nonnegative, summing to 1;
  /// convolution is circular so the adjoint is convolution with the
  /// reversed kernel.
  static LinearOperator blur(GridShape shape, Vector kernel);
  static LinearOperator compose(LinearOperator outer, LinearOperator inner);

  Vector apply(const Vector& x) const;
  Vector adjoint(const Vector& u) const;

  Index domain_dim() const { return domain_dim_; }
  Index codomain_dim() const { return codomain_dim_; }
  OperatorKind kind() const { return kind_; }
  GridShape grid() const;

  const Matrix& coefficients() const;            // dense only
  const std::vector<Index>& mask_indices() const;  // entry_mask only
  const Vector& kernel() const;                    // blur only

 private:
  struct DensePayload {
    Matrix coeffs;
  };
  struct MaskPayload {
    GridShape shape;
    std::vector<Index> flat;  // sorted, unique
  };
  struct BlurPayload {
    GridShape shape;
    Vector kernel;
  };
  struct CompositePayload {
    std::shared_ptr<const LinearOperator> outer;
    std::shared_ptr<const LinearOperator> inner;
  };

  LinearOperator() = default;

  OperatorKind kind_ = OperatorKind::dense;
  Index domain_dim_ = 0;
  Index codomain_dim_ = 0;
  std::variant<DensePayload, MaskPayload, BlurPayload, CompositePayload> payload_;
};

struct OpNormEstimate {
  double value = 0.0;
  bool converged = false;
  bool zero_operator = false;
  int iterations = 0;
  std::vector<double> history;  // per-iteration estimates, nondecreasing
};

/// Power-method estimate of the largest singular value. The Rayleigh
/// quotient converges from below, so the result never exceeds the true
/// norm (up to rounding).
OpNormEstimate op_norm(const LinearOperator& op, double tol = 1e-9,
                       int max_iter = 10000);

/// Truncated, renormalized Gaussian kernel (sum exactly 1).
Vector gaussian_blur_kernel(double sigma = 1.0, int radius = 3);

/// Plain-text loaders: one whitespace-separated row per line for dense
/// matrices, one "i j" pair per line for masks.
LinearOperator load_dense_operator(const std::string& path);
LinearOperator load_mask_operator(const std::string& path, GridShape shape);

void save_dense_operator(const LinearOperator& op, const std::string& path);
void save_mask_operator(const LinearOperator& op, const std::string& path);

}  // namespace itreg
