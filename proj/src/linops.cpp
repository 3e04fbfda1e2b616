#include "itreg/linops.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "itreg/rng.hpp"

namespace itreg {

namespace {

void check_length(const char* what, Index expected, Index actual) {
  if (expected != actual) {
    std::ostringstream msg;
    msg << what << ": expected vector of length " << expected << ", got "
        << actual;
    throw std::invalid_argument(msg.str());
  }
}

// Circular convolution of every row, then every column, with the given taps.
Matrix separable_circular_conv(const Matrix& img, const Vector& kernel) {
  const Index rows = img.rows();
  const Index cols = img.cols();
  const Index radius = (kernel.size() - 1) / 2;
  Matrix horiz(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      double acc = 0.0;
      for (Index k = 0; k < kernel.size(); ++k) {
        Index src = (j - radius + k) % cols;
        if (src < 0) src += cols;
        acc += kernel[k] * img(i, src);
      }
      horiz(i, j) = acc;
    }
  }
  Matrix out(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      double acc = 0.0;
      for (Index k = 0; k < kernel.size(); ++k) {
        Index src = (i - radius + k) % rows;
        if (src < 0) src += rows;
        acc += kernel[k] * horiz(src, j);
      }
      out(i, j) = acc;
    }
  }
  return out;
}

Vector blur_pass(const Vector& x, GridShape shape, const Vector& kernel) {
  Eigen::Map<const Matrix> img(x.data(), shape.cols, shape.rows);
  // Map sees column-major; transpose view gives the row-major grid.
  Matrix grid = img.transpose();
  Matrix blurred = separable_circular_conv(grid, kernel);
  Matrix t = blurred.transpose();
  return Eigen::Map<const Vector>(t.data(), shape.size());
}

}  // namespace

LinearOperator LinearOperator::dense(Matrix coefficients) {
  if (coefficients.rows() == 0 || coefficients.cols() == 0)
    throw std::invalid_argument("dense operator: empty coefficient matrix");
  LinearOperator op;
  op.kind_ = OperatorKind::dense;
  op.domain_dim_ = coefficients.cols();
  op.codomain_dim_ = coefficients.rows();
  op.payload_ = DensePayload{std::move(coefficients)};
  return op;
}

LinearOperator LinearOperator::entry_mask(
    GridShape shape, const std::vector<std::pair<Index, Index>>& omega) {
  std::vector<Index> flat;
  flat.reserve(omega.size());
  for (const auto& [i, j] : omega) {
    if (i < 0 || i >= shape.rows || j < 0 || j >= shape.cols) {
      std::ostringstream msg;
      msg << "entry_mask: index (" << i << ", " << j << ") outside "
          << shape.rows << "x" << shape.cols << " grid";
      throw std::invalid_argument(msg.str());
    }
    flat.push_back(i * shape.cols + j);
  }
  return entry_mask_flat(shape, std::move(flat));
}

LinearOperator LinearOperator::entry_mask_flat(GridShape shape,
                                               std::vector<Index> flat) {
  if (shape.size() <= 0)
    throw std::invalid_argument("entry_mask: empty grid");
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  if (!flat.empty() && (flat.front() < 0 || flat.back() >= shape.size()))
    throw std::invalid_argument("entry_mask: flat index outside grid");
  LinearOperator op;
  op.kind_ = OperatorKind::entry_mask;
  op.domain_dim_ = shape.size();
  op.codomain_dim_ = shape.size();
  op.payload_ = MaskPayload{shape, std::move(flat)};
  return op;
}

LinearOperator LinearOperator::blur(GridShape shape, Vector kernel) {
  if (shape.size() <= 0) throw std::invalid_argument("blur: empty grid");
  if (kernel.size() == 0 || kernel.size() % 2 == 0)
    throw std::invalid_argument("blur: kernel must have odd positive length");
  if ((kernel.array() < 0.0).any())
    throw std::invalid_argument("blur: kernel coefficients must be nonnegative");
  if (std::abs(kernel.sum() - 1.0) > 1e-12)
    throw std::invalid_argument("blur: kernel coefficients must sum to 1");
  LinearOperator op;
  op.kind_ = OperatorKind::blur;
  op.domain_dim_ = shape.size();
  op.codomain_dim_ = shape.size();
  op.payload_ = BlurPayload{shape, std::move(kernel)};
  return op;
}

LinearOperator LinearOperator::compose(LinearOperator outer,
                                       LinearOperator inner) {
  if (outer.domain_dim() != inner.codomain_dim()) {
    std::ostringstream msg;
    msg << "compose: outer domain " << outer.domain_dim()
        << " != inner codomain " << inner.codomain_dim();
    throw std::invalid_argument(msg.str());
  }
  LinearOperator op;
  op.kind_ = OperatorKind::composite;
  op.domain_dim_ = inner.domain_dim();
  op.codomain_dim_ = outer.codomain_dim();
  op.payload_ = CompositePayload{
      std::make_shared<const LinearOperator>(std::move(outer)),
      std::make_shared<const LinearOperator>(std::move(inner))};
  return op;
}

Vector LinearOperator::apply(const Vector& x) const {
  check_length("apply", domain_dim_, x.size());
  switch (kind_) {
    case OperatorKind::dense:
      return std::get<DensePayload>(payload_).coeffs * x;
    case OperatorKind::entry_mask: {
      const auto& m = std::get<MaskPayload>(payload_);
      Vector out = Vector::Zero(codomain_dim_);
      for (Index idx : m.flat) out[idx] = x[idx];
      return out;
    }
    case OperatorKind::blur: {
      const auto& b = std::get<BlurPayload>(payload_);
      return blur_pass(x, b.shape, b.kernel);
    }
    case OperatorKind::composite: {
      const auto& c = std::get<CompositePayload>(payload_);
      return c.outer->apply(c.inner->apply(x));
    }
  }
  throw std::logic_error("apply: unknown operator kind");
}

Vector LinearOperator::adjoint(const Vector& u) const {
  check_length("adjoint", codomain_dim_, u.size());
  switch (kind_) {
    case OperatorKind::dense:
      return std::get<DensePayload>(payload_).coeffs.transpose() * u;
    case OperatorKind::entry_mask: {
      const auto& m = std::get<MaskPayload>(payload_);
      Vector out = Vector::Zero(domain_dim_);
      for (Index idx : m.flat) out[idx] = u[idx];
      return out;
    }
    case OperatorKind::blur: {
      const auto& b = std::get<BlurPayload>(payload_);
      return blur_pass(u, b.shape, b.kernel.reverse());
    }
    case OperatorKind::composite: {
      const auto& c = std::get<CompositePayload>(payload_);
      return c.inner->adjoint(c.outer->adjoint(u));
    }
  }
  throw std::logic_error("adjoint: unknown operator kind");
}

GridShape LinearOperator::grid() const {
  if (kind_ == OperatorKind::entry_mask)
    return std::get<MaskPayload>(payload_).shape;
  if (kind_ == OperatorKind::blur) return std::get<BlurPayload>(payload_).shape;
  throw std::logic_error("grid: operator has no grid shape");
}

const Matrix& LinearOperator::coefficients() const {
  return std::get<DensePayload>(payload_).coeffs;
}

const std::vector<Index>& LinearOperator::mask_indices() const {
  return std::get<MaskPayload>(payload_).flat;
}

const Vector& LinearOperator::kernel() const {
  return std::get<BlurPayload>(payload_).kernel;
}

OpNormEstimate op_norm(const LinearOperator& op, double tol, int max_iter) {
  if (tol <= 0.0) throw std::invalid_argument("op_norm: tol must be positive");
  if (max_iter <= 0)
    throw std::invalid_argument("op_norm: max_iter must be positive");

  // All-ones start with a tiny seeded perturbation so the iteration cannot
  // begin exactly orthogonal to the top singular subspace.
  SeededRng rng(0x9e3779b97f4a7c15ull);
  Vector u = Vector::Ones(op.domain_dim());
  u += 1e-8 * rng.normal_vector(op.domain_dim());
  u.normalize();

  OpNormEstimate est;
  double prev = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector z = op.adjoint(op.apply(u));  // Gram action
    const double rayleigh = u.dot(z);    // ||u|| = 1
    const double sigma = std::sqrt(std::max(rayleigh, 0.0));
    est.history.push_back(sigma);
    est.iterations = it + 1;
    est.value = sigma;
    if (sigma == 0.0) {
      est.zero_operator = true;
      est.converged = true;
      return est;
    }
    if (it > 0 && std::abs(sigma - prev) <= tol * sigma) {
      est.converged = true;
      return est;
    }
    prev = sigma;
    u = z / z.norm();
  }
  return est;  // converged stays false
}

Vector gaussian_blur_kernel(double sigma, int radius) {
  if (sigma <= 0.0 || radius < 0)
    throw std::invalid_argument("gaussian_blur_kernel: bad parameters");
  Vector k(2 * radius + 1);
  for (int i = -radius; i <= radius; ++i)
    k[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
  k /= k.sum();
  return k;
}

LinearOperator load_dense_operator(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty())
    throw std::runtime_error("matrix file has no rows: " + path);
  const std::size_t cols = rows.front().size();
  Matrix A(static_cast<Index>(rows.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols)
      throw std::runtime_error("matrix file has ragged rows: " + path);
    for (std::size_t j = 0; j < cols; ++j)
      A(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  }
  return LinearOperator::dense(std::move(A));
}

LinearOperator load_mask_operator(const std::string& path, GridShape shape) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mask file: " + path);
  std::vector<std::pair<Index, Index>> omega;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    Index i, j;
    if (ls >> i >> j) omega.emplace_back(i, j);
  }
  return LinearOperator::entry_mask(shape, omega);
}

void save_dense_operator(const LinearOperator& op, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write matrix file: " + path);
  const Matrix& A = op.coefficients();
  out.precision(17);
  for (Index i = 0; i < A.rows(); ++i) {
    for (Index j = 0; j < A.cols(); ++j) {
      if (j) out << ' ';
      out << A(i, j);
    }
    out << '\n';
  }
}

void save_mask_operator(const LinearOperator& op, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mask file: " + path);
  const GridShape shape = op.grid();
  for (Index idx : op.mask_indices())
    out << idx / shape.cols << ' ' << idx % shape.cols << '\n';
}

}  // namespace itreg
