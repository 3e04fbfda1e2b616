#pragma once

#include "itreg/linops.hpp"

namespace itreg {

/// Row-major flattening <-> grid views used by the matrix/image penalties.
inline Matrix to_grid(const Vector& x, GridShape s) {
  Matrix m(s.rows, s.cols);
  for (Index i = 0; i < s.rows; ++i)
    for (Index j = 0; j < s.cols; ++j) m(i, j) = x[i * s.cols + j];
  return m;
}

inline Vector from_grid(const Matrix& m) {
  Vector x(m.rows() * m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) x[i * m.cols() + j] = m(i, j);
  return x;
}

}  // namespace itreg
