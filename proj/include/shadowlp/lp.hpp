#pragma once

#include "shadowlp/linalg.hpp"

namespace shadowlp {

/// max c^T x  subject to  A x <= b.
struct LpInstance {
  Matrix A;
  Vector b;
  Vector c;

  int rows() const { return static_cast<int>(A.rows()); }
  int dim() const { return static_cast<int>(A.cols()); }
};

}  // namespace shadowlp
