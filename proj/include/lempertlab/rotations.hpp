#pragma once

#include "lempertlab/domain_core.hpp"

namespace lempertlab {

struct Frame {
  cplx eta = 1.0;
  Eigen::MatrixXd A;

  static Frame identity(int n);
  int dim() const { return static_cast<int>(A.rows()); }
};

Point apply_frame(const Frame& f, const Point& z);

// eta*A*z = (a(z), i b(z), 0, ..., 0). For n = 2 an SO(2) rotation cannot always
// reach +i b; the second coordinate may then come out as -i b.
Frame normal_frame(const Point& z);

struct PartialFrame {
  Frame frame;  // eta == 1, A = diag(Id_k, A')
  cplx eta = 1.0;  // tail becomes (eta a(z'), eta b(z') i, 0, ...)
};

PartialFrame partial_normal_frame(const Point& z, int k);

}  // namespace lempertlab
