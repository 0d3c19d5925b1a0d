#include "lempertlab/rotations.hpp"

#include <cmath>
#include <vector>

namespace lempertlab {

Frame Frame::identity(int n) { return {1.0, Eigen::MatrixXd::Identity(n, n)}; }

Point apply_frame(const Frame& f, const Point& z) {
  if (f.A.cols() != z.size()) throw DimensionError("apply_frame: dimension mismatch");
  return f.eta * (f.A.cast<cplx>() * z);
}

namespace {

// Gram-Schmidt completion of the given orthonormal rows using e_1..e_n as seeds.
Eigen::MatrixXd complete_rows(std::vector<Eigen::VectorXd> rows, int n) {
  for (int s = 0; s < n && static_cast<int>(rows.size()) < n; ++s) {
    Eigen::VectorXd e = Eigen::VectorXd::Unit(n, s);
    for (int pass = 0; pass < 2; ++pass)
      for (auto& r : rows) e -= r.dot(e) * r;
    double nr = e.norm();
    if (nr < 1e-8) continue;
    rows.push_back(e / nr);
  }
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i) A.row(i) = rows[i].transpose();
  return A;
}

}  // namespace

Frame normal_frame(const Point& z) {
  const int n = static_cast<int>(z.size());
  if (n < 2) throw DimensionError("normal_frame: need at least 2 coordinates");
  if (z.norm() == 0) return Frame::identity(n);

  cplx q = symmetric_square(z);
  cplx eta = 1.0;
  if (std::abs(q) >= 1e-14) {
    eta = std::polar(1.0, -std::arg(q) / 2);
    if (std::arg(eta) < 0) eta = -eta;
  }
  Point y = eta * z;
  Eigen::VectorXd u = y.real(), v = y.imag();

  std::vector<Eigen::VectorXd> rows;
  rows.push_back(u / u.norm());
  Eigen::VectorXd vp = v - rows[0].dot(v) * rows[0];
  bool has_v = vp.norm() > 1e-13 * u.norm();
  if (has_v) rows.push_back(vp / vp.norm());

  Eigen::MatrixXd A = complete_rows(rows, n);
  if (A.determinant() < 0) A.row(n - 1) *= -1;
  return {eta, A};
}

PartialFrame partial_normal_frame(const Point& z, int k) {
  const int n = static_cast<int>(z.size());
  if (n < 3 || k < 1 || k > n - 2) throw DimensionError("partial_normal_frame: k out of range");
  Frame t = normal_frame(z.tail(n - k));
  PartialFrame pf;
  pf.frame.eta = 1.0;
  pf.frame.A = Eigen::MatrixXd::Identity(n, n);
  pf.frame.A.bottomRightCorner(n - k, n - k) = t.A;
  pf.eta = std::conj(t.eta);
  return pf;
}

}  // namespace lempertlab
