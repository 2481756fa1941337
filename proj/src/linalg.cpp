#include "tsci/linalg.hpp"

namespace tsci {

OrthoBasis orthonormal_basis(const Eigen::MatrixXd& columns, double rel_tol) {
  OrthoBasis empty;
  empty.q.resize(columns.rows(), 0);
  return extend_basis(empty, columns, rel_tol);
}

OrthoBasis extend_basis(const OrthoBasis& base, const Eigen::MatrixXd& extra,
                        double rel_tol) {
  const Eigen::Index n = base.q.rows() > 0 ? base.q.rows() : extra.rows();
  OrthoBasis out;
  out.q.resize(n, base.q.cols() + extra.cols());
  out.q.leftCols(base.q.cols()) = base.q;
  Eigen::Index r = base.q.cols();

  for (Eigen::Index j = 0; j < extra.cols(); ++j) {
    Eigen::VectorXd c = extra.col(j);
    const double col_norm = c.norm();
    if (r > 0) {
      // Modified Gram-Schmidt with one reorthogonalization pass.
      auto q = out.q.leftCols(r);
      c.noalias() -= q * (q.transpose() * c);
      c.noalias() -= q * (q.transpose() * c);
    }
    const double res_norm = c.norm();
    if (res_norm <= rel_tol * col_norm || res_norm == 0.0) {
      out.dropped.push_back(j);
      continue;
    }
    out.q.col(r) = c / res_norm;
    ++r;
  }
  out.q.conservativeResize(n, r);
  return out;
}

Eigen::MatrixXd project_out(const OrthoBasis& basis, const Eigen::MatrixXd& y) {
  if (basis.rank() == 0) return y;
  Eigen::MatrixXd out = y;
  out.noalias() -= basis.q * (basis.q.transpose() * y);
  return out;
}

}  // namespace tsci
