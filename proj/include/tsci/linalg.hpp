#pragma once

#include <Eigen/Dense>
#include <vector>

namespace tsci {

// Relative tolerance below which a column is treated as linearly dependent.
inline constexpr double kRankTol = 1e-9;

// Orthonormal basis built column by column in the order the columns are
// offered, so nested column sets yield nested bases exactly. A column is
// dropped when its residual against the current basis falls below rel_tol
// times its own norm (zero columns are always dropped).
struct OrthoBasis {
  Eigen::MatrixXd q;                   // n x r, orthonormal columns
  std::vector<Eigen::Index> dropped;   // offered-column indices that were dropped

  Eigen::Index rank() const { return q.cols(); }
};

OrthoBasis orthonormal_basis(const Eigen::MatrixXd& columns,
                             double rel_tol = kRankTol);

// Extends `base` with the columns of `extra`. span(result) contains
// span(base) by construction; `dropped` indexes into `extra`.
OrthoBasis extend_basis(const OrthoBasis& base, const Eigen::MatrixXd& extra,
                        double rel_tol = kRankTol);

// y - Q (Q' y): residual of y against the basis, no projector materialized.
Eigen::MatrixXd project_out(const OrthoBasis& basis, const Eigen::MatrixXd& y);

}  // namespace tsci
