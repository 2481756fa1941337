#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

namespace tsci {

// One violation-space candidate V_q = [W | violation columns] on the A1 rows.
// Candidate 0 is W itself.
struct ViolationCandidate {
  int q = 0;
  std::shared_ptr<const Eigen::MatrixXd> columns;
  std::string label;
  Eigen::Index w_cols = 0;  // leading columns coming from W
};

// Builds V_0..V_Q from the outcome basis and the user's violation elements
// (all on A1 rows). nested = true stacks elements cumulatively; otherwise each
// candidate is W plus a single element. Columns that are collinear with what
// a candidate already contains are dropped with a warning.
std::vector<ViolationCandidate> build_candidates(
    const Eigen::MatrixXd& w_a1,
    const std::vector<Eigen::MatrixXd>& vio_space_a1, bool nested,
    std::vector<std::string>* warnings = nullptr);

// Element q holds the elementwise q-th powers of every column of z,
// q = 1..degree.
std::vector<Eigen::MatrixXd> create_monomials(
    const Eigen::MatrixXd& z, int degree,
    std::vector<std::string>* warnings = nullptr);

// {z_col, z_col * each column of x}; only {z_col} when x has no columns.
std::vector<Eigen::MatrixXd> create_interactions(const Eigen::VectorXd& z_col,
                                                 const Eigen::MatrixXd& x);

}  // namespace tsci
