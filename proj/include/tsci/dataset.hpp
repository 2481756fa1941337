#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace tsci {

// Raw column roles handed to validate_dataset. x and w may have zero columns;
// when has_w is false, w defaults to x plus an intercept.
struct RawColumns {
  Eigen::VectorXd y;
  Eigen::VectorXd d;
  Eigen::MatrixXd z;
  Eigen::MatrixXd x;
  Eigen::MatrixXd w;
  bool has_w = false;
  std::string y_name = "y";
  std::string d_name = "d";
  std::vector<std::string> z_names;
  std::vector<std::string> x_names;
  std::vector<std::string> w_names;
};

// Validated, immutable data container. w is guaranteed to carry an all-ones
// intercept column.
class Dataset {
 public:
  Eigen::Index n() const { return y_.size(); }
  Eigen::Index p_z() const { return z_.cols(); }
  Eigen::Index p_x() const { return x_.cols(); }
  Eigen::Index p_w() const { return w_.cols(); }

  const Eigen::VectorXd& y() const { return y_; }
  const Eigen::VectorXd& d() const { return d_; }
  const Eigen::MatrixXd& z() const { return z_; }
  const Eigen::MatrixXd& x() const { return x_; }
  const Eigen::MatrixXd& w() const { return w_; }

  // Treatment-model features [Z | X].
  Eigen::MatrixXd treatment_features() const;

  const std::vector<std::string>& z_names() const { return z_names_; }
  const std::vector<std::string>& x_names() const { return x_names_; }
  const std::vector<std::string>& w_names() const { return w_names_; }

  friend Dataset validate_dataset(RawColumns raw);

 private:
  Dataset() = default;
  Eigen::VectorXd y_, d_;
  Eigen::MatrixXd z_, x_, w_;
  std::vector<std::string> z_names_, x_names_, w_names_;
};

// Checks dimensions, finiteness, duplicate names, and treatment variance;
// ensures the intercept column in w. Throws ValidationError with the
// offending row/column in the message.
Dataset validate_dataset(RawColumns raw);

// Disjoint index partition: a1 hosts the outcome-model algebra, a2 trains the
// treatment learner. Indices are kept sorted.
struct FoldSplit {
  std::vector<Eigen::Index> a1;
  std::vector<Eigen::Index> a2;
  std::uint64_t seed = 0;

  // Degenerate split for learners that need no sample splitting: a1 = all rows.
  static FoldSplit full(Eigen::Index n);

  bool split_performed() const { return !a2.empty(); }
  Eigen::Index n1() const { return static_cast<Eigen::Index>(a1.size()); }
  Eigen::Index n2() const { return static_cast<Eigen::Index>(a2.size()); }
};

// Uniformly random partition with |a1| = round(split_prop * n), deterministic
// given the seed. p_w enters the minimum-size check for the a1 fold.
FoldSplit make_split(Eigen::Index n, double split_prop, std::uint64_t seed,
                     Eigen::Index p_w = 1);

// Row subsetting helpers used throughout the fold arithmetic.
Eigen::VectorXd subset_rows(const Eigen::VectorXd& v,
                            const std::vector<Eigen::Index>& idx);
Eigen::MatrixXd subset_rows(const Eigen::MatrixXd& m,
                            const std::vector<Eigen::Index>& idx);

}  // namespace tsci
