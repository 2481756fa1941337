#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tsci/dataset.hpp"
#include "tsci/tree.hpp"

namespace tsci {

enum class LearnerTag { forest, boosting, polynomial, user };

std::string learner_name(LearnerTag tag);

// Weight matrix over the A1 fold: fitted treatments are omega * D_A1.
// Forest rows are convex weights; polynomial/user-design matrices are
// orthogonal projections (symmetric idempotent).
struct HatMatrix {
  std::shared_ptr<const Eigen::MatrixXd> omega;
  LearnerTag tag = LearnerTag::user;
  std::map<std::string, double> hyperparams;

  Eigen::Index size() const { return omega ? omega->rows() : 0; }
};

struct ForestSpec {
  int num_trees = 200;
  int min_node_size = 5;
  int mtry = 0;  // 0 = ceil(sqrt(#features))
  int max_depth = 0;
  std::uint64_t seed = 0;
};

struct BoostingSpec {
  int rounds = 100;
  double shrinkage = 0.1;  // must lie in (0, 1]
  int max_depth = 3;
  int min_node_size = 5;
  std::uint64_t seed = 0;
};

// Trained forest; trees are grown on bootstrap resamples of the training rows.
class ForestModel {
 public:
  ForestModel(std::vector<RegressionTree> trees, int mtry)
      : trees_(std::move(trees)), mtry_(mtry) {}
  const std::vector<RegressionTree>& trees() const { return trees_; }
  int mtry() const { return mtry_; }

 private:
  std::vector<RegressionTree> trees_;
  int mtry_ = 0;
};

ForestModel fit_forest(const Eigen::MatrixXd& features,
                       const Eigen::VectorXd& targets, const ForestSpec& spec);

// Nearest-neighbor weights of the forest: row i of the result distributes
// mass 1/|leaf| over the anchor rows sharing the leaf of queries.row(i),
// averaged over trees. Trees whose leaf holds no anchor are skipped for that
// row; a row skipped by every tree raises EstimationError.
Eigen::MatrixXd forest_weights(const ForestModel& model,
                               const Eigen::MatrixXd& queries,
                               const Eigen::MatrixXd& anchors);

// Grows the forest on the A2 rows of [Z | X] regressing D, then evaluates
// neighbor weights among the A1 rows.
HatMatrix forest_hat_matrix(const Dataset& dataset, const FoldSplit& split,
                            const ForestSpec& spec);

// L2-boosting stage trees fit on the A2 rows; stage m fits the residual of
// the running fit with learning rate shrinkage.
class BoostingModel {
 public:
  BoostingModel(std::vector<RegressionTree> stages, double shrinkage)
      : stages_(std::move(stages)), shrinkage_(shrinkage) {}
  const std::vector<RegressionTree>& stages() const { return stages_; }
  double shrinkage() const { return shrinkage_; }

 private:
  std::vector<RegressionTree> stages_;
  double shrinkage_ = 0.1;
};

BoostingModel fit_boosting(const Eigen::MatrixXd& features,
                           const Eigen::VectorXd& targets,
                           const BoostingSpec& spec);

// Dense leaf-averaging smoother of one boosting stage over the anchor rows
// (reference path for tests; the hat-matrix composition never forms these).
Eigen::MatrixXd boosting_stage_smoother(const BoostingModel& model, int stage,
                                        const Eigen::MatrixXd& anchors);

// Composes omega = I - prod_{m=M..1} (I - shrinkage * B_m) over the A1 rows.
HatMatrix boosting_hat_matrix(const Dataset& dataset, const FoldSplit& split,
                              const BoostingSpec& spec);

inline constexpr int kPolyDegreeAuto = -1;

// Projection onto [1, Z, Z^2, ..., Z^degree, X] over the full sample (no
// splitting is needed for a basis expansion). degree = kPolyDegreeAuto picks
// the degree in 1..5 by 10-fold cross-validated MSE (one-SE rule). Collinear
// design columns are dropped with a warning; binary instruments reject any
// degree above one.
HatMatrix polynomial_hat_matrix(const Dataset& dataset, int degree,
                                std::uint64_t cv_seed = 0,
                                std::vector<std::string>* warnings = nullptr,
                                int* chosen_degree = nullptr);

// User-supplied weights: an n x n matrix is taken as omega directly; an
// n x p design matrix (p < n) is converted to its OLS projection.
HatMatrix user_hat_matrix(const Eigen::MatrixXd& input, const FoldSplit& split);

}  // namespace tsci
