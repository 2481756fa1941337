#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "tsci/rng.hpp"

namespace tsci {

struct TreeOptions {
  int min_node_size = 5;  // minimum rows per leaf
  int max_depth = 0;      // 0 = unbounded
  int mtry = 0;           // features tried per split; 0 = all
};

// feature < 0 marks a leaf; value is the training-target mean in the node.
struct TreeNode {
  std::int32_t feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;
};

// CART regression tree: variance-reduction splits, mid-point thresholds,
// optional feature subsampling. Split search scans features in sampled order
// and keeps the first best split, so fits are deterministic given the Rng.
class RegressionTree {
 public:
  RegressionTree() = default;
  explicit RegressionTree(std::vector<TreeNode> nodes)
      : nodes_(std::move(nodes)) {}

  // rows may contain repeats (bootstrap resampling); nullptr = all rows.
  void fit(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets,
           const TreeOptions& options, Rng& rng,
           const std::vector<Eigen::Index>* rows = nullptr);

  // Index into nodes() of the leaf containing the point.
  std::int32_t leaf_of(const Eigen::Ref<const Eigen::RowVectorXd>& point) const;

  double predict(const Eigen::Ref<const Eigen::RowVectorXd>& point) const {
    return nodes_[static_cast<std::size_t>(leaf_of(point))].value;
  }

  const std::vector<TreeNode>& nodes() const { return nodes_; }

  bool same_structure(const RegressionTree& other) const;

 private:
  std::vector<TreeNode> nodes_;
};

}  // namespace tsci
