#include "tsci/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tsci {

namespace {

struct WorkItem {
  std::int32_t node;
  std::size_t begin, end;  // range into the row-index workspace
  int depth;
};

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double score = -std::numeric_limits<double>::infinity();
};

}  // namespace

void RegressionTree::fit(const Eigen::MatrixXd& features,
                         const Eigen::VectorXd& targets,
                         const TreeOptions& options, Rng& rng,
                         const std::vector<Eigen::Index>* rows) {
  if (features.rows() != targets.size())
    throw std::invalid_argument("tree fit: feature/target row mismatch");
  const Eigen::Index p = features.cols();
  if (p < 1) throw std::invalid_argument("tree fit: no features");
  if (options.min_node_size < 1)
    throw std::invalid_argument("tree fit: min_node_size must be positive");
  const int mtry =
      options.mtry > 0 ? std::min<int>(options.mtry, static_cast<int>(p))
                       : static_cast<int>(p);

  std::vector<Eigen::Index> work;
  if (rows != nullptr) {
    work = *rows;
  } else {
    work.resize(static_cast<std::size_t>(features.rows()));
    std::iota(work.begin(), work.end(), Eigen::Index{0});
  }
  if (work.empty()) throw std::invalid_argument("tree fit: no training rows");

  nodes_.clear();
  nodes_.push_back(TreeNode{});
  std::vector<WorkItem> stack;
  stack.push_back({0, 0, work.size(), 0});

  std::vector<int> feature_pool(static_cast<std::size_t>(p));
  std::iota(feature_pool.begin(), feature_pool.end(), 0);
  // (value, row) pairs sorted per candidate feature; the row id breaks value
  // ties so fits do not depend on std::sort internals.
  std::vector<std::pair<double, Eigen::Index>> order;

  while (!stack.empty()) {
    const WorkItem item = stack.back();
    stack.pop_back();
    const std::size_t m = item.end - item.begin;

    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t k = item.begin; k < item.end; ++k) {
      const double t = targets(work[k]);
      sum += t;
      sum_sq += t * t;
    }
    const double node_mean = sum / static_cast<double>(m);
    nodes_[static_cast<std::size_t>(item.node)].value = node_mean;

    const bool depth_capped =
        options.max_depth > 0 && item.depth >= options.max_depth;
    const bool pure = sum_sq - sum * node_mean <= 0.0;
    if (depth_capped || pure ||
        m < 2 * static_cast<std::size_t>(options.min_node_size))
      continue;

    // Sample mtry candidate features without replacement.
    for (int k = 0; k < mtry; ++k) {
      const auto j = static_cast<std::size_t>(
          rng.uniform_below(static_cast<std::uint64_t>(p - k)));
      std::swap(feature_pool[static_cast<std::size_t>(k)],
                feature_pool[static_cast<std::size_t>(k) + j]);
    }

    SplitChoice best;
    for (int k = 0; k < mtry; ++k) {
      const int feat = feature_pool[static_cast<std::size_t>(k)];
      order.clear();
      for (std::size_t idx = item.begin; idx < item.end; ++idx)
        order.emplace_back(features(work[idx], feat), work[idx]);
      std::sort(order.begin(), order.end());
      if (order.front().first == order.back().first) continue;

      double left_sum = 0.0;
      const auto min_leaf = static_cast<std::size_t>(options.min_node_size);
      for (std::size_t cut = 1; cut <= m - min_leaf; ++cut) {
        left_sum += targets(order[cut - 1].second);
        if (cut < min_leaf) continue;
        if (order[cut - 1].first == order[cut].first) continue;
        const double right_sum = sum - left_sum;
        const double score =
            left_sum * left_sum / static_cast<double>(cut) +
            right_sum * right_sum / static_cast<double>(m - cut);
        if (score > best.score) {
          best.found = true;
          best.score = score;
          best.feature = feat;
          best.threshold = 0.5 * (order[cut - 1].first + order[cut].first);
        }
      }
    }
    if (!best.found) continue;

    // Partition the work range; stable two-pass keeps row order deterministic.
    std::vector<Eigen::Index> left, right;
    for (std::size_t k = item.begin; k < item.end; ++k) {
      if (features(work[k], best.feature) <= best.threshold)
        left.push_back(work[k]);
      else
        right.push_back(work[k]);
    }
    if (left.empty() || right.empty()) continue;  // ties collapsed one side
    std::copy(left.begin(), left.end(),
              work.begin() + static_cast<std::ptrdiff_t>(item.begin));
    std::copy(right.begin(), right.end(),
              work.begin() + static_cast<std::ptrdiff_t>(item.begin) +
                  static_cast<std::ptrdiff_t>(left.size()));

    const auto left_id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(TreeNode{});
    const auto right_id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(TreeNode{});
    auto& node = nodes_[static_cast<std::size_t>(item.node)];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = left_id;
    node.right = right_id;

    stack.push_back(
        {right_id, item.begin + left.size(), item.end, item.depth + 1});
    stack.push_back({left_id, item.begin, item.begin + left.size(),
                     item.depth + 1});
  }
}

std::int32_t RegressionTree::leaf_of(
    const Eigen::Ref<const Eigen::RowVectorXd>& point) const {
  std::int32_t at = 0;
  while (nodes_[static_cast<std::size_t>(at)].feature >= 0) {
    const auto& node = nodes_[static_cast<std::size_t>(at)];
    at = point(node.feature) <= node.threshold ? node.left : node.right;
  }
  return at;
}

bool RegressionTree::same_structure(const RegressionTree& other) const {
  if (nodes_.size() != other.nodes_.size()) return false;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& a = nodes_[i];
    const auto& b = other.nodes_[i];
    if (a.feature != b.feature || a.left != b.left || a.right != b.right)
      return false;
    if (a.feature >= 0 && a.threshold != b.threshold) return false;
  }
  return true;
}

}  // namespace tsci
