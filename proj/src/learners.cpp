#include "tsci/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>

#include "tsci/errors.hpp"
#include "tsci/linalg.hpp"
#include "tsci/rng.hpp"

namespace tsci {

namespace {

void check_forest_spec(const ForestSpec& spec, Eigen::Index p) {
  if (spec.num_trees < 1)
    throw ValidationError("num_trees must be positive");
  if (spec.min_node_size < 1)
    throw ValidationError("min_node_size must be positive");
  if (spec.max_depth < 0)
    throw ValidationError("max_depth must be nonnegative");
  if (spec.mtry > p)
    throw ValidationError("mtry exceeds the number of treatment-model features");
}

int resolve_mtry(int mtry, Eigen::Index p) {
  if (mtry > 0) return mtry;
  return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(p))));
}

// Groups anchor rows by the tree leaf containing them.
std::unordered_map<std::int32_t, std::vector<Eigen::Index>> anchor_buckets(
    const RegressionTree& tree, const Eigen::MatrixXd& anchors) {
  std::unordered_map<std::int32_t, std::vector<Eigen::Index>> buckets;
  for (Eigen::Index i = 0; i < anchors.rows(); ++i)
    buckets[tree.leaf_of(anchors.row(i))].push_back(i);
  return buckets;
}

bool column_is_binary(const Eigen::VectorXd& col) {
  std::set<double> values;
  for (Eigen::Index i = 0; i < col.size(); ++i) {
    values.insert(col(i));
    if (values.size() > 2) return false;
  }
  return true;
}

// [1, Z, Z^2, ..., Z^degree, X] on the given rows.
Eigen::MatrixXd poly_design(const Eigen::MatrixXd& z, const Eigen::MatrixXd& x,
                            int degree) {
  const Eigen::Index n = z.rows();
  const Eigen::Index cols = 1 + degree * z.cols() + x.cols();
  Eigen::MatrixXd h(n, cols);
  h.col(0).setOnes();
  Eigen::Index at = 1;
  for (int d = 1; d <= degree; ++d)
    for (Eigen::Index j = 0; j < z.cols(); ++j)
      h.col(at++) = z.col(j).array().pow(d);
  if (x.cols() > 0) h.rightCols(x.cols()) = x;
  return h;
}

}  // namespace

std::string learner_name(LearnerTag tag) {
  switch (tag) {
    case LearnerTag::forest:
      return "Random Forest";
    case LearnerTag::boosting:
      return "Boosting";
    case LearnerTag::polynomial:
      return "Polynomial Basis Expansion";
    case LearnerTag::user:
      return "Specified by User";
  }
  return "Unknown";
}

ForestModel fit_forest(const Eigen::MatrixXd& features,
                       const Eigen::VectorXd& targets, const ForestSpec& spec) {
  check_forest_spec(spec, features.cols());
  TreeOptions options;
  options.min_node_size = spec.min_node_size;
  options.max_depth = spec.max_depth;
  options.mtry = resolve_mtry(spec.mtry, features.cols());

  const auto n = features.rows();
  std::vector<RegressionTree> trees(static_cast<std::size_t>(spec.num_trees));
  for (int t = 0; t < spec.num_trees; ++t) {
    Rng rng(derive_seed(spec.seed, seed_stream::kTree,
                        static_cast<std::uint64_t>(t)));
    std::vector<Eigen::Index> boot(static_cast<std::size_t>(n));
    for (auto& row : boot)
      row = static_cast<Eigen::Index>(
          rng.uniform_below(static_cast<std::uint64_t>(n)));
    trees[static_cast<std::size_t>(t)].fit(features, targets, options, rng,
                                           &boot);
  }
  return ForestModel(std::move(trees), options.mtry);
}

Eigen::MatrixXd forest_weights(const ForestModel& model,
                               const Eigen::MatrixXd& queries,
                               const Eigen::MatrixXd& anchors) {
  const Eigen::Index nq = queries.rows();
  const Eigen::Index na = anchors.rows();
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(nq, na);
  Eigen::VectorXi counted = Eigen::VectorXi::Zero(nq);

  for (const auto& tree : model.trees()) {
    const auto buckets = anchor_buckets(tree, anchors);
    for (Eigen::Index i = 0; i < nq; ++i) {
      const auto leaf = tree.leaf_of(queries.row(i));
      const auto hit = buckets.find(leaf);
      if (hit == buckets.end()) continue;  // no anchors in this leaf: skip tree
      const double w = 1.0 / static_cast<double>(hit->second.size());
      for (const auto j : hit->second) omega(i, j) += w;
      counted(i) += 1;
    }
  }
  Eigen::VectorXd scale(nq);
  for (Eigen::Index i = 0; i < nq; ++i) {
    if (counted(i) == 0)
      throw EstimationError("empty neighborhood: no tree places row " +
                            std::to_string(i + 1) +
                            " in a leaf with anchor points");
    scale(i) = 1.0 / static_cast<double>(counted(i));
  }
  omega.array().colwise() *= scale.array();
  return omega;
}

HatMatrix forest_hat_matrix(const Dataset& dataset, const FoldSplit& split,
                            const ForestSpec& spec) {
  if (!split.split_performed())
    throw ValidationError("forest learner requires a two-fold split");
  const Eigen::MatrixXd features = dataset.treatment_features();
  const Eigen::MatrixXd f_a2 = subset_rows(features, split.a2);
  const Eigen::VectorXd d_a2 = subset_rows(dataset.d(), split.a2);
  const ForestModel model = fit_forest(f_a2, d_a2, spec);

  const Eigen::MatrixXd f_a1 = subset_rows(features, split.a1);
  HatMatrix hat;
  hat.omega = std::make_shared<const Eigen::MatrixXd>(
      forest_weights(model, f_a1, f_a1));
  hat.tag = LearnerTag::forest;
  hat.hyperparams = {{"num_trees", static_cast<double>(spec.num_trees)},
                     {"min_node_size", static_cast<double>(spec.min_node_size)},
                     {"mtry", static_cast<double>(model.mtry())},
                     {"max_depth", static_cast<double>(spec.max_depth)}};
  return hat;
}

BoostingModel fit_boosting(const Eigen::MatrixXd& features,
                           const Eigen::VectorXd& targets,
                           const BoostingSpec& spec) {
  if (spec.rounds < 1) throw ValidationError("boosting rounds must be positive");
  if (!(spec.shrinkage > 0.0 && spec.shrinkage <= 1.0))
    throw ValidationError("boosting shrinkage must lie in (0, 1]");
  if (spec.min_node_size < 1)
    throw ValidationError("min_node_size must be positive");

  TreeOptions options;
  options.min_node_size = spec.min_node_size;
  options.max_depth = spec.max_depth;
  options.mtry = 0;  // boosting stages use every feature

  std::vector<RegressionTree> stages(static_cast<std::size_t>(spec.rounds));
  Eigen::VectorXd residual = targets;
  for (int m = 0; m < spec.rounds; ++m) {
    Rng rng(derive_seed(spec.seed, seed_stream::kTree,
                        static_cast<std::uint64_t>(m)));
    auto& tree = stages[static_cast<std::size_t>(m)];
    tree.fit(features, residual, options, rng);
    for (Eigen::Index i = 0; i < residual.size(); ++i)
      residual(i) -= spec.shrinkage * tree.predict(features.row(i));
  }
  return BoostingModel(std::move(stages), spec.shrinkage);
}

Eigen::MatrixXd boosting_stage_smoother(const BoostingModel& model, int stage,
                                        const Eigen::MatrixXd& anchors) {
  const auto& tree = model.stages().at(static_cast<std::size_t>(stage));
  const auto buckets = anchor_buckets(tree, anchors);
  const Eigen::Index n = anchors.rows();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [leaf, members] : buckets) {
    const double w = 1.0 / static_cast<double>(members.size());
    for (const auto i : members)
      for (const auto j : members) b(i, j) = w;
  }
  return b;
}

HatMatrix boosting_hat_matrix(const Dataset& dataset, const FoldSplit& split,
                              const BoostingSpec& spec) {
  if (!split.split_performed())
    throw ValidationError("boosting learner requires a two-fold split");
  const Eigen::MatrixXd features = dataset.treatment_features();
  const Eigen::MatrixXd f_a2 = subset_rows(features, split.a2);
  const Eigen::VectorXd d_a2 = subset_rows(dataset.d(), split.a2);
  const BoostingModel model = fit_boosting(f_a2, d_a2, spec);

  const Eigen::MatrixXd f_a1 = subset_rows(features, split.a1);
  const Eigen::Index n1 = f_a1.rows();

  // remainder = prod_{m=M..1} (I - shrinkage * B_m); each stage applies its
  // leaf-averaging smoother by group means instead of forming B_m.
  Eigen::MatrixXd remainder = Eigen::MatrixXd::Identity(n1, n1);
  Eigen::RowVectorXd leaf_mean(n1);
  for (const auto& tree : model.stages()) {
    const auto buckets = anchor_buckets(tree, f_a1);
    Eigen::MatrixXd smoothed(n1, n1);
    for (const auto& [leaf, members] : buckets) {
      leaf_mean.setZero();
      for (const auto i : members) leaf_mean += remainder.row(i);
      leaf_mean /= static_cast<double>(members.size());
      for (const auto i : members) smoothed.row(i) = leaf_mean;
    }
    remainder -= spec.shrinkage * smoothed;
  }

  HatMatrix hat;
  hat.omega = std::make_shared<const Eigen::MatrixXd>(
      Eigen::MatrixXd::Identity(n1, n1) - remainder);
  hat.tag = LearnerTag::boosting;
  hat.hyperparams = {{"rounds", static_cast<double>(spec.rounds)},
                     {"shrinkage", spec.shrinkage},
                     {"max_depth", static_cast<double>(spec.max_depth)},
                     {"min_node_size", static_cast<double>(spec.min_node_size)}};
  return hat;
}

HatMatrix polynomial_hat_matrix(const Dataset& dataset, int degree,
                                std::uint64_t cv_seed,
                                std::vector<std::string>* warnings,
                                int* chosen_degree) {
  if (degree != kPolyDegreeAuto && degree < 1)
    throw ValidationError("polynomial degree must be at least 1");

  bool has_binary = false;
  for (Eigen::Index j = 0; j < dataset.p_z(); ++j)
    has_binary = has_binary || column_is_binary(dataset.z().col(j));

  int max_degree = 5;
  if (has_binary) {
    if (degree > 1)
      throw ValidationError(
          "polynomial expansion cannot be employed for binary IVs");
    if (degree == kPolyDegreeAuto) {
      max_degree = 1;
      if (warnings)
        warnings->push_back(
            "binary instrument detected; polynomial degree fixed at 1");
    }
  }

  if (degree == kPolyDegreeAuto) {
    // 10-fold CV over degrees 1..5; smallest degree within one standard
    // error of the best mean MSE.
    const Eigen::Index n = dataset.n();
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    Rng rng(derive_seed(cv_seed, seed_stream::kCrossVal, 0));
    rng.shuffle(perm.begin(), perm.end());
    const int folds = 10;

    std::vector<double> cv_mean(static_cast<std::size_t>(max_degree)),
        cv_se(static_cast<std::size_t>(max_degree));
    for (int d = 1; d <= max_degree; ++d) {
      std::vector<double> fold_mse;
      for (int f = 0; f < folds; ++f) {
        const auto lo = static_cast<std::size_t>(n) * f / folds;
        const auto hi = static_cast<std::size_t>(n) * (f + 1) / folds;
        std::vector<Eigen::Index> test(perm.begin() + lo, perm.begin() + hi);
        std::vector<Eigen::Index> train;
        train.reserve(perm.size() - test.size());
        train.insert(train.end(), perm.begin(), perm.begin() + lo);
        train.insert(train.end(), perm.begin() + hi, perm.end());

        const Eigen::MatrixXd h_train = poly_design(
            subset_rows(dataset.z(), train), subset_rows(dataset.x(), train), d);
        const Eigen::VectorXd d_train = subset_rows(dataset.d(), train);
        const Eigen::VectorXd coef =
            h_train.colPivHouseholderQr().solve(d_train);
        const Eigen::MatrixXd h_test = poly_design(
            subset_rows(dataset.z(), test), subset_rows(dataset.x(), test), d);
        const Eigen::VectorXd d_test = subset_rows(dataset.d(), test);
        fold_mse.push_back(
            (h_test * coef - d_test).squaredNorm() /
            static_cast<double>(d_test.size()));
      }
      double m = 0.0;
      for (double v : fold_mse) m += v;
      m /= static_cast<double>(fold_mse.size());
      double ss = 0.0;
      for (double v : fold_mse) ss += (v - m) * (v - m);
      cv_mean[static_cast<std::size_t>(d - 1)] = m;
      cv_se[static_cast<std::size_t>(d - 1)] =
          std::sqrt(ss / static_cast<double>(fold_mse.size() - 1)) /
          std::sqrt(static_cast<double>(fold_mse.size()));
    }
    const auto best = static_cast<std::size_t>(std::distance(
        cv_mean.begin(), std::min_element(cv_mean.begin(), cv_mean.end())));
    const double cutoff = cv_mean[best] + cv_se[best];
    degree = static_cast<int>(best) + 1;
    for (std::size_t d = 0; d < cv_mean.size(); ++d) {
      if (cv_mean[d] <= cutoff) {
        degree = static_cast<int>(d) + 1;
        break;
      }
    }
  }
  if (chosen_degree) *chosen_degree = degree;

  const Eigen::MatrixXd design = poly_design(dataset.z(), dataset.x(), degree);
  const OrthoBasis basis = orthonormal_basis(design);
  if (!basis.dropped.empty() && warnings)
    warnings->push_back("polynomial design: dropped " +
                        std::to_string(basis.dropped.size()) +
                        " collinear column(s)");
  if (basis.rank() == 0)
    throw ValidationError("polynomial design has rank zero");

  HatMatrix hat;
  auto omega = std::make_shared<Eigen::MatrixXd>(dataset.n(), dataset.n());
  omega->noalias() = basis.q * basis.q.transpose();
  hat.omega = std::move(omega);
  hat.tag = LearnerTag::polynomial;
  hat.hyperparams = {{"degree", static_cast<double>(degree)}};
  return hat;
}

HatMatrix user_hat_matrix(const Eigen::MatrixXd& input,
                          const FoldSplit& split) {
  const Eigen::Index n1 = split.n1();
  if (input.rows() != n1)
    throw ValidationError("user weight input has " +
                          std::to_string(input.rows()) + " rows, expected " +
                          std::to_string(n1));
  if (!input.allFinite())
    throw ValidationError("user weight input contains non-finite values");

  HatMatrix hat;
  hat.tag = LearnerTag::user;
  if (input.cols() == n1) {
    hat.omega = std::make_shared<const Eigen::MatrixXd>(input);
    hat.hyperparams = {{"square_input", 1.0}};
    return hat;
  }
  if (input.cols() >= n1)
    throw ValidationError(
        "user weight input must be square or a design matrix with fewer "
        "columns than rows");
  const OrthoBasis basis = orthonormal_basis(input);
  if (basis.rank() == 0)
    throw ValidationError("user design matrix has rank zero");
  auto omega = std::make_shared<Eigen::MatrixXd>(n1, n1);
  omega->noalias() = basis.q * basis.q.transpose();
  hat.omega = std::move(omega);
  hat.hyperparams = {{"design_cols", static_cast<double>(input.cols())}};
  return hat;
}

}  // namespace tsci
