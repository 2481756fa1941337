#include "tsci/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "tsci/errors.hpp"
#include "tsci/rng.hpp"

namespace tsci {

namespace {

constexpr Eigen::Index kMinRows = 20;
constexpr Eigen::Index kMinA2 = 10;

void check_finite(const Eigen::MatrixXd& m, const std::string& role,
                  const std::vector<std::string>& names) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j))) {
        std::ostringstream msg;
        msg << "non-finite value in column '"
            << (j < static_cast<Eigen::Index>(names.size())
                    ? names[j]
                    : role + std::to_string(j + 1))
            << "' at row " << (i + 1);
        throw ValidationError(msg.str());
      }
    }
  }
}

std::vector<std::string> default_names(const std::string& prefix,
                                       Eigen::Index count,
                                       std::vector<std::string> given) {
  if (static_cast<Eigen::Index>(given.size()) == count) return given;
  std::vector<std::string> names;
  names.reserve(count);
  for (Eigen::Index j = 0; j < count; ++j)
    names.push_back(prefix + std::to_string(j + 1));
  return names;
}

bool is_all_ones(const Eigen::VectorXd& col) {
  return (col.array() == 1.0).all();
}

}  // namespace

Eigen::MatrixXd Dataset::treatment_features() const {
  Eigen::MatrixXd f(n(), p_z() + p_x());
  f.leftCols(p_z()) = z_;
  if (p_x() > 0) f.rightCols(p_x()) = x_;
  return f;
}

Dataset validate_dataset(RawColumns raw) {
  const Eigen::Index n = raw.y.size();
  if (n < kMinRows)
    throw ValidationError("dataset has " + std::to_string(n) +
                          " rows; at least " + std::to_string(kMinRows) +
                          " are required");
  if (raw.d.size() != n)
    throw ValidationError("treatment column length " +
                          std::to_string(raw.d.size()) +
                          " does not match outcome length " + std::to_string(n));
  if (raw.z.rows() != n)
    throw ValidationError("instrument matrix has " +
                          std::to_string(raw.z.rows()) + " rows, expected " +
                          std::to_string(n));
  if (raw.z.cols() < 1)
    throw ValidationError("at least one instrument column is required");
  if (raw.x.size() > 0 && raw.x.rows() != n)
    throw ValidationError("covariate matrix has " +
                          std::to_string(raw.x.rows()) + " rows, expected " +
                          std::to_string(n));
  if (raw.has_w && raw.w.size() > 0 && raw.w.rows() != n)
    throw ValidationError("outcome-basis matrix has " +
                          std::to_string(raw.w.rows()) + " rows, expected " +
                          std::to_string(n));

  Dataset ds;
  ds.z_names_ = default_names("z", raw.z.cols(), std::move(raw.z_names));
  ds.x_names_ = default_names("x", raw.x.cols(), std::move(raw.x_names));

  check_finite(raw.y, raw.y_name, {raw.y_name});
  check_finite(raw.d, raw.d_name, {raw.d_name});
  check_finite(raw.z, "z", ds.z_names_);
  if (raw.x.size() > 0) check_finite(raw.x, "x", ds.x_names_);

  // Duplicate names across the y/d/z/x roles make reports ambiguous.
  std::set<std::string> seen;
  auto insert_unique = [&seen](const std::string& name) {
    if (!seen.insert(name).second)
      throw ValidationError("duplicate column name '" + name + "'");
  };
  insert_unique(raw.y_name);
  insert_unique(raw.d_name);
  for (const auto& nm : ds.z_names_) insert_unique(nm);
  for (const auto& nm : ds.x_names_) insert_unique(nm);

  const double d_mean = raw.d.mean();
  if ((raw.d.array() - d_mean).abs().maxCoeff() == 0.0)
    throw ValidationError("treatment has zero variance");

  // Outcome basis: user-supplied, or covariates by default; an all-ones
  // intercept column is prepended when absent so V_0 is never empty.
  Eigen::MatrixXd w;
  std::vector<std::string> w_names;
  if (raw.has_w) {
    w = std::move(raw.w);
    w_names = default_names("w", w.cols(), std::move(raw.w_names));
    check_finite(w, "w", w_names);
    std::set<std::string> w_seen;
    for (const auto& nm : w_names)
      if (!w_seen.insert(nm).second)
        throw ValidationError("duplicate column name '" + nm +
                              "' in outcome basis");
  } else {
    w = raw.x;
    w_names = ds.x_names_;
  }
  bool has_intercept = false;
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    if (is_all_ones(w.col(j))) {
      has_intercept = true;
      break;
    }
  }
  if (!has_intercept) {
    Eigen::MatrixXd with_icpt(n, w.cols() + 1);
    with_icpt.col(0).setOnes();
    if (w.cols() > 0) with_icpt.rightCols(w.cols()) = w;
    w = std::move(with_icpt);
    w_names.insert(w_names.begin(), "intercept");
  }

  ds.y_ = std::move(raw.y);
  ds.d_ = std::move(raw.d);
  ds.z_ = std::move(raw.z);
  ds.x_ = std::move(raw.x);
  ds.w_ = std::move(w);
  ds.w_names_ = std::move(w_names);
  return ds;
}

FoldSplit FoldSplit::full(Eigen::Index n) {
  FoldSplit split;
  split.a1.resize(n);
  std::iota(split.a1.begin(), split.a1.end(), Eigen::Index{0});
  return split;
}

FoldSplit make_split(Eigen::Index n, double split_prop, std::uint64_t seed,
                     Eigen::Index p_w) {
  if (!(split_prop > 0.0 && split_prop < 1.0))
    throw ValidationError("split_prop must be in (0, 1)");
  const auto n1 = static_cast<Eigen::Index>(
      std::llround(split_prop * static_cast<double>(n)));
  const Eigen::Index n2 = n - n1;
  if (n1 < p_w + 2)
    throw ValidationError("fold A1 of size " + std::to_string(n1) +
                          " is too small for " + std::to_string(p_w) +
                          " outcome-basis columns");
  if (n2 < kMinA2)
    throw ValidationError("fold A2 of size " + std::to_string(n2) +
                          " is below the minimum of " + std::to_string(kMinA2));

  std::vector<Eigen::Index> perm(n);
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  Rng rng(seed);
  rng.shuffle(perm.begin(), perm.end());

  FoldSplit split;
  split.seed = seed;
  split.a1.assign(perm.begin(), perm.begin() + n1);
  split.a2.assign(perm.begin() + n1, perm.end());
  std::sort(split.a1.begin(), split.a1.end());
  std::sort(split.a2.begin(), split.a2.end());
  return split;
}

Eigen::VectorXd subset_rows(const Eigen::VectorXd& v,
                            const std::vector<Eigen::Index>& idx) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = v(idx[i]);
  return out;
}

Eigen::MatrixXd subset_rows(const Eigen::MatrixXd& m,
                            const std::vector<Eigen::Index>& idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = m.row(idx[i]);
  return out;
}

}  // namespace tsci
