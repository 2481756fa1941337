#include "tsci/violation.hpp"

#include <set>

#include "tsci/errors.hpp"
#include "tsci/linalg.hpp"

namespace tsci {

std::vector<ViolationCandidate> build_candidates(
    const Eigen::MatrixXd& w_a1,
    const std::vector<Eigen::MatrixXd>& vio_space_a1, bool nested,
    std::vector<std::string>* warnings) {
  const Eigen::Index n1 = w_a1.rows();
  if (n1 == 0 || w_a1.cols() == 0)
    throw ValidationError("outcome basis W must be nonempty");
  for (std::size_t e = 0; e < vio_space_a1.size(); ++e) {
    if (vio_space_a1[e].rows() != n1)
      throw ValidationError("violation element " + std::to_string(e + 1) +
                            " has " + std::to_string(vio_space_a1[e].rows()) +
                            " rows, expected " + std::to_string(n1));
  }

  std::vector<ViolationCandidate> candidates;
  candidates.reserve(vio_space_a1.size() + 1);

  ViolationCandidate v0;
  v0.q = 0;
  v0.columns = std::make_shared<const Eigen::MatrixXd>(w_a1);
  v0.label = "q0";
  v0.w_cols = w_a1.cols();
  candidates.push_back(std::move(v0));

  const OrthoBasis w_basis = orthonormal_basis(w_a1);
  if (!w_basis.dropped.empty() && warnings)
    warnings->push_back("outcome basis W is rank deficient (" +
                        std::to_string(w_basis.dropped.size()) +
                        " dependent column(s))");

  // Columns kept so far beyond W; reset per element when not nested.
  OrthoBasis running = w_basis;
  Eigen::MatrixXd kept(n1, 0);

  for (std::size_t e = 0; e < vio_space_a1.size(); ++e) {
    if (!nested) {
      running = w_basis;
      kept.resize(n1, 0);
    }
    const Eigen::MatrixXd& element = vio_space_a1[e];
    Eigen::Index n_dropped = 0;
    for (Eigen::Index j = 0; j < element.cols(); ++j) {
      const OrthoBasis extended = extend_basis(running, element.col(j));
      if (extended.rank() == running.rank()) {
        ++n_dropped;
        continue;
      }
      kept.conservativeResize(n1, kept.cols() + 1);
      kept.col(kept.cols() - 1) = element.col(j);
      running = extended;
    }
    if (n_dropped > 0 && warnings)
      warnings->push_back("candidate q" + std::to_string(e + 1) + ": dropped " +
                          std::to_string(n_dropped) +
                          " collinear violation column(s)");
    if (kept.cols() == 0 && warnings)
      warnings->push_back("candidate q" + std::to_string(e + 1) +
                          " adds no independent columns beyond W");

    ViolationCandidate cand;
    cand.q = static_cast<int>(e) + 1;
    auto cols = std::make_shared<Eigen::MatrixXd>(n1, w_a1.cols() + kept.cols());
    cols->leftCols(w_a1.cols()) = w_a1;
    if (kept.cols() > 0) cols->rightCols(kept.cols()) = kept;
    cand.columns = std::move(cols);
    cand.label = "q" + std::to_string(e + 1);
    cand.w_cols = w_a1.cols();
    candidates.push_back(std::move(cand));
  }
  return candidates;
}

std::vector<Eigen::MatrixXd> create_monomials(
    const Eigen::MatrixXd& z, int degree, std::vector<std::string>* warnings) {
  if (degree < 1) throw ValidationError("monomial degree must be at least 1");
  if (degree > 1 && warnings) {
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
      std::set<double> values;
      for (Eigen::Index i = 0; i < z.rows(); ++i) values.insert(z(i, j));
      if (values.size() <= 2) {
        warnings->push_back(
            "monomials beyond degree 1 of a binary instrument add no "
            "information");
        break;
      }
    }
  }
  std::vector<Eigen::MatrixXd> elements;
  elements.reserve(static_cast<std::size_t>(degree));
  for (int q = 1; q <= degree; ++q) {
    Eigen::MatrixXd powers(z.rows(), z.cols());
    for (Eigen::Index j = 0; j < z.cols(); ++j)
      powers.col(j) = z.col(j).array().pow(q);
    elements.push_back(std::move(powers));
  }
  return elements;
}

std::vector<Eigen::MatrixXd> create_interactions(const Eigen::VectorXd& z_col,
                                                 const Eigen::MatrixXd& x) {
  if (x.cols() > 0 && x.rows() != z_col.size())
    throw ValidationError("interaction covariates have " +
                          std::to_string(x.rows()) + " rows, expected " +
                          std::to_string(z_col.size()));
  std::vector<Eigen::MatrixXd> elements;
  elements.push_back(z_col);
  if (x.cols() > 0) {
    Eigen::MatrixXd inter(x.rows(), x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      inter.col(j) = z_col.cwiseProduct(x.col(j));
    elements.push_back(std::move(inter));
  }
  return elements;
}

}  // namespace tsci
