#include "tsci/estimator.hpp"

#include <cmath>

#include "tsci/errors.hpp"
#include "tsci/rng.hpp"
#include "tsci/stats.hpp"

namespace tsci {

Eigen::MatrixXd ProjectionContext::dense_m() const {
  Eigen::MatrixXd p_perp_omega = *omega;
  if (basis.rank() > 0)
    p_perp_omega.noalias() -= basis.q * (basis.q.transpose() * *omega);
  return p_perp_omega.transpose() * p_perp_omega;
}

Eigen::MatrixXd ProjectionContext::apply_p_perp(const Eigen::MatrixXd& y) const {
  return project_out(basis, y);
}

ProjectionContext projection_context(const HatMatrix& hat,
                                     const ViolationCandidate& candidate,
                                     const Dataset& dataset,
                                     const FoldSplit& split,
                                     const ProjectionContext* parent) {
  const Eigen::Index n1 = split.n1();
  if (!hat.omega || hat.omega->rows() != n1 || hat.omega->cols() != n1)
    throw ValidationError("hat matrix does not match the A1 fold size");
  if (candidate.columns->rows() != n1)
    throw ValidationError("violation candidate does not match the A1 fold size");

  const Eigen::MatrixXd& omega = *hat.omega;
  ProjectionContext ctx;
  ctx.omega = hat.omega;
  ctx.v_cols = candidate.columns;
  ctx.q = candidate.q;
  ctx.n1 = n1;

  if (parent == nullptr) {
    ctx.basis = orthonormal_basis(omega * (*candidate.columns));
    ctx.omega_d = omega * subset_rows(dataset.d(), split.a1);
    const double total = ctx.omega_d.squaredNorm();
    ctx.dmd = std::max(0.0, total - (ctx.basis.q.transpose() * ctx.omega_d)
                                        .squaredNorm());
    ctx.m_diag = omega.colwise().squaredNorm().transpose();
    if (ctx.basis.rank() > 0) {
      const Eigen::MatrixXd qt_omega = ctx.basis.q.transpose() * omega;
      ctx.m_diag -= qt_omega.colwise().squaredNorm().transpose();
    }
  } else {
    // The candidate must extend the parent's columns on the left.
    const Eigen::Index k_parent = parent->v_cols->cols();
    if (candidate.columns->cols() < k_parent ||
        (candidate.columns->leftCols(k_parent) - *parent->v_cols).norm() != 0.0)
      throw std::logic_error(
          "projection_context: candidate does not extend its parent");
    const Eigen::MatrixXd new_hat_cols =
        omega * candidate.columns->rightCols(candidate.columns->cols() -
                                             k_parent);
    ctx.basis = extend_basis(parent->basis, new_hat_cols);
    ctx.omega_d = parent->omega_d;
    const Eigen::Index r_new = ctx.basis.rank() - parent->basis.rank();
    ctx.dmd = parent->dmd;
    ctx.m_diag = parent->m_diag;
    if (r_new > 0) {
      const auto fresh = ctx.basis.q.rightCols(r_new);
      ctx.dmd = std::max(0.0, ctx.dmd - (fresh.transpose() * ctx.omega_d)
                                            .squaredNorm());
      const Eigen::MatrixXd fresh_t_omega = fresh.transpose() * omega;
      ctx.m_diag -= fresh_t_omega.colwise().squaredNorm().transpose();
    }
  }
  ctx.m_diag = ctx.m_diag.cwiseMax(0.0);
  ctx.rank_v = ctx.basis.rank();

  if (ctx.rank_v == 0)
    throw EstimationError("violation basis annihilated by hat matrix");
  if (n1 <= ctx.rank_v + 1)
    throw EstimationError(
        "A1 fold too small for the violation candidate's rank");

  ctx.p_perp_omega_d = project_out(ctx.basis, ctx.omega_d);
  ctx.m_d.noalias() = omega.transpose() * ctx.p_perp_omega_d;
  return ctx;
}

EffectEstimate estimate_beta(const ProjectionContext& ctx,
                             const Dataset& dataset, const FoldSplit& split) {
  const Eigen::VectorXd d_a1 = subset_rows(dataset.d(), split.a1);
  const Eigen::VectorXd y_a1 = subset_rows(dataset.y(), split.a1);
  const Eigen::Index n1 = ctx.n1;

  if (!(ctx.dmd > 1e-10 * d_a1.squaredNorm()))
    throw EstimationError("IV fully absorbed by violation space");
  const Eigen::Index dof = n1 - ctx.rank_v - 1;
  if (dof <= 0)
    throw EstimationError("nonpositive residual degrees of freedom");

  const Eigen::VectorXd omega_y = *ctx.omega * y_a1;
  const double y_md = omega_y.dot(ctx.p_perp_omega_d);
  const double beta_raw = y_md / ctx.dmd;

  EffectEstimate est;
  est.beta_raw = beta_raw;
  est.residuals_delta = d_a1 - ctx.omega_d;

  // Outcome residuals are purged of both the rescaled candidate (omega V)
  // and the raw candidate columns.
  const OrthoBasis combined = extend_basis(ctx.basis, *ctx.v_cols);
  est.residuals_eps = project_out(combined, y_a1 - beta_raw * d_a1);

  est.bias_term = ctx.m_diag
                      .cwiseProduct(est.residuals_delta)
                      .cwiseProduct(est.residuals_eps)
                      .sum() /
                  ctx.dmd;
  est.beta_hat = beta_raw - est.bias_term;
  est.dof = dof;

  const double sigma_eps_sq =
      est.residuals_eps.squaredNorm() / static_cast<double>(dof);
  const double sigma_delta_sq =
      est.residuals_delta.squaredNorm() / static_cast<double>(n1);
  est.sigma_eps_hat = std::sqrt(sigma_eps_sq);
  est.sigma_delta_hat = std::sqrt(sigma_delta_sq);
  est.se_plugin = est.sigma_eps_hat / std::sqrt(ctx.dmd);
  return est;
}

BootstrapDraws make_bootstrap_draws(int count, Eigen::Index n1,
                                    std::uint64_t seed) {
  if (count < 1) throw ValidationError("bootstrap draw count must be positive");
  BootstrapDraws draws;
  draws.count = count;
  draws.seed = seed;
  draws.multipliers.resize(count, n1);
  Rng rng(seed);
  for (int l = 0; l < count; ++l)
    for (Eigen::Index i = 0; i < n1; ++i) draws.multipliers(l, i) = rng.normal();
  return draws;
}

std::vector<double> bootstrap_se(const EffectEstimate& qmax_estimate,
                                 const std::vector<ProjectionContext>& contexts,
                                 const BootstrapDraws& draws,
                                 std::vector<std::string>* warnings) {
  if (draws.count < 50 && warnings)
    warnings->push_back("bootstrap uses fewer than 50 draws; standard errors "
                        "may be unstable");

  const Eigen::VectorXd& delta = qmax_estimate.residuals_delta;
  const Eigen::VectorXd& eps = qmax_estimate.residuals_eps;
  const Eigen::VectorXd delta_c = delta.array() - delta.mean();
  const Eigen::VectorXd eps_c = eps.array() - eps.mean();

  const Eigen::MatrixXd& u = draws.multipliers;
  const Eigen::MatrixXd u_sq = u.array().square().matrix();

  std::vector<double> ses;
  ses.reserve(contexts.size());
  for (const auto& ctx : contexts) {
    if (ctx.n1 != delta_c.size())
      throw std::logic_error("bootstrap_se: context/residual size mismatch");
    // N_l = [ (M D)' eps_l - sum_i M_ii delta_l_i eps_l_i ] / dmd with
    // delta_l = U_l .* delta_c and eps_l = U_l .* eps_c.
    const Eigen::VectorXd lin = u * ctx.m_d.cwiseProduct(eps_c);
    const Eigen::VectorXd quad =
        u_sq * ctx.m_diag.cwiseProduct(delta_c).cwiseProduct(eps_c);
    const Eigen::VectorXd stats = (lin - quad) / ctx.dmd;
    std::vector<double> values(stats.data(), stats.data() + stats.size());
    ses.push_back(sample_sd(values));
  }
  return ses;
}

}  // namespace tsci
