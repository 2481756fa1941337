#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tsci/dataset.hpp"
#include "tsci/learners.hpp"
#include "tsci/linalg.hpp"
#include "tsci/violation.hpp"

namespace tsci {

// Per-candidate projection quantities built around M(V) = omega' P_perp omega,
// where P_perp projects onto the orthogonal complement of omega * V. The full
// M matrix is never materialized at scale; m_d, m_diag and dmd are the pieces
// estimation and the bootstrap consume. dense_m() forms M explicitly for
// small problems.
struct ProjectionContext {
  std::shared_ptr<const Eigen::MatrixXd> omega;
  std::shared_ptr<const Eigen::MatrixXd> v_cols;
  int q = 0;
  OrthoBasis basis;                 // orthonormal basis of omega * V
  Eigen::VectorXd omega_d;          // omega * D_A1
  Eigen::VectorXd p_perp_omega_d;   // P_perp omega D_A1
  Eigen::VectorXd m_d;              // M D_A1
  Eigen::VectorXd m_diag;           // diag(M)
  double dmd = 0.0;                 // D' M D = ||P_perp omega D||^2
  Eigen::Index rank_v = 0;
  Eigen::Index n1 = 0;

  Eigen::MatrixXd dense_m() const;
  Eigen::MatrixXd apply_p_perp(const Eigen::MatrixXd& y) const;
};

// Builds the context for one candidate. When `parent` is given and the
// candidate's columns extend the parent's, the basis grows from the parent's
// basis; dmd then shrinks by exactly the new block's contribution, which makes
// IV strength nonincreasing along a nested chain with no rounding slack.
ProjectionContext projection_context(const HatMatrix& hat,
                                     const ViolationCandidate& candidate,
                                     const Dataset& dataset,
                                     const FoldSplit& split,
                                     const ProjectionContext* parent = nullptr);

struct EffectEstimate {
  double beta_hat = 0.0;   // beta_raw - bias_term
  double beta_raw = 0.0;   // Y' M D / D' M D
  double bias_term = 0.0;
  double se_plugin = 0.0;
  std::optional<double> se_boot;
  double sigma_eps_hat = 0.0;
  double sigma_delta_hat = 0.0;
  Eigen::VectorXd residuals_eps;    // P_perp_[omega V | V] (Y - D beta_raw)
  Eigen::VectorXd residuals_delta;  // D - omega D
  Eigen::Index dof = 0;
};

EffectEstimate estimate_beta(const ProjectionContext& ctx,
                             const Dataset& dataset, const FoldSplit& split);

// Wild-bootstrap multipliers, one row per replicate.
struct BootstrapDraws {
  int count = 300;
  Eigen::MatrixXd multipliers;  // count x n1, i.i.d. standard normal
  std::uint64_t seed = 0;
};

BootstrapDraws make_bootstrap_draws(int count, Eigen::Index n1,
                                    std::uint64_t seed);

// Wild-bootstrap standard error per candidate context. Residuals are centered
// and taken from the supplied estimate (the one at the largest candidate that
// passed the strength test); each replicate perturbs both residual vectors by
// the same multipliers and re-evaluates the estimator's noise terms.
std::vector<double> bootstrap_se(const EffectEstimate& qmax_estimate,
                                 const std::vector<ProjectionContext>& contexts,
                                 const BootstrapDraws& draws,
                                 std::vector<std::string>* warnings = nullptr);

}  // namespace tsci
