#include "tsci/selection.hpp"

#include <cmath>
#include <limits>

#include "tsci/errors.hpp"
#include "tsci/stats.hpp"

namespace tsci {

namespace {

double sigma_delta_sq(const ProjectionContext& ctx, const Dataset& dataset,
                      const FoldSplit& split) {
  const Eigen::VectorXd delta =
      subset_rows(dataset.d(), split.a1) - ctx.omega_d;
  return delta.squaredNorm() / static_cast<double>(ctx.n1);
}

}  // namespace

std::string to_string(SelMethod method) {
  return method == SelMethod::comparison ? "comparison" : "conservative";
}

std::string to_string(Validity validity) {
  switch (validity) {
    case Validity::valid:
      return "valid";
    case Validity::invalid:
      return "invalid";
    case Validity::non_testable:
      return "non_testable";
  }
  return "unknown";
}

double iv_strength(const ProjectionContext& ctx, const Dataset& dataset,
                   const FoldSplit& split) {
  const double noise = sigma_delta_sq(ctx, dataset, split);
  if (noise == 0.0) return std::numeric_limits<double>::infinity();
  return ctx.dmd / noise;
}

std::vector<double> strength_thresholds(
    const std::vector<ProjectionContext>& contexts, const Dataset& dataset,
    const FoldSplit& split, bool boot, double tau_min,
    const BootstrapDraws& draws, ThresholdMode mode,
    std::vector<std::string>* warnings) {
  std::vector<double> thresholds(contexts.size(), tau_min);
  if (!boot || contexts.empty()) return thresholds;
  if (draws.count < 200 && warnings)
    warnings->push_back(
        "IV-strength bootstrap uses fewer than 200 draws; thresholds may be "
        "unstable");

  const Eigen::VectorXd delta =
      subset_rows(dataset.d(), split.a1) - contexts.front().omega_d;
  const double noise = delta.squaredNorm() / static_cast<double>(delta.size());
  if (noise == 0.0) return thresholds;  // no treatment noise, no adjustment
  const Eigen::VectorXd delta_c = delta.array() - delta.mean();

  // One shared pass of omega over all perturbed residual vectors; each
  // candidate then only re-projects the columns onto its own basis.
  const Eigen::MatrixXd perturbed =
      draws.multipliers.transpose().array().colwise() * delta_c.array();
  const Eigen::MatrixXd omega_perturbed = *contexts.front().omega * perturbed;
  const Eigen::RowVectorXd total_sq = omega_perturbed.colwise().squaredNorm();

  for (std::size_t c = 0; c < contexts.size(); ++c) {
    const auto& ctx = contexts[c];
    Eigen::RowVectorXd removed_sq = Eigen::RowVectorXd::Zero(draws.count);
    if (ctx.basis.rank() > 0)
      removed_sq =
          (ctx.basis.q.transpose() * omega_perturbed).colwise().squaredNorm();
    std::vector<double> noise_strength(static_cast<std::size_t>(draws.count));
    for (int l = 0; l < draws.count; ++l)
      noise_strength[static_cast<std::size_t>(l)] =
          std::max(0.0, total_sq(l) - removed_sq(l)) / noise;
    const double q975 = quantile_type7(std::move(noise_strength), 0.975);
    thresholds[c] = mode == ThresholdMode::add ? tau_min + q975 : q975;
  }
  return thresholds;
}

double strength_threshold(const ProjectionContext& ctx, const Dataset& dataset,
                          const FoldSplit& split, bool boot, double tau_min,
                          const BootstrapDraws& draws, ThresholdMode mode,
                          std::vector<std::string>* warnings) {
  return strength_thresholds({ctx}, dataset, split, boot, tau_min, draws, mode,
                             warnings)
      .front();
}

StrengthReport strength_report(const std::vector<ProjectionContext>& contexts,
                               const Dataset& dataset, const FoldSplit& split,
                               bool boot, double tau_min,
                               const BootstrapDraws& draws, ThresholdMode mode,
                               std::vector<std::string>* warnings) {
  StrengthReport report;
  report.threshold = strength_thresholds(contexts, dataset, split, boot,
                                         tau_min, draws, mode, warnings);
  for (std::size_t c = 0; c < contexts.size(); ++c) {
    report.strength.push_back(iv_strength(contexts[c], dataset, split));
    report.passed.push_back(report.strength[c] > report.threshold[c]);
  }
  return report;
}

int determine_qmax(const StrengthReport& report) {
  int q_max = 0;
  for (int q = 0; q < report.n_candidates(); ++q) {
    if (!report.passed[static_cast<std::size_t>(q)]) break;
    q_max = q;
  }
  return q_max;
}

SelectionResult select_candidate(const std::vector<double>& betas,
                                 const std::vector<double>& ses, int q_max,
                                 SelMethod method, int total_candidates,
                                 double alpha_comp) {
  if (q_max < 0 || q_max >= static_cast<int>(betas.size()) ||
      betas.size() != ses.size())
    throw ValidationError("select_candidate: estimates do not cover 0..q_max");
  if (total_candidates < static_cast<int>(betas.size()))
    throw ValidationError("select_candidate: inconsistent candidate count");

  SelectionResult result;
  result.q_max = q_max;
  result.betas = betas;
  result.ses = ses;

  const double z = normal_quantile(1.0 - alpha_comp / 2.0);
  int q_comp = q_max;  // the top candidate passes trivially
  for (int q = 0; q < q_max; ++q) {
    bool passes = true;
    for (int succ = q + 1; succ <= q_max; ++succ) {
      const auto qi = static_cast<std::size_t>(q);
      const auto si = static_cast<std::size_t>(succ);
      const double gap = std::abs(betas[qi] - betas[si]);
      const double scale =
          std::sqrt(ses[qi] * ses[qi] + ses[si] * ses[si]);
      if (gap > z * scale) {
        passes = false;
        break;
      }
    }
    if (passes) {
      q_comp = q;
      break;
    }
  }
  result.q_comp = q_comp;
  result.q_cons = std::min(q_comp + 1, q_max);
  result.interpret_carefully = q_comp == q_max && total_candidates > 1;

  if (q_comp >= 1)
    result.validity = Validity::invalid;
  else if (q_max >= 1)
    result.validity = Validity::valid;
  else
    result.validity = Validity::non_testable;
  return result;
}

}  // namespace tsci
