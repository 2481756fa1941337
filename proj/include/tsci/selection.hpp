#pragma once

#include <string>
#include <vector>

#include "tsci/estimator.hpp"

namespace tsci {

enum class SelMethod { comparison, conservative };
enum class Validity { valid, invalid, non_testable };
enum class ThresholdMode { add, replace };

std::string to_string(SelMethod method);
std::string to_string(Validity validity);

// Generalized IV strength of one candidate: the variation of the fitted
// treatment surviving the candidate's projection, scaled by the treatment
// noise variance. Returns +infinity when the treatment residual is exactly
// zero (noiseless treatment model).
double iv_strength(const ProjectionContext& ctx, const Dataset& dataset,
                   const FoldSplit& split);

// Strength thresholds per candidate. Without the bootstrap every threshold is
// tau_min. With it, wild-bootstrap draws of the centered treatment residuals
// are pushed through each candidate's projection to measure how much apparent
// strength pure noise generates; the 97.5% quantile of those noise strengths
// is added to tau_min (mode add) or used on its own (mode replace).
std::vector<double> strength_thresholds(
    const std::vector<ProjectionContext>& contexts, const Dataset& dataset,
    const FoldSplit& split, bool boot, double tau_min,
    const BootstrapDraws& draws, ThresholdMode mode = ThresholdMode::add,
    std::vector<std::string>* warnings = nullptr);

double strength_threshold(const ProjectionContext& ctx, const Dataset& dataset,
                          const FoldSplit& split, bool boot, double tau_min,
                          const BootstrapDraws& draws,
                          ThresholdMode mode = ThresholdMode::add,
                          std::vector<std::string>* warnings = nullptr);

struct StrengthReport {
  std::vector<double> strength;
  std::vector<double> threshold;
  std::vector<bool> passed;

  int n_candidates() const { return static_cast<int>(strength.size()); }
};

StrengthReport strength_report(const std::vector<ProjectionContext>& contexts,
                               const Dataset& dataset, const FoldSplit& split,
                               bool boot, double tau_min,
                               const BootstrapDraws& draws,
                               ThresholdMode mode = ThresholdMode::add,
                               std::vector<std::string>* warnings = nullptr);

// Largest m such that every candidate q <= m passed the strength test.
int determine_qmax(const StrengthReport& report);

struct SelectionResult {
  int q_max = 0;
  int q_comp = 0;
  int q_cons = 0;
  Validity validity = Validity::non_testable;
  // Set when the comparison choice hits q_max: no stronger candidate was
  // available to test against, so remaining bias cannot be ruled out.
  bool interpret_carefully = false;
  std::vector<double> betas;  // per-candidate inputs echoed for reporting
  std::vector<double> ses;
};

// Comparison rule: candidate q passes when its estimate differs from every
// successor's by no more than z_{1-alpha_comp/2} * sqrt(se_q^2 + se_q'^2);
// q_comp is the smallest passing index, q_cons its successor capped at q_max.
// total_candidates is Q+1 (candidates beyond q_max count for validity
// classification of weak-IV runs).
SelectionResult select_candidate(const std::vector<double>& betas,
                                 const std::vector<double>& ses, int q_max,
                                 SelMethod method, int total_candidates,
                                 double alpha_comp = 0.05);

}  // namespace tsci
