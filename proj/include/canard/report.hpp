#pragma once

#include <json.hpp>

#include "canard/system.hpp"

namespace canard {

struct AnalyzeOptions {
    double scan_bound = 1.0;   // upper cap for one-sided canard windows
    double free_value = 0.0;   // pinned free coordinate (k = 3)
    double residual_tol = 1e-10;
};

/// Full analysis pipeline as a versioned JSON document: system echo, cubic
/// fit, pseudo-singularities with their classification and genericity
/// checks, normal-form identity residuals, fixed points with Routh-Hurwitz
/// reports, the canard window, and the final verdict. Solver failures are
/// collected in a `failures` array instead of aborting the report.
nlohmann::ordered_json analysis_report(const SlowFastSystem& system,
                                       const AnalyzeOptions& options = {});

}  // namespace canard
