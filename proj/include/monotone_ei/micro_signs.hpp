#pragma once

#include <optional>
#include <string>
#include <vector>

#include "monotone_ei/types.hpp"

namespace monotone_ei {

// One individual from an auxiliary linked sample.
struct MicroRecord {
    int x = 0;              // group indicator
    double y = 0.0;         // outcome
    double xn = 0.0;        // prevalence of the individual's neighborhood
    double weight = 1.0;
    std::string stratum;    // neighborhood label
};

struct CovarianceEstimate {
    double theta = 0.0;     // estimated average conditional covariance
    double se = 0.0;
    int strata_used = 0;
    int strata_dropped = 0; // fewer than two effective rows or no variation in A
};

struct CovRow {
    double a = 0.0;
    double b = 0.0;
    double weight = 1.0;
    std::string stratum;
};

// Stratified estimate of E[Cov(A, B | C)]: per-stratum weighted variance of A
// times the weighted slope of B on A, combined with the stratum weight
// shares. The variance uses classical weighted-least-squares slope standard
// errors; stratum shares are treated as known constants, computed over all
// rows (dropped strata contribute zero covariance).
CovarianceEstimate conditional_covariance(const std::vector<CovRow>& rows);

struct DeltaSignEstimates {
    std::optional<CovarianceEstimate> delta_w;  // A = prevalence, B = outcome, C = group
    std::optional<CovarianceEstimate> delta_b;  // A = group, B = outcome, C = binned prevalence
    std::string delta_w_issue;                  // set when the corresponding side is unavailable
    std::string delta_b_issue;
};

// Empirical support for the sign assumptions: both conditional associations
// with standard errors. Prevalences are rounded to the nearest multiple of
// xn_bin_width to form the conditioning bins for the between-group side.
// Each side degrades independently to an issue message instead of failing
// the whole call; throws insufficient_data_error only when neither side is
// estimable.
DeltaSignEstimates estimate_delta_signs(const std::vector<MicroRecord>& micro,
                                        double xn_bin_width = 0.05);

}  // namespace monotone_ei
