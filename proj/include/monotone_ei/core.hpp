#pragma once

#include <string>
#include <vector>

#include "monotone_ei/types.hpp"

namespace monotone_ei {

// Absolute tolerance, in outcome units, for profile feasibility checks.
inline constexpr double kFeasibilityTol = 1e-10;

struct TableRow {
    std::string id;
    double population = 0.0;
    double x_share = 0.0;
    double y_mean = 0.0;
};

// Builds a validated dataset from raw rows. Population shares are normalized
// to sum to one (the raw total is kept in `normalization`); row order is
// preserved. Throws validation_error naming the offending row, or
// degeneracy_error when no row has positive share and interior prevalence.
AggregateData load_aggregate(const std::vector<TableRow>& rows, OutcomeBounds bounds = {});

Moments moments(const AggregateData& data);

// The two conditional associations implied by a candidate profile:
// between = average within-neighborhood covariance of outcome and membership,
// within  = average covariance of group mean and prevalence across
// neighborhoods, under the group-conditional neighborhood weights.
struct Deltas {
    double delta_b = 0.0;
    double delta_w = 0.0;
};

// Throws feasibility_error unless the profile reproduces every neighborhood
// mean within kFeasibilityTol and stays inside the outcome bounds.
void require_feasible(const AggregateData& data, const GroupMeansProfile& profile);

Deltas deltas_from_profile(const AggregateData& data, const GroupMeansProfile& profile);

// Overall group means and difference implied by a profile.
struct ProfileAggregates {
    double y1 = 0.0;
    double y0 = 0.0;
    double d = 0.0;
};
ProfileAggregates aggregate_profile(const AggregateData& data, const GroupMeansProfile& profile);

}  // namespace monotone_ei
