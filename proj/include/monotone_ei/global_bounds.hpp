#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "monotone_ei/estimators.hpp"
#include "monotone_ei/types.hpp"

namespace monotone_ei {

// Extreme group means and difference consistent with the data and the
// outcome range (the assumption-free envelope every other bound refines).
struct MobEstimates {
    Interval y1;
    Interval y0;
    Interval d;
};

MobEstimates method_of_bounds(const AggregateData& data);

enum class Target { difference, group1, group0 };
const char* to_string(Target t);

// Point estimates and envelope a bounds evaluation consumed.
struct BoundsInputs {
    Moments m;
    bool er_defined = false;  // the regression slope exists and was needed/computed
    double d_er = 0.0, y1_er = 0.0, y0_er = 0.0;
    double d_nm = 0.0, y1_nm = 0.0, y0_nm = 0.0;
    MobEstimates mob;
};

BoundsInputs compute_bounds_inputs(const AggregateData& data, bool need_er);

// One identified set for one target under one assumption cell. Empty
// intersections surface as status = rejected with the crossing named;
// a rejected assumption is information, not an error.
struct BoundsReport {
    Target target = Target::difference;
    Interval interval;
    AssumptionSet requested;   // as supplied by the caller
    AssumptionSet cell;        // effective cell after contextual-reinforcement resolution
    bool cr_applied = false;
    int implied_sign = 0;      // sign of the difference implied by the CR branch
    BoundsInputs inputs;
    std::string lo_source;     // constraint that delivered each endpoint
    std::string hi_source;
    std::string rejection_reason;

    bool rejected() const { return interval.rejected(); }
};

// Sharp identified set for the difference in group means under the declared
// cell. With contextual reinforcement and no declared signs, the branch is
// selected by the sign of D_ER - D_NM and the implied sign is reported; a
// single declared sign is propagated to the other association first.
BoundsReport bounds_for_d(const AggregateData& data, const AssumptionSet& assumptions);

// Same for a group mean; `group` is 1 or 0. The group-0 cell pairings mirror
// the group-1 ones (the estimator biases enter with opposite signs).
BoundsReport bounds_for_mean(const AggregateData& data, int group, const AssumptionSet& assumptions);

// G+1 discrete groups observed as per-neighborhood shares; bounds for one
// group's mean come from collapsing to that group's indicator and reusing
// the binary machinery. Assumptions are interpreted for that group.
struct MultiGroupRow {
    std::string id;
    double population = 0.0;
    std::vector<double> shares;
    double y_mean = 0.0;
};

struct MultiGroupData {
    std::vector<MultiGroupRow> rows;
    OutcomeBounds bounds;
};

// Indicator-collapsed view for group g (x_n = share of group g).
AggregateData collapse_group(const MultiGroupData& data, std::size_t g);

BoundsReport multi_group_bounds(const MultiGroupData& data, std::size_t g,
                                const AssumptionSet& assumptions);

}  // namespace monotone_ei
