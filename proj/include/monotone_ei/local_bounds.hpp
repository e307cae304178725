#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "monotone_ei/types.hpp"

namespace monotone_ei {

// Per-neighborhood envelope. A saturated neighborhood (prevalence 0 or 1)
// point-identifies the present group's mean; the absent group's interval is
// reported as absent, as is the difference.
struct LocalMob {
    std::optional<Interval> y1;
    std::optional<Interval> y0;
    std::optional<Interval> d;
};

LocalMob neighborhood_mob(const NeighborhoodRecord& record, const OutcomeBounds& bounds);

struct DerivativeEstimate {
    double x0 = 0.0;
    double slope = 0.0;      // outcome units per unit prevalence
    double bandwidth = 0.0;
    int effective_n = 0;     // records with nonzero kernel weight
};

// Population-weighted local-linear slope of the neighborhood outcome on
// prevalence at x0, Epanechnikov kernel K(u) = 0.75 (1 - u^2) on |u| <= 1.
// Throws undefined_derivative_error when fewer than two records carry kernel
// weight or the weighted prevalences have no spread (this is also how
// evaluation outside the data's support refuses, rather than extrapolating).
DerivativeEstimate local_derivative(const AggregateData& data, double x0, double bandwidth);

// Local-linear level prediction at x0 (used by cross-validation and the
// plot-ready curve). Same definedness rules as local_derivative.
double local_linear_level(const AggregateData& data, double x0, double bandwidth);

// 10-fold (by default) cross-validated bandwidth: candidate minimizing the
// population-weighted out-of-fold squared error of the level fit, fold
// assignment by seeded permutation, ties broken toward the largest
// candidate. Candidates that fail on any fold are disqualified; if all fail,
// throws bandwidth_grid_error naming a failing candidate and fold.
double cv_bandwidth(const AggregateData& data, int folds, const std::vector<double>& candidates,
                    std::uint64_t seed);

// 15 log-spaced values spanning [0.02, 0.5] in prevalence units.
std::vector<double> default_bandwidth_grid();

struct LocalBoundsReport {
    std::string id;
    double x = 0.0;
    double y = 0.0;
    std::optional<Interval> d;
    std::optional<Interval> y1;
    std::optional<Interval> y0;
    AssumptionSet cell;
    bool cr_applied = false;
    int implied_sign = 0;           // sign selected by the local CR branch (slope sign)
    std::optional<double> slope;
    std::string rejection_reason;

    bool rejected() const { return d && d->rejected(); }
};

// Neighborhood-specific sharp bounds under the declared cell. The between
// sign constrains the local difference against zero; the within sign
// constrains it against the overall-regression derivative at this
// prevalence, so `slope` is required whenever the within sign or CR is
// declared. These slope-based cells additionally assume neighborhoods
// sharing a prevalence share mean outcomes; callers acknowledge that with
// `shared_outcome_acknowledged` (configuration error otherwise).
LocalBoundsReport local_monotone_bounds(const NeighborhoodRecord& record, const OutcomeBounds& bounds,
                                        const AssumptionSet& assumptions,
                                        std::optional<double> slope,
                                        bool shared_outcome_acknowledged);

// All neighborhoods sharing a prevalence value, pooled with population
// weights. The pooled envelope averages the members' envelopes (tighter than
// the envelope of the pooled pseudo-neighborhood), and the same local cell
// formulas apply to the pooled quantities.
struct TildeGroup {
    double prevalence = 0.0;            // requested value
    double x = 0.0;                     // pooled prevalence (weighted member mean)
    double y = 0.0;                     // pooled outcome
    std::vector<std::size_t> members;   // indices into data.records
    std::vector<std::string> ids;
    std::vector<double> weights;        // population weights, sum to 1
    LocalMob mob;                       // pooled envelope
};

// tolerance 0 (the default) groups prevalences equal after rounding to nine
// decimal places; a positive tolerance widens the match window.
TildeGroup tilde_aggregate(const AggregateData& data, double prevalence, double tolerance = 0.0);

LocalBoundsReport tilde_monotone_bounds(const TildeGroup& group, const OutcomeBounds& bounds,
                                        const AssumptionSet& assumptions,
                                        std::optional<double> slope,
                                        bool shared_outcome_acknowledged);

}  // namespace monotone_ei
