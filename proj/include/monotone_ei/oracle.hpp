#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "monotone_ei/core.hpp"
#include "monotone_ei/local_bounds.hpp"
#include "monotone_ei/micro_signs.hpp"
#include "monotone_ei/types.hpp"

namespace monotone_ei {

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

// Recipe for a finite population with known group means everywhere.
struct SynthConfig {
    int neighborhoods = 10;
    long min_size = 50;
    long max_size = 500;
    double prevalence_lo = 0.05;
    double prevalence_hi = 0.95;
    OutcomeBounds bounds{0.0, 1.0};
    // Optional smooth per-group mean curves evaluated at the neighborhood
    // prevalence (clamped into the bounds); absent means iid uniform means.
    std::function<double(double)> mu1;
    std::function<double(double)> mu0;
    double outcome_jitter = 0.0;  // uniform(-j, j) noise added to the curves
    std::uint64_t seed = 0;
};

// Ground truth at desk scale: the aggregated view plus everything it hides.
struct SyntheticTruth {
    std::vector<long> sizes;
    std::vector<long> group1_counts;
    GroupMeansProfile profile;  // true per-neighborhood group means
    AggregateData data;         // what an analyst would observe
    double y1 = 0.0, y0 = 0.0, d = 0.0;
    double delta_b = 0.0, delta_w = 0.0;
    std::function<double(double)> mu1, mu0;  // echoed when supplied
};

SyntheticTruth synthesize_population(const SynthConfig& config);

// Individual draws from the synthesized population (requires unit outcome
// bounds; outcomes are Bernoulli at the neighborhood group mean).
std::vector<MicroRecord> sample_micro(const SyntheticTruth& truth, std::size_t rows,
                                      std::uint64_t seed);

struct CellExtremes {
    double d_lo = std::numeric_limits<double>::infinity();
    double d_hi = -std::numeric_limits<double>::infinity();
    double y1_lo = std::numeric_limits<double>::infinity();
    double y1_hi = -std::numeric_limits<double>::infinity();
    double y0_lo = std::numeric_limits<double>::infinity();
    double y0_hi = -std::numeric_limits<double>::infinity();
    std::uint64_t count = 0;

    bool empty() const { return count == 0; }
    void include(double d, double y1, double y0);
    void merge(const CellExtremes& other);
};

// Extremes of (D, Y1, Y0) over the enumerated feasible profiles, overall and
// within each sign-pair class. A profile with an association exactly at zero
// belongs to both classes for that association; equality ("zero") cells are
// not classified on a grid and are audited by point feasibility instead.
struct EnumerationResult {
    int grid_points = 0;
    std::uint64_t total_profiles = 0;
    CellExtremes any;
    // (within, between) sign pairs: [0] >=0,>=0  [1] >=0,<=0  [2] <=0,>=0  [3] <=0,<=0
    std::array<CellExtremes, 4> pairs;

    CellExtremes for_signs(SignAssumption within, SignAssumption between) const;
    CellExtremes contextual() const;  // shared-sign union
};

// Grids each neighborhood's feasible group-1 mean (the group-0 mean follows
// from the adding-up constraint), takes the Cartesian product, and evaluates
// every profile through the definitional association formulas. The product
// of grid sizes must stay at or below `cap`.
EnumerationResult enumerate_feasible(const AggregateData& data, int grid_points,
                                     std::uint64_t cap = kDefaultEnumerationCap, int threads = 1);

// One-neighborhood analog: grid over this neighborhood's feasible group-1
// mean. Sign classes for the within association are populated only when a
// slope is supplied (the local within sign compares the difference against
// the overall-regression derivative).
EnumerationResult enumerate_local(const NeighborhoodRecord& record, const OutcomeBounds& bounds,
                                  int grid_points, std::optional<double> slope);

// Pooled prevalence group: product grid over the members' group-1 means,
// classifying by the pooled difference.
EnumerationResult enumerate_tilde(const AggregateData& data, const TildeGroup& group,
                                  int grid_points, std::optional<double> slope,
                                  std::uint64_t cap = kDefaultEnumerationCap);

struct EndpointCheck {
    std::string name;
    bool pass = false;
    double analytic = 0.0;
    double enumerated = 0.0;
    double tolerance = 0.0;
};

struct SharpnessReport {
    bool pass = true;
    std::vector<EndpointCheck> checks;

    void record(std::string name, bool ok, double analytic, double enumerated, double tol);
};

// Compares the analytic identified sets for D, Y1, Y0 under one assumption
// cell against the enumerated extremes, at tolerance 2/(grid-1) times the
// parameter range; analytic rejections must coincide with empty enumerated
// cells (zero-sign cells: with an infeasible point).
SharpnessReport sharpness_check(const AggregateData& data, const AssumptionSet& assumptions,
                                int grid_points, std::uint64_t cap = kDefaultEnumerationCap,
                                int threads = 1);

// Same contract for the neighborhood-specific and pooled-prevalence bounds.
SharpnessReport local_sharpness_check(const NeighborhoodRecord& record, const OutcomeBounds& bounds,
                                      const AssumptionSet& assumptions, std::optional<double> slope,
                                      int grid_points);

SharpnessReport tilde_sharpness_check(const AggregateData& data, const TildeGroup& group,
                                      const AssumptionSet& assumptions, std::optional<double> slope,
                                      int grid_points, std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace monotone_ei
