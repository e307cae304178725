#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "monotone_ei/types.hpp"

namespace monotone_ei {

// Neighborhood-level bootstrap of an interval-valued (or scalar) statistic.
// Replicates where the statistic is undefined or the assumption cell is
// rejected count as failures and are excluded from the endpoint SDs.
struct BootstrapResult {
    std::vector<double> lo;            // per successful replicate
    std::vector<double> hi;            // equal to lo for scalar statistics
    std::optional<double> se_lo;       // absent with fewer than two successes
    std::optional<double> se_hi;
    int requested = 0;
    int failures = 0;
    std::uint64_t seed = 0;
    std::string first_failure;
};

using IntervalStatistic = std::function<Interval(const AggregateData&)>;
using ScalarStatistic = std::function<double(const AggregateData&)>;

// Resamples |N| neighborhoods with replacement, probability proportional to
// p, carries the original shares and renormalizes, then recomputes the
// statistic. Deterministic for a given (seed, replicates): replicate seeds
// are derived from the master seed, so the sequence is independent of the
// thread count. Throws bootstrap_failure_error when every replicate fails.
BootstrapResult bootstrap(const AggregateData& data, const IntervalStatistic& statistic,
                          int replicates, std::uint64_t seed, int threads = 1);

BootstrapResult bootstrap_scalar(const AggregateData& data, const ScalarStatistic& statistic,
                                 int replicates, std::uint64_t seed, int threads = 1);

struct ConfidenceInterval {
    double lo = 0.0;
    double hi = 0.0;
    double level = 0.0;
    double critical_value = 0.0;
};

// Confidence interval for a partially identified parameter: covers the
// parameter (not the identified set) at the nominal rate. The critical value
// solves Phi(c + (hi-lo)/max(se)) - Phi(-c) = level, interpolating between
// the one-sided and two-sided normal quantiles; with zero standard errors
// the interval is returned as-is.
ConfidenceInterval imbens_manski_ci(const Interval& interval, double se_lo, double se_hi,
                                    double level);

double normal_cdf(double x);
double normal_quantile(double p);

}  // namespace monotone_ei
