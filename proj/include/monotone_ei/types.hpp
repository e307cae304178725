#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "monotone_ei/errors.hpp"

namespace monotone_ei {

enum class IntervalStatus { identified, bounded, rejected };

// A closed interval in outcome units. `rejected` means the defining
// inequalities crossed (lower candidate above upper candidate); the raw
// endpoints are kept un-clamped so diagnostics can show the crossing.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    IntervalStatus status = IntervalStatus::bounded;

    static Interval point(double v) { return Interval{v, v, IntervalStatus::identified}; }

    static Interval make(double lo, double hi) {
        if (lo > hi) return Interval{lo, hi, IntervalStatus::rejected};
        if (lo == hi) return Interval{lo, hi, IntervalStatus::identified};
        return Interval{lo, hi, IntervalStatus::bounded};
    }

    bool rejected() const { return status == IntervalStatus::rejected; }
    bool identified() const { return status == IntervalStatus::identified; }
    double width() const { return hi - lo; }
    bool contains(double v, double tol = 0.0) const {
        return !rejected() && v >= lo - tol && v <= hi + tol;
    }
};

// Range [lo, hi] the outcome is known to live in (defaults to rates).
struct OutcomeBounds {
    double lo = 0.0;
    double hi = 1.0;
};

struct NeighborhoodRecord {
    std::string id;
    double p = 0.0;  // population share, normalized on load
    double x = 0.0;  // group prevalence in [0, 1]
    double y = 0.0;  // mean outcome, inside the dataset bounds
};

struct AggregateData {
    std::vector<NeighborhoodRecord> records;
    OutcomeBounds bounds;
    // Raw population total the shares were divided by (reported, not silently lost).
    double normalization = 1.0;

    std::size_t size() const { return records.size(); }
};

// Population moments of the aggregate view. var_x refers to the underlying
// binary group indicator, var_xn to the neighborhood prevalence.
struct Moments {
    double ex = 0.0;
    double ey = 0.0;
    double var_x = 0.0;
    double var_xn = 0.0;
    double gamma = 0.0;  // var_xn / var_x, the share of group variance surviving aggregation
    double cov_xn_yn = 0.0;
};

enum class SignAssumption { Unknown, NonNegative, NonPositive, Zero };

const char* to_string(SignAssumption s);
SignAssumption sign_assumption_from_string(const std::string& s);

// Sign declarations for the within-group (delta_W) and between-group
// (delta_B) conditional associations, plus the contextual-reinforcement
// flag (the two associations share a sign).
struct AssumptionSet {
    SignAssumption within = SignAssumption::Unknown;
    SignAssumption between = SignAssumption::Unknown;
    bool contextual_reinforcement = false;

    // Throws configuration_error for CR with strictly opposite declared signs.
    void validate() const;
};

// A candidate assignment of per-neighborhood group means, aligned with
// AggregateData::records. Feasible when every entry is inside the outcome
// bounds and x*y1 + (1-x)*y0 reproduces the observed neighborhood mean.
struct GroupMeansProfile {
    std::vector<double> y1;
    std::vector<double> y0;
};

inline void AssumptionSet::validate() const {
    if (!contextual_reinforcement) return;
    const bool opposite =
        (within == SignAssumption::NonNegative && between == SignAssumption::NonPositive) ||
        (within == SignAssumption::NonPositive && between == SignAssumption::NonNegative);
    if (opposite) {
        throw configuration_error(
            "contextual reinforcement requires the declared association signs to agree; got within=" +
            std::string(to_string(within)) + ", between=" + std::string(to_string(between)));
    }
}

inline const char* to_string(SignAssumption s) {
    switch (s) {
        case SignAssumption::Unknown: return "unknown";
        case SignAssumption::NonNegative: return "nonneg";
        case SignAssumption::NonPositive: return "nonpos";
        case SignAssumption::Zero: return "zero";
    }
    return "unknown";
}

inline SignAssumption sign_assumption_from_string(const std::string& s) {
    if (s == "unknown" || s.empty()) return SignAssumption::Unknown;
    if (s == "nonneg" || s == "non-negative" || s == "+") return SignAssumption::NonNegative;
    if (s == "nonpos" || s == "non-positive" || s == "-") return SignAssumption::NonPositive;
    if (s == "zero" || s == "0") return SignAssumption::Zero;
    throw configuration_error("unrecognized sign assumption '" + s +
                              "' (expected nonneg, nonpos, zero, or unknown)");
}

}  // namespace monotone_ei
