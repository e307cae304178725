#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "monotone_ei/core.hpp"
#include "monotone_ei/local_bounds.hpp"
#include "monotone_ei/rng.hpp"

namespace test_helpers {

// Two equally sized neighborhoods, prevalences 0.2/0.8, outcomes 0.3/0.9,
// rate bounds. Small enough to check everything by hand.
inline monotone_ei::AggregateData dataset_a() {
    return monotone_ei::load_aggregate(
        {{"a", 100.0, 0.2, 0.3}, {"b", 100.0, 0.8, 0.9}}, {0.0, 1.0});
}

inline monotone_ei::AggregateData random_dataset(monotone_ei::Rng& rng, int min_n, int max_n) {
    const int n = static_cast<int>(rng.uniform_int(min_n, max_n));
    std::vector<monotone_ei::TableRow> rows;
    rows.reserve(n);
    for (int i = 0; i < n; ++i) {
        rows.push_back({"n" + std::to_string(i + 1), rng.uniform(0.2, 1.0),
                        rng.uniform(0.02, 0.98), rng.uniform(0.0, 1.0)});
    }
    return monotone_ei::load_aggregate(rows, {0.0, 1.0});
}

// Uniform draw from the feasible set: group-1 means uniform on their
// per-neighborhood envelopes, group-0 means implied by adding up.
inline monotone_ei::GroupMeansProfile random_profile(const monotone_ei::AggregateData& data,
                                                     monotone_ei::Rng& rng) {
    monotone_ei::GroupMeansProfile profile;
    for (const monotone_ei::NeighborhoodRecord& r : data.records) {
        const monotone_ei::LocalMob mob = monotone_ei::neighborhood_mob(r, data.bounds);
        if (r.x >= 1.0) {
            profile.y1.push_back(r.y);
            profile.y0.push_back(r.y);
        } else if (r.x <= 0.0) {
            profile.y1.push_back(r.y);
            profile.y0.push_back(r.y);
        } else {
            const double y1 = rng.uniform(mob.y1->lo, mob.y1->hi);
            profile.y1.push_back(y1);
            profile.y0.push_back((r.y - r.x * y1) / (1.0 - r.x));
        }
    }
    return profile;
}

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// Relative tolerance with a unit floor (quantities here are order 0.01..10).
inline bool close_rel(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace test_helpers
