#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "monotone_ei/core.hpp"
#include "test_helpers.hpp"

using namespace monotone_ei;
using test_helpers::close;
using test_helpers::dataset_a;

TEST_CASE("load_aggregate normalizes equal populations to halves") {
    const AggregateData data = dataset_a();
    REQUIRE(data.records.size() == 2);
    CHECK(data.records[0].p == doctest::Approx(0.5));
    CHECK(data.records[1].p == doctest::Approx(0.5));
    CHECK(data.records[0].id == "a");  // row order preserved
    CHECK(data.normalization == doctest::Approx(200.0));
}

TEST_CASE("load_aggregate rejects out-of-range outcomes naming the row") {
    try {
        load_aggregate({{"a", 1.0, 0.5, 1.2}}, {0.0, 1.0});
        FAIL("expected validation_error");
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find("row 1") != std::string::npos);
        CHECK(std::string(e.what()).find("y_mean") != std::string::npos);
    }
}

TEST_CASE("load_aggregate rejects degenerate data") {
    CHECK_THROWS_AS(load_aggregate({{"a", 1.0, 0.0, 0.3}, {"b", 1.0, 1.0, 0.9}}, {0.0, 1.0}),
                    degeneracy_error);
    CHECK_THROWS_AS(load_aggregate({}, {0.0, 1.0}), validation_error);
    CHECK_THROWS_AS(load_aggregate({{"a", 0.0, 0.5, 0.5}}, {0.0, 1.0}), validation_error);
    CHECK_THROWS_AS(load_aggregate({{"a", -1.0, 0.5, 0.5}}, {0.0, 1.0}), validation_error);
    CHECK_THROWS_AS(load_aggregate({{"a", 1.0, 1.5, 0.5}}, {0.0, 1.0}), validation_error);
}

TEST_CASE("moments on the worked dataset") {
    const Moments m = moments(dataset_a());
    CHECK(close(m.ex, 0.5, 1e-15));
    CHECK(close(m.ey, 0.6, 1e-15));
    CHECK(close(m.var_x, 0.25, 1e-15));
    CHECK(close(m.var_xn, 0.09, 1e-15));
    CHECK(close(m.gamma, 0.36, 1e-14));
    CHECK(close(m.cov_xn_yn, 0.09, 1e-15));
}

TEST_CASE("moments corner cases") {
    const Moments single = moments(load_aggregate({{"a", 1.0, 0.5, 0.5}}, {0.0, 1.0}));
    CHECK(close(single.var_xn, 0.0, 1e-15));
    CHECK(close(single.gamma, 0.0, 1e-15));

    const Moments flat = moments(load_aggregate(
        {{"a", 2.0, 0.3, 0.7}, {"b", 1.0, 0.6, 0.7}, {"c", 3.0, 0.8, 0.7}}, {0.0, 1.0}));
    CHECK(close(flat.cov_xn_yn, 0.0, 1e-15));
}

TEST_CASE("deltas_from_profile on hand-computed profiles") {
    const AggregateData data = dataset_a();

    SUBCASE("equal group means per neighborhood") {
        const GroupMeansProfile profile{{0.3, 0.9}, {0.3, 0.9}};
        const Deltas d = deltas_from_profile(data, profile);
        CHECK(close(d.delta_b, 0.0, 1e-15));
        CHECK(close(d.delta_w, 0.0576, 1e-14));
        // Overall association recovered through the decomposition.
        const Moments m = moments(data);
        const double implied = (d.delta_b + d.delta_w) / ((1.0 - m.gamma) * m.var_x);
        CHECK(close(implied, 0.36, 1e-13));
        CHECK(close(aggregate_profile(data, profile).d, 0.36, 1e-13));
    }

    SUBCASE("maximal group-1 allocation") {
        const GroupMeansProfile profile{{1.0, 1.0}, {(0.3 - 0.2) / 0.8, (0.9 - 0.8) / 0.2}};
        const Deltas d = deltas_from_profile(data, profile);
        CHECK(close(d.delta_b, 0.11, 1e-14));
    }

    SUBCASE("infeasible profile is refused") {
        CHECK_THROWS_AS(deltas_from_profile(data, GroupMeansProfile{{1.0, 1.0}, {1.0, 1.0}}),
                        feasibility_error);
        CHECK_THROWS_AS(deltas_from_profile(data, GroupMeansProfile{{0.3}, {0.3}}),
                        feasibility_error);
    }
}

TEST_CASE("zero within-neighborhood gap always kills the between association") {
    Rng rng(2024);
    for (int rep = 0; rep < 50; ++rep) {
        const AggregateData data = test_helpers::random_dataset(rng, 2, 8);
        GroupMeansProfile profile;
        for (const NeighborhoodRecord& r : data.records) {
            profile.y1.push_back(r.y);
            profile.y0.push_back(r.y);
        }
        const Deltas d = deltas_from_profile(data, profile);
        CHECK(close(d.delta_b, 0.0, 1e-14));
    }
}

TEST_CASE("normalization and moment identities on random datasets") {
    Rng rng(7);
    for (int rep = 0; rep < 200; ++rep) {
        const AggregateData data = test_helpers::random_dataset(rng, 2, 30);
        double sum = 0.0;
        for (const NeighborhoodRecord& r : data.records) sum += r.p;
        CHECK(std::abs(sum - 1.0) <= 1e-9);
        const Moments m = moments(data);
        CHECK(m.var_x == m.ex * (1.0 - m.ex));
        CHECK(m.var_xn >= 0.0);
        CHECK(m.var_xn <= m.var_x + 1e-15);
        CHECK(m.gamma >= 0.0);
        CHECK(m.gamma < 1.0);
    }
}

TEST_CASE("decomposition identity holds for every feasible profile") {
    Rng rng(11);
    for (int rep = 0; rep < 200; ++rep) {
        const AggregateData data = test_helpers::random_dataset(rng, 2, 10);
        const GroupMeansProfile profile = test_helpers::random_profile(data, rng);
        const Deltas deltas = deltas_from_profile(data, profile);
        const Moments m = moments(data);
        const double d_direct = aggregate_profile(data, profile).d;
        const double d_decomp = (deltas.delta_b + deltas.delta_w) / ((1.0 - m.gamma) * m.var_x);
        CHECK(test_helpers::close_rel(d_direct, d_decomp, 1e-10));
    }
}

TEST_CASE("mixtures of feasible profiles stay feasible and mix the difference") {
    Rng rng(13);
    for (int rep = 0; rep < 100; ++rep) {
        const AggregateData data = test_helpers::random_dataset(rng, 2, 10);
        const GroupMeansProfile a = test_helpers::random_profile(data, rng);
        const GroupMeansProfile b = test_helpers::random_profile(data, rng);
        const double da = aggregate_profile(data, a).d;
        const double db = aggregate_profile(data, b).d;
        for (double alpha : {0.25, 0.5, 0.75}) {
            GroupMeansProfile mix;
            for (std::size_t i = 0; i < data.records.size(); ++i) {
                mix.y1.push_back(alpha * a.y1[i] + (1.0 - alpha) * b.y1[i]);
                mix.y0.push_back(alpha * a.y0[i] + (1.0 - alpha) * b.y0[i]);
            }
            CHECK_NOTHROW(require_feasible(data, mix));
            const double dm = aggregate_profile(data, mix).d;
            CHECK(close(dm, alpha * da + (1.0 - alpha) * db, 1e-10));
        }
    }
}
