#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "monotone_ei/estimators.hpp"
#include "monotone_ei/global_bounds.hpp"
#include "monotone_ei/oracle.hpp"
#include "test_helpers.hpp"

using namespace monotone_ei;
using test_helpers::close;
using test_helpers::close_rel;
using test_helpers::dataset_a;

TEST_CASE("ecological regression on the worked dataset") {
    const PointEstimates er = ecological_regression(dataset_a());
    CHECK(close(er.d, 1.0, 1e-13));
    CHECK(close(er.y1, 1.1, 1e-13));
    CHECK(close(er.y0, 0.1, 1e-13));
    CHECK_FALSE(er.feasible);  // y1 exceeds the upper outcome bound
}

TEST_CASE("ecological regression corner cases") {
    const AggregateData flat = load_aggregate(
        {{"a", 1.0, 0.2, 0.4}, {"b", 1.0, 0.7, 0.4}}, {0.0, 1.0});
    const PointEstimates er = ecological_regression(flat);
    CHECK(close(er.d, 0.0, 1e-13));
    CHECK(close(er.y1, 0.4, 1e-13));
    CHECK(close(er.y0, 0.4, 1e-13));

    CHECK_THROWS_AS(ecological_regression(load_aggregate({{"a", 1.0, 0.5, 0.5}}, {0.0, 1.0})),
                    no_variation_error);
    // Duplicated prevalences carry no usable variation either.
    CHECK_THROWS_AS(ecological_regression(load_aggregate(
                        {{"a", 1.0, 0.4, 0.2}, {"b", 2.0, 0.4, 0.8}}, {0.0, 1.0})),
                    no_variation_error);
}

TEST_CASE("neighborhood model on the worked dataset") {
    const PointEstimates nm = neighborhood_model(dataset_a());
    CHECK(close(nm.y1, 0.78, 1e-13));
    CHECK(close(nm.y0, 0.42, 1e-13));
    CHECK(close(nm.d, 0.36, 1e-13));
    CHECK(nm.feasible);
}

TEST_CASE("neighborhood model is flat on constant outcomes") {
    const AggregateData flat = load_aggregate(
        {{"a", 3.0, 0.2, 0.4}, {"b", 1.0, 0.7, 0.4}}, {0.0, 1.0});
    const PointEstimates nm = neighborhood_model(flat);
    CHECK(close(nm.y1, 0.4, 1e-13));
    CHECK(close(nm.y0, 0.4, 1e-13));
    CHECK(close(nm.d, 0.0, 1e-13));
}

TEST_CASE("the two point estimators are tied by the aggregation ratio") {
    const AggregateData data = dataset_a();
    const Moments m = moments(data);
    const PointEstimates er = ecological_regression(data);
    const PointEstimates nm = neighborhood_model(data);
    CHECK(close(nm.d, m.gamma * er.d, 1e-14));  // 0.36 = 0.36 * 1.0

    Rng rng(101);
    for (int rep = 0; rep < 300; ++rep) {
        const AggregateData d = test_helpers::random_dataset(rng, 2, 40);
        const Moments mm = moments(d);
        if (mm.var_xn <= 1e-13 * mm.var_x) continue;
        const PointEstimates e = ecological_regression(d);
        const PointEstimates n = neighborhood_model(d);
        CHECK(close_rel(n.d, mm.gamma * e.d, 1e-12));
        // Same sign, regression at least as large in magnitude.
        if (e.d > 0.0) CHECK(n.d > 0.0);
        if (e.d < 0.0) CHECK(n.d < 0.0);
        if (e.d == 0.0) CHECK(n.d == 0.0);
        CHECK(std::abs(e.d) >= std::abs(n.d) - 1e-15);
        // The neighborhood model is always feasible.
        const MobEstimates mob = method_of_bounds(d);
        CHECK(mob.d.contains(n.d, 1e-12));
        CHECK(n.y1 >= d.bounds.lo - 1e-12);
        CHECK(n.y1 <= d.bounds.hi + 1e-12);
        CHECK(n.y0 >= d.bounds.lo - 1e-12);
        CHECK(n.y0 <= d.bounds.hi + 1e-12);
    }
}

TEST_CASE("bias identities against synthesized ground truth") {
    Rng rng(77);
    for (int rep = 0; rep < 60; ++rep) {
        SynthConfig config;
        config.neighborhoods = 3 + static_cast<int>(rng.below(20));
        config.seed = rng.below(1u << 30);
        const SyntheticTruth truth = synthesize_population(config);
        const Moments m = moments(truth.data);
        if (m.var_xn <= 1e-13 * m.var_x) continue;
        const PointEstimates er = ecological_regression(truth.data);
        const PointEstimates nm = neighborhood_model(truth.data);

        CHECK(close_rel(er.d - truth.d, truth.delta_w / m.var_xn, 1e-9));
        CHECK(close_rel(nm.d - truth.d, -truth.delta_b / m.var_x, 1e-9));
        CHECK(close_rel(er.y1 - truth.y1, truth.delta_w * (1.0 - m.ex) / m.var_xn, 1e-9));
        CHECK(close_rel(er.y0 - truth.y0, -truth.delta_w * m.ex / m.var_xn, 1e-9));
        CHECK(close_rel(nm.y1 - truth.y1, -truth.delta_b / m.ex, 1e-9));
        CHECK(close_rel(nm.y0 - truth.y0, truth.delta_b / (1.0 - m.ex), 1e-9));
    }
}
