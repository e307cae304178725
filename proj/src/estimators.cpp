#include "monotone_ei/estimators.hpp"

#include "monotone_ei/core.hpp"

namespace monotone_ei {

PointEstimates ecological_regression(const AggregateData& data) {
    const Moments m = moments(data);
    // Relative threshold: duplicated prevalences produce var_xn of pure
    // roundoff, and the slope would be garbage.
    if (m.var_xn <= 1e-13 * m.var_x) {
        throw no_variation_error("prevalence has no variation across neighborhoods; regression slope undefined");
    }
    PointEstimates est;
    est.method = EstimatorKind::ecological_regression;
    est.d = m.cov_xn_yn / m.var_xn;
    est.y0 = m.ey - est.d * m.ex;
    est.y1 = m.ey + est.d * (1.0 - m.ex);
    est.feasible = est.y1 >= data.bounds.lo && est.y1 <= data.bounds.hi &&
                   est.y0 >= data.bounds.lo && est.y0 <= data.bounds.hi;
    return est;
}

PointEstimates neighborhood_model(const AggregateData& data) {
    const Moments m = moments(data);
    double xy = 0.0;
    for (const NeighborhoodRecord& r : data.records) xy += r.p * r.x * r.y;
    PointEstimates est;
    est.method = EstimatorKind::neighborhood_model;
    est.y1 = xy / m.ex;
    est.y0 = (m.ey - xy) / (1.0 - m.ex);
    est.d = est.y1 - est.y0;
    est.feasible = true;
    return est;
}

}  // namespace monotone_ei
