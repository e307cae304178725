#pragma once

#include "monotone_ei/types.hpp"

namespace monotone_ei {

enum class EstimatorKind { ecological_regression, neighborhood_model };

struct PointEstimates {
    double d = 0.0;
    double y1 = 0.0;
    double y0 = 0.0;
    EstimatorKind method = EstimatorKind::ecological_regression;
    // Ecological-regression means can land outside the outcome bounds; they
    // are returned as-is with this flag cleared rather than clamped.
    bool feasible = true;
};

// Weighted least squares of neighborhood outcome on prevalence, computed via
// centered cross-products. Throws no_variation_error when the prevalences
// carry (numerically) no variation.
PointEstimates ecological_regression(const AggregateData& data);

// Prevalence-weighted averages of neighborhood outcomes; always feasible.
PointEstimates neighborhood_model(const AggregateData& data);

}  // namespace monotone_ei
