#pragma once

#include <stdexcept>
#include <string>

namespace monotone_ei {

// Input-side failures: malformed tables, impossible configuration, degenerate
// data. The CLI maps these to exit code 1.
class input_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Statistical failures on otherwise valid input (undefined estimators,
// insufficient data, exhausted resamples). The CLI maps these to exit code 2.
class stat_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class validation_error : public input_error {
public:
    using input_error::input_error;
};

// Violations of the non-degeneracy requirement (no neighborhood with positive
// share and interior prevalence) or a degenerate overall group share.
class degeneracy_error : public input_error {
public:
    using input_error::input_error;
};

class configuration_error : public input_error {
public:
    using input_error::input_error;
};

// A candidate group-means profile that does not reproduce the observed data.
class feasibility_error : public input_error {
public:
    using input_error::input_error;
};

class enumeration_limit_error : public input_error {
public:
    using input_error::input_error;
};

class not_found_error : public input_error {
public:
    using input_error::input_error;
};

class no_variation_error : public stat_error {
public:
    using stat_error::stat_error;
};

class undefined_derivative_error : public stat_error {
public:
    using stat_error::stat_error;
};

class bandwidth_grid_error : public stat_error {
public:
    using stat_error::stat_error;
};

class insufficient_data_error : public stat_error {
public:
    using stat_error::stat_error;
};

class bootstrap_failure_error : public stat_error {
public:
    using stat_error::stat_error;
};

}  // namespace monotone_ei
