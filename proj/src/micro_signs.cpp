#include "monotone_ei/micro_signs.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "monotone_ei/errors.hpp"

namespace monotone_ei {

namespace {

struct StratumStats {
    std::vector<std::size_t> rows;  // indices of rows with positive weight
    double weight = 0.0;
};

}  // namespace

CovarianceEstimate conditional_covariance(const std::vector<CovRow>& rows) {
    if (rows.empty()) throw insufficient_data_error("no rows supplied");

    // First-appearance order keeps the reduction deterministic.
    std::vector<std::string> order;
    std::map<std::string, StratumStats> strata;
    double total_weight = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const CovRow& r = rows[i];
        if (!std::isfinite(r.a) || !std::isfinite(r.b) || !std::isfinite(r.weight)) {
            throw validation_error("row " + std::to_string(i + 1) + ": non-finite value");
        }
        if (r.weight < 0.0) {
            throw validation_error("row " + std::to_string(i + 1) + ": negative weight");
        }
        total_weight += r.weight;
        if (r.weight == 0.0) continue;
        auto [it, inserted] = strata.try_emplace(r.stratum);
        if (inserted) order.push_back(r.stratum);
        it->second.rows.push_back(i);
        it->second.weight += r.weight;
    }
    if (total_weight <= 0.0) throw insufficient_data_error("all row weights are zero");

    CovarianceEstimate est;
    double variance = 0.0;
    for (const std::string& name : order) {
        const StratumStats& s = strata[name];
        const std::size_t n_c = s.rows.size();
        if (n_c < 2) {
            ++est.strata_dropped;
            continue;
        }
        double abar = 0.0, bbar = 0.0;
        for (std::size_t i : s.rows) {
            abar += rows[i].weight * rows[i].a;
            bbar += rows[i].weight * rows[i].b;
        }
        abar /= s.weight;
        bbar /= s.weight;
        double saa = 0.0, sab = 0.0;
        for (std::size_t i : s.rows) {
            const double da = rows[i].a - abar;
            saa += rows[i].weight * da * da;
            sab += rows[i].weight * da * (rows[i].b - bbar);
        }
        if (saa <= 0.0) {  // no variation in A within this stratum
            ++est.strata_dropped;
            continue;
        }
        const double pr = s.weight / total_weight;
        const double var_a = (saa / s.weight) * (static_cast<double>(n_c) / (n_c - 1));
        const double beta = sab / saa;
        // Classical WLS residual variance; two points fit exactly (zero dof,
        // zero residuals), so the guard keeps the SE at zero there.
        double sse = 0.0;
        for (std::size_t i : s.rows) {
            const double e = (rows[i].b - bbar) - beta * (rows[i].a - abar);
            sse += rows[i].weight * e * e;
        }
        const double sigma2 = sse / std::max<double>(static_cast<double>(n_c) - 2.0, 1.0);
        const double se_beta2 = sigma2 / saa;

        est.theta += pr * var_a * beta;
        variance += pr * pr * var_a * var_a * se_beta2;
        ++est.strata_used;
    }
    if (est.strata_used == 0) {
        throw insufficient_data_error(
            "no stratum has at least two weighted rows with variation in the conditioning variable");
    }
    est.se = std::sqrt(variance);
    return est;
}

namespace {

std::string bin_label(double xn, double width) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "bin%ld", std::lround(xn / width));
    return buf;
}

}  // namespace

DeltaSignEstimates estimate_delta_signs(const std::vector<MicroRecord>& micro, double xn_bin_width) {
    if (micro.empty()) throw insufficient_data_error("no micro rows supplied");
    if (!(xn_bin_width > 0.0)) throw validation_error("xn_bin_width must be positive");
    for (std::size_t i = 0; i < micro.size(); ++i) {
        const MicroRecord& r = micro[i];
        if (r.x != 0 && r.x != 1) {
            throw validation_error("row " + std::to_string(i + 1) + ": group indicator must be 0 or 1");
        }
        if (r.xn < 0.0 || r.xn > 1.0) {
            throw validation_error("row " + std::to_string(i + 1) + ": neighborhood prevalence outside [0, 1]");
        }
        if (r.weight < 0.0) {
            throw validation_error("row " + std::to_string(i + 1) + ": negative weight");
        }
    }

    DeltaSignEstimates out;

    // Within-group association: covariance of prevalence and outcome inside
    // each group.
    {
        std::vector<CovRow> rows;
        rows.reserve(micro.size());
        for (const MicroRecord& r : micro) {
            rows.push_back(CovRow{r.xn, r.y, r.weight, r.x == 1 ? "x1" : "x0"});
        }
        try {
            out.delta_w = conditional_covariance(rows);
        } catch (const insufficient_data_error& e) {
            out.delta_w_issue = e.what();
        }
    }

    // Between-group association: covariance of membership and outcome inside
    // prevalence bins (values rounded to the nearest multiple of the width).
    {
        std::vector<CovRow> rows;
        rows.reserve(micro.size());
        for (const MicroRecord& r : micro) {
            rows.push_back(CovRow{static_cast<double>(r.x), r.y, r.weight, bin_label(r.xn, xn_bin_width)});
        }
        try {
            out.delta_b = conditional_covariance(rows);
        } catch (const insufficient_data_error& e) {
            out.delta_b_issue = e.what();
        }
    }

    if (!out.delta_w && !out.delta_b) {
        throw insufficient_data_error("neither association is estimable: within-group side: " +
                                      out.delta_w_issue + "; between-group side: " + out.delta_b_issue);
    }
    return out;
}

}  // namespace monotone_ei
