#include "monotone_ei/core.hpp"

#include <cmath>
#include <sstream>

namespace monotone_ei {

namespace {

std::string row_label(const std::string& id, std::size_t index) {
    std::ostringstream os;
    os << "row " << (index + 1) << " (id '" << id << "')";
    return os.str();
}

}  // namespace

AggregateData load_aggregate(const std::vector<TableRow>& rows, OutcomeBounds bounds) {
    if (rows.empty()) throw validation_error("input table has no rows");
    if (!(bounds.lo < bounds.hi)) {
        std::ostringstream os;
        os << "outcome bounds must satisfy lo < hi, got [" << bounds.lo << ", " << bounds.hi << "]";
        throw validation_error(os.str());
    }

    double total = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const TableRow& r = rows[i];
        if (!std::isfinite(r.population) || !std::isfinite(r.x_share) || !std::isfinite(r.y_mean)) {
            throw validation_error(row_label(r.id, i) + ": non-finite value");
        }
        if (r.population < 0.0) {
            throw validation_error(row_label(r.id, i) + ": negative population");
        }
        if (r.x_share < 0.0 || r.x_share > 1.0) {
            std::ostringstream os;
            os << row_label(r.id, i) << ": x_share " << r.x_share << " outside [0, 1]";
            throw validation_error(os.str());
        }
        if (r.y_mean < bounds.lo || r.y_mean > bounds.hi) {
            std::ostringstream os;
            os << row_label(r.id, i) << ": y_mean " << r.y_mean << " outside outcome bounds ["
               << bounds.lo << ", " << bounds.hi << "]";
            throw validation_error(os.str());
        }
        total += r.population;
    }
    if (total <= 0.0) throw validation_error("populations are all zero");

    AggregateData data;
    data.bounds = bounds;
    data.normalization = total;
    data.records.reserve(rows.size());
    bool interior = false;
    for (const TableRow& r : rows) {
        NeighborhoodRecord rec{r.id, r.population / total, r.x_share, r.y_mean};
        if (rec.p > 0.0 && rec.x > 0.0 && rec.x < 1.0) interior = true;
        data.records.push_back(std::move(rec));
    }
    if (!interior) {
        throw degeneracy_error(
            "degenerate data: no neighborhood has positive share and prevalence strictly inside (0, 1)");
    }
    return data;
}

Moments moments(const AggregateData& data) {
    Moments m;
    double ex2 = 0.0, exy = 0.0;
    for (const NeighborhoodRecord& r : data.records) {
        m.ex += r.p * r.x;
        m.ey += r.p * r.y;
        ex2 += r.p * r.x * r.x;
        exy += r.p * r.x * r.y;
    }
    m.var_x = m.ex * (1.0 - m.ex);
    if (m.var_x <= 0.0) {
        throw degeneracy_error("overall group share is 0 or 1; group moments are undefined");
    }
    m.var_xn = ex2 - m.ex * m.ex;
    if (m.var_xn < 0.0) m.var_xn = 0.0;  // roundoff guard
    m.gamma = m.var_xn / m.var_x;
    m.cov_xn_yn = exy - m.ex * m.ey;
    return m;
}

void require_feasible(const AggregateData& data, const GroupMeansProfile& profile) {
    const std::size_t n = data.records.size();
    if (profile.y1.size() != n || profile.y0.size() != n) {
        std::ostringstream os;
        os << "profile length (" << profile.y1.size() << ", " << profile.y0.size()
           << ") does not match record count " << n;
        throw feasibility_error(os.str());
    }
    const double lo = data.bounds.lo - kFeasibilityTol;
    const double hi = data.bounds.hi + kFeasibilityTol;
    for (std::size_t i = 0; i < n; ++i) {
        const NeighborhoodRecord& r = data.records[i];
        const double y1 = profile.y1[i];
        const double y0 = profile.y0[i];
        if (y1 < lo || y1 > hi || y0 < lo || y0 > hi) {
            throw feasibility_error(row_label(r.id, i) + ": profile mean outside outcome bounds");
        }
        const double recon = r.x * y1 + (1.0 - r.x) * y0;
        if (std::abs(recon - r.y) > kFeasibilityTol) {
            std::ostringstream os;
            os << row_label(r.id, i) << ": profile does not reproduce the neighborhood mean ("
               << recon << " vs " << r.y << ")";
            throw feasibility_error(os.str());
        }
    }
}

Deltas deltas_from_profile(const AggregateData& data, const GroupMeansProfile& profile) {
    require_feasible(data, profile);
    const Moments m = moments(data);

    // Group-conditional neighborhood weights via Bayes' rule:
    //   w1_n = p_n x_n / E[X],  w0_n = p_n (1-x_n) / (1-E[X]).
    double x1 = 0.0, y1m = 0.0, xy1 = 0.0;
    double x0 = 0.0, y0m = 0.0, xy0 = 0.0;
    double db = 0.0;
    for (std::size_t i = 0; i < data.records.size(); ++i) {
        const NeighborhoodRecord& r = data.records[i];
        const double w1 = r.p * r.x / m.ex;
        const double w0 = r.p * (1.0 - r.x) / (1.0 - m.ex);
        x1 += w1 * r.x;
        y1m += w1 * profile.y1[i];
        xy1 += w1 * r.x * profile.y1[i];
        x0 += w0 * r.x;
        y0m += w0 * profile.y0[i];
        xy0 += w0 * r.x * profile.y0[i];
        db += r.p * r.x * (1.0 - r.x) * (profile.y1[i] - profile.y0[i]);
    }
    const double cov1 = xy1 - x1 * y1m;
    const double cov0 = xy0 - x0 * y0m;
    return Deltas{db, m.ex * cov1 + (1.0 - m.ex) * cov0};
}

ProfileAggregates aggregate_profile(const AggregateData& data, const GroupMeansProfile& profile) {
    require_feasible(data, profile);
    const Moments m = moments(data);
    ProfileAggregates out;
    for (std::size_t i = 0; i < data.records.size(); ++i) {
        const NeighborhoodRecord& r = data.records[i];
        out.y1 += r.p * r.x / m.ex * profile.y1[i];
        out.y0 += r.p * (1.0 - r.x) / (1.0 - m.ex) * profile.y0[i];
    }
    out.d = out.y1 - out.y0;
    return out;
}

}  // namespace monotone_ei
