#include "monotone_ei/local_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "monotone_ei/errors.hpp"
#include "monotone_ei/rng.hpp"

namespace monotone_ei {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

LocalMob neighborhood_mob(const NeighborhoodRecord& record, const OutcomeBounds& bounds) {
    const double lo = bounds.lo, hi = bounds.hi;
    const double x = record.x, y = record.y;
    LocalMob mob;
    if (x >= 1.0) {
        mob.y1 = Interval::point(y);
        return mob;
    }
    if (x <= 0.0) {
        mob.y0 = Interval::point(y);
        return mob;
    }
    const double y1_hi = std::min((y - lo * (1.0 - x)) / x, hi);
    const double y1_lo = std::max((y - hi * (1.0 - x)) / x, lo);
    const double y0_hi = std::min((y - lo * x) / (1.0 - x), hi);
    const double y0_lo = std::max((y - hi * x) / (1.0 - x), lo);
    mob.y1 = Interval::make(y1_lo, y1_hi);
    mob.y0 = Interval::make(y0_lo, y0_hi);
    mob.d = Interval::make(y1_lo - y0_hi, y1_hi - y0_lo);
    return mob;
}

namespace {

struct LinFit {
    double level = 0.0;
    double slope = 0.0;
    int effective_n = 0;
    bool ok = false;
};

// Weighted local-linear fit at x0. `skip_fold`/`fold_of` mask out held-out
// records during cross-validation (skip_fold < 0 disables masking).
LinFit fit_at(const AggregateData& data, double x0, double bandwidth,
              const std::vector<int>* fold_of = nullptr, int skip_fold = -1) {
    LinFit fit;
    double sw = 0.0, swx = 0.0, swy = 0.0;
    const std::size_t n = data.records.size();
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (fold_of && (*fold_of)[i] == skip_fold) continue;
        const NeighborhoodRecord& r = data.records[i];
        const double u = (r.x - x0) / bandwidth;
        if (u < -1.0 || u > 1.0) continue;
        const double wi = r.p * 0.75 * (1.0 - u * u);
        if (wi <= 0.0) continue;
        w[i] = wi;
        sw += wi;
        swx += wi * r.x;
        swy += wi * r.y;
        ++fit.effective_n;
    }
    if (fit.effective_n < 2 || sw <= 0.0) return fit;
    const double xbar = swx / sw, ybar = swy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (w[i] <= 0.0) continue;
        const double dx = data.records[i].x - xbar;
        sxx += w[i] * dx * dx;
        sxy += w[i] * dx * (data.records[i].y - ybar);
    }
    // Duplicated prevalences leave sxx at pure roundoff; refuse the slope.
    if (sxx <= 1e-24) return fit;
    fit.slope = sxy / sxx;
    fit.level = ybar + fit.slope * (x0 - xbar);
    fit.ok = true;
    return fit;
}

}  // namespace

DerivativeEstimate local_derivative(const AggregateData& data, double x0, double bandwidth) {
    if (!(bandwidth > 0.0)) throw validation_error("bandwidth must be positive");
    const LinFit fit = fit_at(data, x0, bandwidth);
    if (!fit.ok) {
        std::ostringstream os;
        os << "derivative undefined at x0 = " << fmt(x0) << " with bandwidth " << fmt(bandwidth)
           << ": " << (fit.effective_n < 2 ? "fewer than two neighborhoods carry kernel weight"
                                           : "no prevalence spread under the kernel weights");
        throw undefined_derivative_error(os.str());
    }
    return DerivativeEstimate{x0, fit.slope, bandwidth, fit.effective_n};
}

double local_linear_level(const AggregateData& data, double x0, double bandwidth) {
    if (!(bandwidth > 0.0)) throw validation_error("bandwidth must be positive");
    const LinFit fit = fit_at(data, x0, bandwidth);
    if (!fit.ok) {
        throw undefined_derivative_error("local-linear fit undefined at x0 = " + fmt(x0));
    }
    return fit.level;
}

std::vector<double> default_bandwidth_grid() {
    std::vector<double> grid;
    grid.reserve(15);
    const double lo = std::log(0.02), hi = std::log(0.5);
    for (int i = 0; i < 15; ++i) {
        grid.push_back(std::exp(lo + (hi - lo) * i / 14.0));
    }
    return grid;
}

double cv_bandwidth(const AggregateData& data, int folds, const std::vector<double>& candidates,
                    std::uint64_t seed) {
    if (folds < 2) throw validation_error("cross-validation needs at least 2 folds");
    if (candidates.empty()) throw validation_error("empty bandwidth candidate grid");
    const std::size_t n = data.records.size();
    if (static_cast<int>(n) < folds) {
        std::ostringstream os;
        os << "need at least " << folds << " neighborhoods for " << folds << "-fold cross-validation, have " << n;
        throw validation_error(os.str());
    }

    // Seeded permutation, then folds by position.
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(seed);
    rng.shuffle(perm);
    std::vector<int> fold_of(n, 0);
    for (std::size_t pos = 0; pos < n; ++pos) fold_of[perm[pos]] = static_cast<int>(pos % folds);

    std::vector<double> sorted(candidates);
    std::sort(sorted.begin(), sorted.end());

    bool have_best = false;
    double best_h = 0.0, best_err = 0.0;
    std::string first_failure;
    for (double h : sorted) {
        if (!(h > 0.0)) throw validation_error("bandwidth candidates must be positive");
        double err = 0.0;
        bool failed = false;
        for (int f = 0; f < folds && !failed; ++f) {
            for (std::size_t i = 0; i < n; ++i) {
                if (fold_of[i] != f) continue;
                const LinFit fit = fit_at(data, data.records[i].x, h, &fold_of, f);
                if (!fit.ok) {
                    if (first_failure.empty()) {
                        first_failure = "bandwidth " + fmt(h) + " leaves fold " + std::to_string(f) +
                                        " with an undefined fit at x = " + fmt(data.records[i].x);
                    }
                    failed = true;
                    break;
                }
                const double e = fit.level - data.records[i].y;
                err += data.records[i].p * e * e;
            }
        }
        if (failed) continue;
        // "<= best + tie tolerance" so exact ties go to the largest candidate.
        if (!have_best || err <= best_err + 1e-10 * (1.0 + std::abs(best_err))) {
            have_best = true;
            best_h = h;
            best_err = err;
        }
    }
    if (!have_best) {
        throw bandwidth_grid_error("every candidate bandwidth failed cross-validation; widen the grid (" +
                                   first_failure + ")");
    }
    return best_h;
}

namespace {

// Shared cell evaluation for a single neighborhood or a pooled prevalence
// group: everything reduces to an interval for the local difference, then
// maps onto the group means through y1 = y + (1-x) d and y0 = y - x d.
LocalBoundsReport local_cell_core(std::string id, double x, double y, const LocalMob& mob,
                                  const AssumptionSet& assumptions, std::optional<double> slope,
                                  bool shared_outcome_acknowledged) {
    assumptions.validate();
    LocalBoundsReport report;
    report.id = std::move(id);
    report.x = x;
    report.y = y;
    report.cell = assumptions;
    report.cr_applied = assumptions.contextual_reinforcement;
    report.slope = slope;

    if (!mob.d) {  // saturated neighborhood: one group absent, nothing to bound
        report.y1 = mob.y1;
        report.y0 = mob.y0;
        return report;
    }

    AssumptionSet cell = assumptions;
    const bool needs_slope_assumptions =
        assumptions.contextual_reinforcement || assumptions.within != SignAssumption::Unknown;
    if (needs_slope_assumptions && !shared_outcome_acknowledged) {
        throw configuration_error(
            "slope-based local bounds require acknowledging that neighborhoods sharing a prevalence "
            "share group means (shared_outcome_acknowledged)");
    }
    if (needs_slope_assumptions && !slope) {
        throw configuration_error("local cell requires an estimated derivative (slope) at this prevalence");
    }

    if (assumptions.contextual_reinforcement) {
        // The branch follows the derivative's sign unless a declared strict
        // sign already fixes it; a contradictory slope then rejects below.
        SignAssumption s;
        if (cell.within == SignAssumption::NonNegative || cell.between == SignAssumption::NonNegative) {
            s = SignAssumption::NonNegative;
        } else if (cell.within == SignAssumption::NonPositive || cell.between == SignAssumption::NonPositive) {
            s = SignAssumption::NonPositive;
        } else {
            s = *slope >= 0.0 ? SignAssumption::NonNegative : SignAssumption::NonPositive;
            report.implied_sign = *slope > 0.0 ? 1 : (*slope < 0.0 ? -1 : 0);
        }
        if (cell.within != SignAssumption::Zero) cell.within = s;
        if (cell.between != SignAssumption::Zero) cell.between = s;
    }
    report.cell = cell;

    double lo = mob.d->lo, hi = mob.d->hi;
    std::string lo_name = "D_MOB-", hi_name = "D_MOB+";
    const auto raise = [&](double v, const char* name) {
        if (v > lo) { lo = v; lo_name = name; }
    };
    const auto cut = [&](double v, const char* name) {
        if (v < hi) { hi = v; hi_name = name; }
    };
    switch (cell.between) {
        case SignAssumption::Unknown: break;
        case SignAssumption::NonNegative: raise(0.0, "0 (between sign)"); break;
        case SignAssumption::NonPositive: cut(0.0, "0 (between sign)"); break;
        case SignAssumption::Zero: raise(0.0, "0 (between sign)"); cut(0.0, "0 (between sign)"); break;
    }
    if (cell.within != SignAssumption::Unknown) {
        if (!slope) throw configuration_error("local cell requires an estimated derivative (slope)");
        switch (cell.within) {
            case SignAssumption::NonNegative: cut(*slope, "mu'(x) (within sign)"); break;
            case SignAssumption::NonPositive: raise(*slope, "mu'(x) (within sign)"); break;
            case SignAssumption::Zero:
                raise(*slope, "mu'(x) (within sign)");
                cut(*slope, "mu'(x) (within sign)");
                break;
            default: break;
        }
    }

    report.d = Interval::make(lo, hi);
    if (report.d->rejected()) {
        report.rejection_reason = "local cell rejected: lower bound " + lo_name + " = " + fmt(lo) +
                                  " exceeds upper bound " + hi_name + " = " + fmt(hi);
    }
    report.y1 = Interval::make(y + (1.0 - x) * lo, y + (1.0 - x) * hi);
    report.y0 = Interval::make(y - x * hi, y - x * lo);
    return report;
}

}  // namespace

LocalBoundsReport local_monotone_bounds(const NeighborhoodRecord& record, const OutcomeBounds& bounds,
                                        const AssumptionSet& assumptions,
                                        std::optional<double> slope,
                                        bool shared_outcome_acknowledged) {
    const LocalMob mob = neighborhood_mob(record, bounds);
    return local_cell_core(record.id, record.x, record.y, mob, assumptions, slope,
                           shared_outcome_acknowledged);
}

TildeGroup tilde_aggregate(const AggregateData& data, double prevalence, double tolerance) {
    if (tolerance < 0.0) throw validation_error("tolerance must be nonnegative");
    const auto round9 = [](double v) { return std::round(v * 1e9) / 1e9; };

    TildeGroup group;
    group.prevalence = prevalence;
    double total_p = 0.0;
    for (std::size_t i = 0; i < data.records.size(); ++i) {
        const double xi = data.records[i].x;
        const bool member = tolerance == 0.0
                                ? round9(xi) == round9(prevalence)
                                : std::abs(xi - prevalence) <= tolerance + 1e-15;
        if (!member) continue;
        group.members.push_back(i);
        group.ids.push_back(data.records[i].id);
        total_p += data.records[i].p;
    }
    if (group.members.empty()) {
        throw not_found_error("no neighborhood has prevalence " + fmt(prevalence) +
                              " within tolerance " + fmt(tolerance));
    }
    if (total_p <= 0.0) {
        throw degeneracy_error("prevalence group at " + fmt(prevalence) + " has zero population share");
    }

    bool have_y1 = true, have_y0 = true;
    double y1_lo = 0.0, y1_hi = 0.0, y0_lo = 0.0, y0_hi = 0.0;
    for (std::size_t i : group.members) {
        const NeighborhoodRecord& r = data.records[i];
        const double w = r.p / total_p;
        group.weights.push_back(w);
        group.x += w * r.x;
        group.y += w * r.y;
        const LocalMob mob = neighborhood_mob(r, data.bounds);
        if (mob.y1) {
            y1_lo += w * mob.y1->lo;
            y1_hi += w * mob.y1->hi;
        } else {
            have_y1 = false;
        }
        if (mob.y0) {
            y0_lo += w * mob.y0->lo;
            y0_hi += w * mob.y0->hi;
        } else {
            have_y0 = false;
        }
    }
    if (have_y1) group.mob.y1 = Interval::make(y1_lo, y1_hi);
    if (have_y0) group.mob.y0 = Interval::make(y0_lo, y0_hi);
    if (have_y1 && have_y0) group.mob.d = Interval::make(y1_lo - y0_hi, y1_hi - y0_lo);
    return group;
}

LocalBoundsReport tilde_monotone_bounds(const TildeGroup& group, const OutcomeBounds&,
                                        const AssumptionSet& assumptions,
                                        std::optional<double> slope,
                                        bool shared_outcome_acknowledged) {
    std::string id = "x=" + fmt(group.prevalence);
    return local_cell_core(std::move(id), group.x, group.y, group.mob, assumptions, slope,
                           shared_outcome_acknowledged);
}

}  // namespace monotone_ei
