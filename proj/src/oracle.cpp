#include "monotone_ei/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "monotone_ei/estimators.hpp"
#include "monotone_ei/global_bounds.hpp"
#include "monotone_ei/rng.hpp"

namespace monotone_ei {

namespace {

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

}  // namespace

SyntheticTruth synthesize_population(const SynthConfig& config) {
    if (config.neighborhoods < 1) throw validation_error("need at least one neighborhood");
    if (config.min_size < 1 || config.max_size < config.min_size) {
        throw validation_error("invalid neighborhood size range");
    }
    if (!(config.bounds.lo < config.bounds.hi)) throw validation_error("invalid outcome bounds");
    if (config.prevalence_lo < 0.0 || config.prevalence_hi > 1.0 ||
        config.prevalence_lo > config.prevalence_hi) {
        throw validation_error("invalid prevalence range");
    }

    Rng rng(config.seed);
    const int n = config.neighborhoods;
    for (int attempt = 0; attempt < 200; ++attempt) {
        SyntheticTruth truth;
        truth.mu1 = config.mu1;
        truth.mu0 = config.mu0;
        truth.sizes.resize(n);
        truth.group1_counts.resize(n);
        truth.profile.y1.resize(n);
        truth.profile.y0.resize(n);

        std::vector<TableRow> rows(n);
        bool interior = false;
        for (int i = 0; i < n; ++i) {
            const long size = rng.uniform_int(config.min_size, config.max_size);
            const double x_raw = rng.uniform(config.prevalence_lo, config.prevalence_hi);
            const long k = std::lround(x_raw * static_cast<double>(size));
            const double x = static_cast<double>(k) / static_cast<double>(size);
            if (k > 0 && k < size) interior = true;

            const auto draw_mean = [&](const std::function<double(double)>& mu) {
                double v = mu ? mu(x) : rng.uniform(config.bounds.lo, config.bounds.hi);
                if (config.outcome_jitter > 0.0) {
                    v += config.outcome_jitter * rng.uniform(-1.0, 1.0);
                }
                return clamp(v, config.bounds.lo, config.bounds.hi);
            };
            const double y1 = draw_mean(config.mu1);
            const double y0 = draw_mean(config.mu0);

            truth.sizes[i] = size;
            truth.group1_counts[i] = k;
            truth.profile.y1[i] = y1;
            truth.profile.y0[i] = y0;
            rows[i] = TableRow{"n" + std::to_string(i + 1), static_cast<double>(size), x,
                               x * y1 + (1.0 - x) * y0};
        }
        if (!interior) continue;  // redraw; the aggregate view would be degenerate

        truth.data = load_aggregate(rows, config.bounds);

        // Truth fields straight from the finite population.
        double ex = 0.0;
        for (const NeighborhoodRecord& r : truth.data.records) ex += r.p * r.x;
        double x1 = 0.0, y1m = 0.0, xy1 = 0.0, x0 = 0.0, y0m = 0.0, xy0 = 0.0;
        for (std::size_t i = 0; i < truth.data.records.size(); ++i) {
            const NeighborhoodRecord& r = truth.data.records[i];
            const double w1 = r.p * r.x / ex;
            const double w0 = r.p * (1.0 - r.x) / (1.0 - ex);
            x1 += w1 * r.x;
            y1m += w1 * truth.profile.y1[i];
            xy1 += w1 * r.x * truth.profile.y1[i];
            x0 += w0 * r.x;
            y0m += w0 * truth.profile.y0[i];
            xy0 += w0 * r.x * truth.profile.y0[i];
            truth.delta_b += r.p * r.x * (1.0 - r.x) * (truth.profile.y1[i] - truth.profile.y0[i]);
        }
        truth.y1 = y1m;
        truth.y0 = y0m;
        truth.d = y1m - y0m;
        truth.delta_w = ex * (xy1 - x1 * y1m) + (1.0 - ex) * (xy0 - x0 * y0m);
        return truth;
    }
    throw degeneracy_error("could not synthesize a non-degenerate population from this configuration");
}

std::vector<MicroRecord> sample_micro(const SyntheticTruth& truth, std::size_t rows,
                                      std::uint64_t seed) {
    if (truth.data.bounds.lo != 0.0 || truth.data.bounds.hi != 1.0) {
        throw validation_error("micro sampling draws Bernoulli outcomes and needs [0, 1] bounds");
    }
    std::vector<double> cum(truth.sizes.size());
    double run = 0.0;
    for (std::size_t i = 0; i < truth.sizes.size(); ++i) {
        run += static_cast<double>(truth.sizes[i]);
        cum[i] = run;
    }
    Rng rng(seed);
    std::vector<MicroRecord> micro;
    micro.reserve(rows);
    for (std::size_t k = 0; k < rows; ++k) {
        const std::size_t i = rng.pick_cumulative(cum);
        const NeighborhoodRecord& r = truth.data.records[i];
        MicroRecord rec;
        rec.x = rng.bernoulli(r.x) ? 1 : 0;
        rec.y = rng.bernoulli(rec.x == 1 ? truth.profile.y1[i] : truth.profile.y0[i]) ? 1.0 : 0.0;
        rec.xn = r.x;
        rec.weight = 1.0;
        rec.stratum = r.id;
        micro.push_back(std::move(rec));
    }
    return micro;
}

void CellExtremes::include(double d, double y1, double y0) {
    if (d < d_lo) d_lo = d;
    if (d > d_hi) d_hi = d;
    if (y1 < y1_lo) y1_lo = y1;
    if (y1 > y1_hi) y1_hi = y1;
    if (y0 < y0_lo) y0_lo = y0;
    if (y0 > y0_hi) y0_hi = y0;
    ++count;
}

void CellExtremes::merge(const CellExtremes& other) {
    if (other.count == 0) return;
    d_lo = std::min(d_lo, other.d_lo);
    d_hi = std::max(d_hi, other.d_hi);
    y1_lo = std::min(y1_lo, other.y1_lo);
    y1_hi = std::max(y1_hi, other.y1_hi);
    y0_lo = std::min(y0_lo, other.y0_lo);
    y0_hi = std::max(y0_hi, other.y0_hi);
    count += other.count;
}

CellExtremes EnumerationResult::for_signs(SignAssumption within, SignAssumption between) const {
    if (within == SignAssumption::Zero || between == SignAssumption::Zero) {
        throw configuration_error("grid enumeration does not classify equality cells");
    }
    CellExtremes out;
    const auto want = [&](int pair_index) {
        const bool wpos = pair_index < 2;
        const bool bpos = pair_index % 2 == 0;
        const bool w_ok = within == SignAssumption::Unknown ||
                          (within == SignAssumption::NonNegative ? wpos : !wpos);
        const bool b_ok = between == SignAssumption::Unknown ||
                          (between == SignAssumption::NonNegative ? bpos : !bpos);
        return w_ok && b_ok;
    };
    if (within == SignAssumption::Unknown && between == SignAssumption::Unknown) return any;
    for (int i = 0; i < 4; ++i) {
        if (want(i)) out.merge(pairs[static_cast<std::size_t>(i)]);
    }
    return out;
}

CellExtremes EnumerationResult::contextual() const {
    CellExtremes out;
    out.merge(pairs[0]);
    out.merge(pairs[3]);
    return out;
}

namespace {

struct Axis {
    double base = 0.0;
    double step = 0.0;
    std::uint64_t count = 1;
};

void classify_and_include(EnumerationResult& acc, double d, double y1, double y0, double db,
                          double dw) {
    acc.any.include(d, y1, y0);
    const bool bp = db >= 0.0, bn = db <= 0.0;
    if (dw >= 0.0) {
        if (bp) acc.pairs[0].include(d, y1, y0);
        if (bn) acc.pairs[1].include(d, y1, y0);
    }
    if (dw <= 0.0) {
        if (bp) acc.pairs[2].include(d, y1, y0);
        if (bn) acc.pairs[3].include(d, y1, y0);
    }
}

}  // namespace

EnumerationResult enumerate_feasible(const AggregateData& data, int grid_points, std::uint64_t cap,
                                     int threads) {
    if (grid_points < 2) throw validation_error("grid_points must be at least 2");
    const Moments m = moments(data);
    const std::size_t n = data.records.size();

    std::vector<Axis> axes(n);
    std::vector<double> w1(n), w0(n), slope0(n), y0_at_base(n);
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        const NeighborhoodRecord& r = data.records[i];
        w1[i] = r.p * r.x / m.ex;
        w0[i] = r.p * (1.0 - r.x) / (1.0 - m.ex);
        const LocalMob mob = neighborhood_mob(r, data.bounds);
        if (r.x >= 1.0 || r.x <= 0.0) {
            axes[i] = Axis{r.y, 0.0, 1};  // saturated: the present group's mean is pinned
            slope0[i] = 0.0;
            y0_at_base[i] = r.y;
        } else {
            const double lo = mob.y1->lo, hi = mob.y1->hi;
            if (hi - lo <= 0.0) {
                axes[i] = Axis{lo, 0.0, 1};
            } else {
                axes[i] = Axis{lo, (hi - lo) / (grid_points - 1),
                               static_cast<std::uint64_t>(grid_points)};
            }
            slope0[i] = -r.x / (1.0 - r.x);  // d y0 / d y1 under the adding-up constraint
            y0_at_base[i] = (r.y - r.x * lo) / (1.0 - r.x);
        }
        if (total > cap / std::max<std::uint64_t>(axes[i].count, 1)) {
            std::ostringstream os;
            os << "enumeration would exceed the profile cap " << cap
               << "; use fewer grid points or raise the cap";
            throw enumeration_limit_error(os.str());
        }
        total *= axes[i].count;
    }

    // Innermost axis (largest grid) is swept incrementally; the five profile
    // statistics are affine in each coordinate, so one grid step is five adds.
    std::size_t inner = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (axes[i].count > axes[inner].count) inner = i;
    }
    std::vector<std::size_t> outer_axes;
    std::uint64_t outer_count = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == inner) continue;
        outer_axes.push_back(i);
        outer_count *= axes[i].count;
    }
    const std::uint64_t inner_count = axes[inner].count;

    const double x1m = [&] {  // group-conditional prevalence means (fixed data moments)
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) v += w1[i] * data.records[i].x;
        return v;
    }();
    const double x0m = [&] {
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) v += w0[i] * data.records[i].x;
        return v;
    }();

    // Increments for one inner grid step.
    double dA1 = 0.0, dA2 = 0.0, dA3 = 0.0, dA4 = 0.0, dA5 = 0.0;
    {
        const std::size_t j = inner;
        const double s = axes[j].step;
        const double xj = data.records[j].x;
        dA1 = w1[j] * s;
        dA2 = w1[j] * xj * s;
        dA3 = w0[j] * slope0[j] * s;
        dA4 = xj * dA3;
        dA5 = data.records[j].p * xj * s;
    }
    const double dD = dA1 - dA3;
    const double dDW = m.ex * (dA2 - x1m * dA1) + (1.0 - m.ex) * (dA4 - x0m * dA3);

    const auto run_range = [&](std::uint64_t from, std::uint64_t to, EnumerationResult& acc) {
        std::vector<std::uint64_t> digits(outer_axes.size(), 0);
        std::vector<double> y1v(n), y0v(n);
        for (std::uint64_t flat = from; flat < to; ++flat) {
            std::uint64_t rem = flat;
            for (std::size_t k = 0; k < outer_axes.size(); ++k) {
                const std::uint64_t c = axes[outer_axes[k]].count;
                digits[k] = rem % c;
                rem /= c;
            }
            for (std::size_t i = 0; i < n; ++i) {
                y1v[i] = axes[i].base;
                y0v[i] = y0_at_base[i];
            }
            for (std::size_t k = 0; k < outer_axes.size(); ++k) {
                const std::size_t i = outer_axes[k];
                y1v[i] = axes[i].base + axes[i].step * static_cast<double>(digits[k]);
                y0v[i] = y0_at_base[i] + slope0[i] * (y1v[i] - axes[i].base);
            }
            // Base statistics from the definitions (inner coordinate at its base).
            double A1 = 0.0, A2 = 0.0, A3 = 0.0, A4 = 0.0, A5 = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const NeighborhoodRecord& r = data.records[i];
                A1 += w1[i] * y1v[i];
                A2 += w1[i] * r.x * y1v[i];
                A3 += w0[i] * y0v[i];
                A4 += w0[i] * r.x * y0v[i];
                A5 += r.p * r.x * (1.0 - r.x) * (y1v[i] - y0v[i]);
            }
            double d = A1 - A3;
            double y1 = A1, y0 = A3;
            double db = A5;
            double dw = m.ex * (A2 - x1m * A1) + (1.0 - m.ex) * (A4 - x0m * A3);
            for (std::uint64_t g = 0;;) {
                classify_and_include(acc, d, y1, y0, db, dw);
                if (++g >= inner_count) break;
                d += dD;
                y1 += dA1;
                y0 += dA3;
                db += dA5;
                dw += dDW;
            }
        }
    };

    EnumerationResult result;
    result.grid_points = grid_points;
    result.total_profiles = total;

    const int workers =
        std::max(1, std::min<int>(threads, static_cast<int>(std::min<std::uint64_t>(outer_count, 64))));
    if (workers == 1) {
        run_range(0, outer_count, result);
    } else {
        std::vector<EnumerationResult> partial(static_cast<std::size_t>(workers));
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (outer_count + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const std::uint64_t from = chunk * static_cast<std::uint64_t>(w);
            const std::uint64_t to = std::min(outer_count, from + chunk);
            if (from >= to) break;
            pool.emplace_back([&, from, to, w]() { run_range(from, to, partial[w]); });
        }
        for (std::thread& t : pool) t.join();
        for (const EnumerationResult& p : partial) {
            result.any.merge(p.any);
            for (std::size_t i = 0; i < 4; ++i) result.pairs[i].merge(p.pairs[i]);
        }
    }
    return result;
}

EnumerationResult enumerate_local(const NeighborhoodRecord& record, const OutcomeBounds& bounds,
                                  int grid_points, std::optional<double> slope) {
    if (grid_points < 2) throw validation_error("grid_points must be at least 2");
    EnumerationResult result;
    result.grid_points = grid_points;
    const LocalMob mob = neighborhood_mob(record, bounds);
    if (!mob.d) return result;  // saturated: nothing to enumerate

    const double lo = mob.y1->lo, hi = mob.y1->hi;
    const std::uint64_t count = hi - lo <= 0.0 ? 1 : static_cast<std::uint64_t>(grid_points);
    const double step = count > 1 ? (hi - lo) / (grid_points - 1) : 0.0;
    result.total_profiles = count;
    for (std::uint64_t g = 0; g < count; ++g) {
        const double y1 = lo + step * static_cast<double>(g);
        const double y0 = (record.y - record.x * y1) / (1.0 - record.x);
        const double d = y1 - y0;
        // The local between sign is the sign of the difference itself; the
        // local within sign compares the difference against the derivative.
        const double db = d;
        const double dw = slope ? *slope - d : 0.0;
        classify_and_include(result, d, y1, y0, db, slope ? dw : 0.0);
    }
    return result;
}

EnumerationResult enumerate_tilde(const AggregateData& data, const TildeGroup& group,
                                  int grid_points, std::optional<double> slope, std::uint64_t cap) {
    if (grid_points < 2) throw validation_error("grid_points must be at least 2");
    EnumerationResult result;
    result.grid_points = grid_points;
    if (!group.mob.d) return result;

    const std::size_t k = group.members.size();
    std::vector<Axis> axes(k);
    std::uint64_t total = 1;
    for (std::size_t j = 0; j < k; ++j) {
        const NeighborhoodRecord& r = data.records[group.members[j]];
        const LocalMob mob = neighborhood_mob(r, data.bounds);
        const double lo = mob.y1->lo, hi = mob.y1->hi;
        axes[j] = hi - lo <= 0.0
                      ? Axis{lo, 0.0, 1}
                      : Axis{lo, (hi - lo) / (grid_points - 1), static_cast<std::uint64_t>(grid_points)};
        if (total > cap / axes[j].count) {
            throw enumeration_limit_error("pooled-group enumeration would exceed the profile cap");
        }
        total *= axes[j].count;
    }
    result.total_profiles = total;

    std::vector<std::uint64_t> digits(k, 0);
    for (std::uint64_t flat = 0; flat < total; ++flat) {
        std::uint64_t rem = flat;
        double y1 = 0.0, y0 = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const std::uint64_t c = axes[j].count;
            const std::uint64_t g = rem % c;
            rem /= c;
            const NeighborhoodRecord& r = data.records[group.members[j]];
            const double y1j = axes[j].base + axes[j].step * static_cast<double>(g);
            const double y0j = (r.y - r.x * y1j) / (1.0 - r.x);
            y1 += group.weights[j] * y1j;
            y0 += group.weights[j] * y0j;
        }
        const double d = y1 - y0;
        const double dw = slope ? *slope - d : 0.0;
        classify_and_include(result, d, y1, y0, d, slope ? dw : 0.0);
    }
    return result;
}

void SharpnessReport::record(std::string name, bool ok, double analytic, double enumerated,
                             double tol) {
    checks.push_back(EndpointCheck{std::move(name), ok, analytic, enumerated, tol});
    if (!ok) pass = false;
}

namespace {

double extreme_lo(const CellExtremes& c, Target t) {
    switch (t) {
        case Target::difference: return c.d_lo;
        case Target::group1: return c.y1_lo;
        case Target::group0: return c.y0_lo;
    }
    return c.d_lo;
}

double extreme_hi(const CellExtremes& c, Target t) {
    switch (t) {
        case Target::difference: return c.d_hi;
        case Target::group1: return c.y1_hi;
        case Target::group0: return c.y0_hi;
    }
    return c.d_hi;
}

double er_point(const BoundsInputs& in, Target t) {
    switch (t) {
        case Target::difference: return in.d_er;
        case Target::group1: return in.y1_er;
        case Target::group0: return in.y0_er;
    }
    return in.d_er;
}

double nm_point(const BoundsInputs& in, Target t) {
    switch (t) {
        case Target::difference: return in.d_nm;
        case Target::group1: return in.y1_nm;
        case Target::group0: return in.y0_nm;
    }
    return in.d_nm;
}

// Shared comparison of one analytic interval against one enumerated cell.
void check_target(SharpnessReport& rep, const std::string& base, Target t,
                  const Interval& analytic, bool zero_cell,
                  const std::vector<double>& zero_points, const CellExtremes& region,
                  double tol) {
    if (zero_cell) {
        // Equality cells are audited by point feasibility: the implied point
        // must sit inside the enumerated extremes of the remaining condition
        // (and the points must agree when both associations are pinned).
        bool feasible = !region.empty();
        for (double p : zero_points) {
            feasible = feasible && p >= extreme_lo(region, t) - tol && p <= extreme_hi(region, t) + tol;
        }
        if (zero_points.size() == 2) {
            feasible = feasible && std::abs(zero_points[0] - zero_points[1]) <= tol;
        }
        if (analytic.rejected()) {
            rep.record(base + " zero-cell rejection agreement", !feasible, analytic.lo,
                       region.empty() ? 0.0 : extreme_lo(region, t), tol);
        } else {
            rep.record(base + " zero-cell point feasible", feasible, zero_points.front(),
                       region.empty() ? 0.0 : extreme_lo(region, t), tol);
            rep.record(base + " zero-cell lo", std::abs(analytic.lo - zero_points.front()) <= tol,
                       analytic.lo, zero_points.front(), tol);
            rep.record(base + " zero-cell hi", std::abs(analytic.hi - zero_points.back()) <= tol,
                       analytic.hi, zero_points.back(), tol);
        }
        return;
    }
    if (region.empty()) {
        rep.record(base + " rejection agreement", analytic.rejected(), analytic.lo, 0.0, tol);
        return;
    }
    if (analytic.rejected()) {
        rep.record(base + " rejection agreement", false, analytic.lo, extreme_lo(region, t), tol);
        return;
    }
    rep.record(base + " lo", std::abs(analytic.lo - extreme_lo(region, t)) <= tol, analytic.lo,
               extreme_lo(region, t), tol);
    rep.record(base + " hi", std::abs(analytic.hi - extreme_hi(region, t)) <= tol, analytic.hi,
               extreme_hi(region, t), tol);
}

}  // namespace

SharpnessReport sharpness_check(const AggregateData& data, const AssumptionSet& assumptions,
                                int grid_points, std::uint64_t cap, int threads) {
    SharpnessReport rep;
    const EnumerationResult enumerated = enumerate_feasible(data, grid_points, cap, threads);
    const double span = data.bounds.hi - data.bounds.lo;

    for (Target t : {Target::difference, Target::group1, Target::group0}) {
        const BoundsReport analytic =
            t == Target::difference
                ? bounds_for_d(data, assumptions)
                : bounds_for_mean(data, t == Target::group1 ? 1 : 0, assumptions);
        const double range = t == Target::difference ? 2.0 * span : span;
        const double tol = 2.0 / (grid_points - 1) * range;
        const AssumptionSet& cell = analytic.cell;
        const std::string base = to_string(t);

        const bool zero_cell = cell.within == SignAssumption::Zero ||
                               cell.between == SignAssumption::Zero;
        std::vector<double> zero_points;
        CellExtremes region;
        if (zero_cell) {
            if (cell.within == SignAssumption::Zero) zero_points.push_back(er_point(analytic.inputs, t));
            if (cell.between == SignAssumption::Zero) zero_points.push_back(nm_point(analytic.inputs, t));
            region = enumerated.for_signs(
                cell.within == SignAssumption::Zero ? SignAssumption::Unknown : cell.within,
                cell.between == SignAssumption::Zero ? SignAssumption::Unknown : cell.between);
        } else if (analytic.cr_applied && assumptions.within == SignAssumption::Unknown &&
                   assumptions.between == SignAssumption::Unknown) {
            region = enumerated.contextual();
        } else {
            region = enumerated.for_signs(cell.within, cell.between);
        }
        check_target(rep, base, t, analytic.interval, zero_cell, zero_points, region, tol);
    }
    return rep;
}

SharpnessReport local_sharpness_check(const NeighborhoodRecord& record, const OutcomeBounds& bounds,
                                      const AssumptionSet& assumptions, std::optional<double> slope,
                                      int grid_points) {
    SharpnessReport rep;
    const LocalBoundsReport analytic =
        local_monotone_bounds(record, bounds, assumptions, slope, true);
    if (!analytic.d) {  // saturated neighborhood: nothing to audit
        rep.record("saturated neighborhood (skipped)", true, 0.0, 0.0, 0.0);
        return rep;
    }
    const EnumerationResult enumerated = enumerate_local(record, bounds, grid_points, slope);
    const double span = bounds.hi - bounds.lo;
    const AssumptionSet& cell = analytic.cell;
    const bool zero_cell =
        cell.within == SignAssumption::Zero || cell.between == SignAssumption::Zero;

    const auto region_for = [&]() -> CellExtremes {
        if (zero_cell) {
            return enumerated.for_signs(
                cell.within == SignAssumption::Zero ? SignAssumption::Unknown : cell.within,
                cell.between == SignAssumption::Zero ? SignAssumption::Unknown : cell.between);
        }
        if (analytic.cr_applied && assumptions.within == SignAssumption::Unknown &&
            assumptions.between == SignAssumption::Unknown) {
            return enumerated.contextual();
        }
        return enumerated.for_signs(cell.within, cell.between);
    };
    const CellExtremes region = region_for();

    // The equality points map through y1 = y + (1-x) d and y0 = y - x d.
    const auto zero_points_for = [&](Target t) {
        std::vector<double> pts;
        const auto push = [&](double d_val) {
            switch (t) {
                case Target::difference: pts.push_back(d_val); break;
                case Target::group1: pts.push_back(record.y + (1.0 - record.x) * d_val); break;
                case Target::group0: pts.push_back(record.y - record.x * d_val); break;
            }
        };
        if (cell.within == SignAssumption::Zero) push(*slope);
        if (cell.between == SignAssumption::Zero) push(0.0);
        return pts;
    };

    const auto interval_for = [&](Target t) {
        switch (t) {
            case Target::difference: return *analytic.d;
            case Target::group1: return *analytic.y1;
            case Target::group0: return *analytic.y0;
        }
        return *analytic.d;
    };

    for (Target t : {Target::difference, Target::group1, Target::group0}) {
        const double range = t == Target::difference ? 2.0 * span : span;
        const double tol = 2.0 / (grid_points - 1) * range;
        check_target(rep, std::string("local ") + to_string(t), t, interval_for(t), zero_cell,
                     zero_points_for(t), region, tol);
    }
    return rep;
}

SharpnessReport tilde_sharpness_check(const AggregateData& data, const TildeGroup& group,
                                      const AssumptionSet& assumptions, std::optional<double> slope,
                                      int grid_points, std::uint64_t cap) {
    SharpnessReport rep;
    const LocalBoundsReport analytic =
        tilde_monotone_bounds(group, data.bounds, assumptions, slope, true);
    if (!analytic.d) {
        rep.record("saturated prevalence group (skipped)", true, 0.0, 0.0, 0.0);
        return rep;
    }
    const EnumerationResult enumerated = enumerate_tilde(data, group, grid_points, slope, cap);
    const double span = data.bounds.hi - data.bounds.lo;
    const AssumptionSet& cell = analytic.cell;
    const bool zero_cell =
        cell.within == SignAssumption::Zero || cell.between == SignAssumption::Zero;

    CellExtremes region;
    if (zero_cell) {
        region = enumerated.for_signs(
            cell.within == SignAssumption::Zero ? SignAssumption::Unknown : cell.within,
            cell.between == SignAssumption::Zero ? SignAssumption::Unknown : cell.between);
    } else if (analytic.cr_applied && assumptions.within == SignAssumption::Unknown &&
               assumptions.between == SignAssumption::Unknown) {
        region = enumerated.contextual();
    } else {
        region = enumerated.for_signs(cell.within, cell.between);
    }

    const auto zero_points_for = [&](Target t) {
        std::vector<double> pts;
        const auto push = [&](double d_val) {
            switch (t) {
                case Target::difference: pts.push_back(d_val); break;
                case Target::group1: pts.push_back(group.y + (1.0 - group.x) * d_val); break;
                case Target::group0: pts.push_back(group.y - group.x * d_val); break;
            }
        };
        if (cell.within == SignAssumption::Zero) push(*slope);
        if (cell.between == SignAssumption::Zero) push(0.0);
        return pts;
    };
    const auto interval_for = [&](Target t) {
        switch (t) {
            case Target::difference: return *analytic.d;
            case Target::group1: return *analytic.y1;
            case Target::group0: return *analytic.y0;
        }
        return *analytic.d;
    };

    for (Target t : {Target::difference, Target::group1, Target::group0}) {
        const double range = t == Target::difference ? 2.0 * span : span;
        const double tol = 2.0 / (grid_points - 1) * range;
        check_target(rep, std::string("tilde ") + to_string(t), t, interval_for(t), zero_cell,
                     zero_points_for(t), region, tol);
    }
    return rep;
}

}  // namespace monotone_ei
