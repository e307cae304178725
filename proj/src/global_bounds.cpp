#include "monotone_ei/global_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "monotone_ei/core.hpp"

namespace monotone_ei {

const char* to_string(Target t) {
    switch (t) {
        case Target::difference: return "d";
        case Target::group1: return "y1";
        case Target::group0: return "y0";
    }
    return "d";
}

MobEstimates method_of_bounds(const AggregateData& data) {
    const Moments m = moments(data);
    const double lo = data.bounds.lo, hi = data.bounds.hi;
    double y1_hi = 0.0, y1_lo = 0.0, y0_hi = 0.0, y0_lo = 0.0;
    for (const NeighborhoodRecord& r : data.records) {
        y1_hi += r.p * std::min(r.y - lo * (1.0 - r.x), hi * r.x);
        y1_lo += r.p * std::max(r.y - hi * (1.0 - r.x), lo * r.x);
        y0_hi += r.p * std::min(r.y - lo * r.x, hi * (1.0 - r.x));
        y0_lo += r.p * std::max(r.y - hi * r.x, lo * (1.0 - r.x));
    }
    MobEstimates mob;
    mob.y1 = Interval::make(y1_lo / m.ex, y1_hi / m.ex);
    mob.y0 = Interval::make(y0_lo / (1.0 - m.ex), y0_hi / (1.0 - m.ex));
    mob.d = Interval::make(mob.y1.lo - mob.y0.hi, mob.y1.hi - mob.y0.lo);
    return mob;
}

BoundsInputs compute_bounds_inputs(const AggregateData& data, bool need_er) {
    BoundsInputs in;
    in.m = moments(data);
    const PointEstimates nm = neighborhood_model(data);
    in.d_nm = nm.d;
    in.y1_nm = nm.y1;
    in.y0_nm = nm.y0;
    in.mob = method_of_bounds(data);
    if (need_er) {
        const PointEstimates er = ecological_regression(data);  // may throw no_variation_error
        in.er_defined = true;
        in.d_er = er.d;
        in.y1_er = er.y1;
        in.y0_er = er.y0;
    }
    return in;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

struct LabeledValue {
    double value = 0.0;
    std::string label;
};

// Intersection of one-sided constraints, keeping the binding labels.
struct IntervalBuilder {
    LabeledValue lower;
    LabeledValue upper;

    void raise_lower(double v, const std::string& label) {
        if (v > lower.value) lower = {v, label};
    }
    void cut_upper(double v, const std::string& label) {
        if (v < upper.value) upper = {v, label};
    }
};

// Per-target arithmetic: which estimate each sign assumption compares the
// target against, and the direction of the inequality. A nonnegative
// within-group association caps the difference and the group-1 mean at the
// regression estimate but floors the group-0 mean; the neighborhood-model
// directions mirror accordingly.
struct CellArithmetic {
    Interval envelope;
    double er = 0.0;
    double nm = 0.0;
    bool er_caps_above = true;  // within >= 0  =>  target <= er   (else target >= er)
    bool nm_caps_below = true;  // between >= 0 =>  target >= nm   (else target <= nm)
    std::string er_name, nm_name, mob_lo_name, mob_hi_name;
};

CellArithmetic cell_arithmetic(Target target, const BoundsInputs& in) {
    CellArithmetic c;
    switch (target) {
        case Target::difference:
            c.envelope = in.mob.d;
            c.er = in.d_er;
            c.nm = in.d_nm;
            c.er_name = "D_ER";
            c.nm_name = "D_NM";
            c.mob_lo_name = "D_MOB-";
            c.mob_hi_name = "D_MOB+";
            break;
        case Target::group1:
            c.envelope = in.mob.y1;
            c.er = in.y1_er;
            c.nm = in.y1_nm;
            c.er_name = "Y1_ER";
            c.nm_name = "Y1_NM";
            c.mob_lo_name = "Y1_MOB-";
            c.mob_hi_name = "Y1_MOB+";
            break;
        case Target::group0:
            c.envelope = in.mob.y0;
            c.er = in.y0_er;
            c.nm = in.y0_nm;
            c.er_caps_above = false;
            c.nm_caps_below = false;
            c.er_name = "Y0_ER";
            c.nm_name = "Y0_NM";
            c.mob_lo_name = "Y0_MOB-";
            c.mob_hi_name = "Y0_MOB+";
            break;
    }
    return c;
}

BoundsReport evaluate_cell(const AggregateData& data, Target target, const AssumptionSet& requested) {
    requested.validate();
    AssumptionSet cell = requested;
    int implied_sign = 0;
    bool cr_tie = false;

    // Contextual reinforcement: a single declared strict sign forces the
    // other association to share it; with no declared sign, the branch is
    // read off the data. A declared Zero already satisfies the condition
    // and propagates nothing.
    const bool cr = requested.contextual_reinforcement;
    if (cr) {
        const bool w_strict = requested.within == SignAssumption::NonNegative ||
                              requested.within == SignAssumption::NonPositive;
        const bool b_strict = requested.between == SignAssumption::NonNegative ||
                              requested.between == SignAssumption::NonPositive;
        if (w_strict && requested.between == SignAssumption::Unknown) cell.between = requested.within;
        if (b_strict && requested.within == SignAssumption::Unknown) cell.within = requested.between;
    }

    const bool cr_branch = cr && cell.within == SignAssumption::Unknown &&
                           cell.between == SignAssumption::Unknown;
    const bool need_er = cr_branch || cell.within != SignAssumption::Unknown;

    BoundsReport report;
    report.target = target;
    report.requested = requested;
    report.cr_applied = cr;
    report.inputs = compute_bounds_inputs(data, need_er);

    if (cr_branch) {
        const double diff = report.inputs.d_er - report.inputs.d_nm;
        if (diff > 0.0) {
            cell.within = cell.between = SignAssumption::NonNegative;
            implied_sign = 1;
        } else if (diff < 0.0) {
            cell.within = cell.between = SignAssumption::NonPositive;
            implied_sign = -1;
        } else {
            cr_tie = true;  // both branches coincide: point identification
        }
    }
    report.cell = cell;
    report.implied_sign = implied_sign;

    const CellArithmetic a = cell_arithmetic(target, report.inputs);

    if (cr_tie) {
        report.interval = Interval::point(a.nm);
        report.lo_source = report.hi_source = a.nm_name;
        return report;
    }

    IntervalBuilder b;
    b.lower = {a.envelope.lo, a.mob_lo_name};
    b.upper = {a.envelope.hi, a.mob_hi_name};

    const auto apply = [&](SignAssumption sign, double value, bool nonneg_caps_below,
                           const std::string& name) {
        // nonneg_caps_below: a NonNegative declaration makes `value` a lower
        // bound for the target (and NonPositive an upper bound).
        switch (sign) {
            case SignAssumption::Unknown:
                break;
            case SignAssumption::NonNegative:
                if (nonneg_caps_below) b.raise_lower(value, name);
                else b.cut_upper(value, name);
                break;
            case SignAssumption::NonPositive:
                if (nonneg_caps_below) b.cut_upper(value, name);
                else b.raise_lower(value, name);
                break;
            case SignAssumption::Zero:
                b.raise_lower(value, name);
                b.cut_upper(value, name);
                break;
        }
    };
    apply(cell.within, a.er, !a.er_caps_above, a.er_name);
    apply(cell.between, a.nm, a.nm_caps_below, a.nm_name);

    report.interval = Interval::make(b.lower.value, b.upper.value);
    report.lo_source = b.lower.label;
    report.hi_source = b.upper.label;
    if (report.interval.rejected()) {
        std::ostringstream os;
        os << "assumptions rejected by the data: lower bound " << b.lower.label << " = "
           << fmt(b.lower.value) << " exceeds upper bound " << b.upper.label << " = "
           << fmt(b.upper.value);
        report.rejection_reason = os.str();
    }
    return report;
}

}  // namespace

BoundsReport bounds_for_d(const AggregateData& data, const AssumptionSet& assumptions) {
    return evaluate_cell(data, Target::difference, assumptions);
}

BoundsReport bounds_for_mean(const AggregateData& data, int group, const AssumptionSet& assumptions) {
    if (group != 0 && group != 1) {
        throw configuration_error("group must be 0 or 1");
    }
    return evaluate_cell(data, group == 1 ? Target::group1 : Target::group0, assumptions);
}

AggregateData collapse_group(const MultiGroupData& data, std::size_t g) {
    if (data.rows.empty()) throw validation_error("input table has no rows");
    const std::size_t groups = data.rows.front().shares.size();
    if (groups < 2) throw validation_error("multi-group data needs at least two group shares");
    if (g >= groups) {
        std::ostringstream os;
        os << "group index " << g << " out of range (have " << groups << " groups)";
        throw validation_error(os.str());
    }
    std::vector<TableRow> rows;
    rows.reserve(data.rows.size());
    for (std::size_t i = 0; i < data.rows.size(); ++i) {
        const MultiGroupRow& r = data.rows[i];
        if (r.shares.size() != groups) {
            std::ostringstream os;
            os << "row " << (i + 1) << " (id '" << r.id << "'): expected " << groups
               << " shares, got " << r.shares.size();
            throw validation_error(os.str());
        }
        double sum = 0.0;
        for (double s : r.shares) {
            if (s < 0.0 || s > 1.0) {
                std::ostringstream os;
                os << "row " << (i + 1) << " (id '" << r.id << "'): share outside [0, 1]";
                throw validation_error(os.str());
            }
            sum += s;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            std::ostringstream os;
            os << "row " << (i + 1) << " (id '" << r.id << "'): shares sum to " << fmt(sum)
               << ", expected 1";
            throw validation_error(os.str());
        }
        rows.push_back(TableRow{r.id, r.population, r.shares[g], r.y_mean});
    }
    return load_aggregate(rows, data.bounds);
}

BoundsReport multi_group_bounds(const MultiGroupData& data, std::size_t g,
                                const AssumptionSet& assumptions) {
    // Fully segregated group: its mean is the weighted average over the
    // neighborhoods it fills, point-identified without any assumptions.
    bool segregated = true;
    double member_pop = 0.0, member_py = 0.0, total_pop = 0.0;
    for (const MultiGroupRow& r : data.rows) {
        if (g >= r.shares.size()) break;  // collapse_group reports the shape error
        const double s = r.shares[g];
        if (s > 1e-12 && s < 1.0 - 1e-12) {
            segregated = false;
            break;
        }
        total_pop += r.population;
        if (s >= 1.0 - 1e-12) {
            member_pop += r.population;
            member_py += r.population * r.y_mean;
        }
    }
    if (segregated && !data.rows.empty() && g < data.rows.front().shares.size()) {
        if (member_pop <= 0.0) {
            std::ostringstream os;
            os << "group " << g << " has no population";
            throw degeneracy_error(os.str());
        }
        BoundsReport report;
        report.target = Target::group1;
        report.requested = assumptions;
        report.cell = assumptions;
        report.interval = Interval::point(member_py / member_pop);
        report.lo_source = report.hi_source = "segregated group mean";
        report.inputs.mob.y1 = report.interval;
        return report;
    }
    const AggregateData collapsed = collapse_group(data, g);
    return bounds_for_mean(collapsed, 1, assumptions);
}

}  // namespace monotone_ei
