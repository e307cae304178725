#include "monotone_ei/inference.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include "monotone_ei/errors.hpp"
#include "monotone_ei/rng.hpp"

namespace monotone_ei {

double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw validation_error("quantile level must be in (0, 1)");
    double lo = -10.0, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (normal_cdf(mid) < p) lo = mid; else hi = mid;
        if (hi - lo < 1e-13) break;
    }
    return 0.5 * (lo + hi);
}

namespace {

struct ReplicateOutcome {
    bool ok = false;
    double lo = 0.0, hi = 0.0;
    std::string failure;
};

ReplicateOutcome run_replicate(const AggregateData& data, const IntervalStatistic& statistic,
                               const std::vector<double>& cum, std::uint64_t seed) {
    Rng rng(seed);
    AggregateData resample;
    resample.bounds = data.bounds;
    resample.normalization = data.normalization;
    const std::size_t n = data.records.size();
    resample.records.reserve(n);
    double total = 0.0;
    bool interior = false;
    for (std::size_t k = 0; k < n; ++k) {
        const NeighborhoodRecord& r = data.records[rng.pick_cumulative(cum)];
        resample.records.push_back(r);
        total += r.p;
        if (r.p > 0.0 && r.x > 0.0 && r.x < 1.0) interior = true;
    }
    ReplicateOutcome out;
    if (!interior || total <= 0.0) {
        out.failure = "resample is degenerate (no interior-prevalence neighborhood drawn)";
        return out;
    }
    for (NeighborhoodRecord& r : resample.records) r.p /= total;
    try {
        const Interval value = statistic(resample);
        if (value.rejected()) {
            out.failure = "statistic rejected on the resample";
            return out;
        }
        out.ok = true;
        out.lo = value.lo;
        out.hi = value.hi;
    } catch (const std::exception& e) {
        out.failure = e.what();
    }
    return out;
}

double sample_sd(const std::vector<double>& v) {
    const std::size_t n = v.size();
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(n - 1));
}

}  // namespace

BootstrapResult bootstrap(const AggregateData& data, const IntervalStatistic& statistic,
                          int replicates, std::uint64_t seed, int threads) {
    if (replicates < 1) throw validation_error("replicates must be at least 1");
    if (data.records.empty()) throw validation_error("empty dataset");

    std::vector<double> cum(data.records.size());
    double run = 0.0;
    for (std::size_t i = 0; i < data.records.size(); ++i) {
        run += data.records[i].p;
        cum[i] = run;
    }

    std::vector<ReplicateOutcome> outcomes(static_cast<std::size_t>(replicates));
    const int workers = std::max(1, std::min(threads, replicates));
    if (workers == 1) {
        for (int k = 0; k < replicates; ++k) {
            outcomes[k] = run_replicate(data, statistic, cum, derive_seed(seed, k));
        }
    } else {
        std::vector<std::thread> pool;
        std::mutex next_mutex;
        int next = 0;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&]() {
                for (;;) {
                    int k;
                    {
                        std::lock_guard<std::mutex> lock(next_mutex);
                        if (next >= replicates) return;
                        k = next++;
                    }
                    outcomes[k] = run_replicate(data, statistic, cum, derive_seed(seed, k));
                }
            });
        }
        for (std::thread& t : pool) t.join();
    }

    BootstrapResult result;
    result.requested = replicates;
    result.seed = seed;
    for (const ReplicateOutcome& o : outcomes) {
        if (o.ok) {
            result.lo.push_back(o.lo);
            result.hi.push_back(o.hi);
        } else {
            ++result.failures;
            if (result.first_failure.empty()) result.first_failure = o.failure;
        }
    }
    if (result.lo.empty()) {
        throw bootstrap_failure_error("all " + std::to_string(replicates) +
                                      " bootstrap replicates failed; first failure: " +
                                      result.first_failure);
    }
    if (result.lo.size() >= 2) {
        result.se_lo = sample_sd(result.lo);
        result.se_hi = sample_sd(result.hi);
    }
    return result;
}

BootstrapResult bootstrap_scalar(const AggregateData& data, const ScalarStatistic& statistic,
                                 int replicates, std::uint64_t seed, int threads) {
    return bootstrap(
        data, [&statistic](const AggregateData& d) { return Interval::point(statistic(d)); },
        replicates, seed, threads);
}

ConfidenceInterval imbens_manski_ci(const Interval& interval, double se_lo, double se_hi,
                                    double level) {
    if (interval.rejected()) {
        throw validation_error("cannot build a confidence interval around a rejected identified set");
    }
    if (!(level > 0.0 && level < 1.0)) throw validation_error("level must be in (0, 1)");
    if (!(se_lo >= 0.0) || !(se_hi >= 0.0)) throw validation_error("standard errors must be nonnegative");
    if (!std::isfinite(interval.lo) || !std::isfinite(interval.hi) || !std::isfinite(se_lo) ||
        !std::isfinite(se_hi)) {
        throw validation_error("non-finite inputs");
    }

    const double se_max = std::max(se_lo, se_hi);
    double c;
    if (se_max == 0.0) {
        c = normal_quantile(level);  // one-sided limit; the interval is returned unchanged
    } else {
        const double ratio = (interval.hi - interval.lo) / se_max;
        double lo = 0.0, hi = 10.0;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            const double f = normal_cdf(mid + ratio) - normal_cdf(-mid) - level;
            if (f < 0.0) lo = mid; else hi = mid;
            if (hi - lo < 1e-10) break;
        }
        c = 0.5 * (lo + hi);
    }
    return ConfidenceInterval{interval.lo - c * se_lo, interval.hi + c * se_hi, level, c};
}

}  // namespace monotone_ei
