#include "tracegen/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "tracegen/parallel.hpp"

namespace tracegen {

namespace {

constexpr double kZ99 = 2.576; // 99% two-sided normal quantile

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), format, v);
    return buf;
}

// Regularized lower incomplete gamma P(a, x) by series expansion.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 1000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16)
            break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x) by Lentz's continued fraction.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16)
            break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

EstimateReport make_report(double estimate, double stderror, std::size_t samples,
                           std::size_t undecided) {
    EstimateReport r;
    r.estimate = estimate;
    r.stderror = stderror;
    r.samples = samples;
    r.undecided = undecided;
    r.ci_low = estimate - kZ99 * stderror;
    r.ci_high = estimate + kZ99 * stderror;
    return r;
}

} // namespace

std::string EstimateReport::to_text() const {
    return fmt("%.6f", estimate) + " +/- " + fmt("%.6f", stderror) + "  (99% CI [" +
           fmt("%.6f", ci_low) + ", " + fmt("%.6f", ci_high) + "], n=" + std::to_string(samples) +
           (undecided ? ", undecided=" + std::to_string(undecided) : "") + ")";
}

std::string EstimateReport::to_kv() const {
    return "estimate=" + fmt("%.12g", estimate) + "\nstderr=" + fmt("%.12g", stderror) +
           "\nsamples=" + std::to_string(samples) + "\nundecided=" + std::to_string(undecided) +
           "\nci_low=" + fmt("%.12g", ci_low) + "\nci_high=" + fmt("%.12g", ci_high) + "\n";
}

std::string FitReport::to_text() const {
    std::string s = "chi2=" + fmt("%.4f", statistic) + " dof=" + std::to_string(dof) +
                    " p=" + fmt("%.6g", p_value) + " (n=" + std::to_string(samples) + ")\n";
    std::size_t width = 6;
    for (const auto& b : buckets)
        width = std::max(width, b.label.size());
    for (const auto& b : buckets) {
        s += "  " + b.label + std::string(width - b.label.size(), ' ') + "  observed=" +
             std::to_string(b.observed) + "  expected=" + fmt("%.2f", b.expected) + "\n";
    }
    return s;
}

std::string FitReport::to_kv() const {
    return "chi2=" + fmt("%.12g", statistic) + "\ndof=" + std::to_string(dof) +
           "\np_value=" + fmt("%.12g", p_value) + "\nsamples=" + std::to_string(samples) +
           "\nbuckets=" + std::to_string(buckets.size()) + "\n";
}

double chi_square_p_value(double statistic, std::size_t dof) {
    if (statistic < 0.0)
        throw InputError("chi-square statistic must be nonnegative");
    if (dof == 0)
        return statistic > 0.0 ? 0.0 : 1.0;
    double a = 0.5 * static_cast<double>(dof);
    double x = 0.5 * statistic;
    if (x == 0.0)
        return 1.0;
    if (x < a + 1.0)
        return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

EstimateReport estimate_cylinder(const TraceMonoid& m, const TraceSource& source, const Trace& x,
                                 std::size_t samples, std::size_t slack) {
    if (samples == 0)
        throw InputError("cylinder estimation needs at least one sample");
    validate_trace(m, x);
    const std::size_t need = x.length() + slack;
    // Sample generation parallelizes across indices; aggregation below is
    // sequential in shard order.
    std::vector<std::size_t> shard_hits(kShards, 0), shard_undecided(kShards, 0);
    run_sharded(samples, [&](std::size_t shard, std::size_t begin, std::size_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
            SampleTrace s = source(i);
            if (left_divide(m, x, s.trace))
                ++shard_hits[shard];
            else if (!s.complete && s.trace.length() < need)
                ++shard_undecided[shard];
        }
    });
    std::size_t hits = 0, undecided = 0;
    for (std::size_t s = 0; s < kShards; ++s) {
        hits += shard_hits[s];
        undecided += shard_undecided[s];
    }
    if (undecided * 100 > samples)
        throw InputError("cylinder estimate inconclusive: " + std::to_string(undecided) +
                         " of " + std::to_string(samples) + " samples were undecided");
    std::size_t decided = samples - undecided;
    double p = static_cast<double>(hits) / static_cast<double>(decided);
    double se = std::sqrt(p * (1.0 - p) / static_cast<double>(decided));
    EstimateReport r = make_report(p, se, decided, undecided);
    return r;
}

EstimateReport estimate_mean_length(const TraceSource& source, std::size_t samples) {
    if (samples == 0)
        throw InputError("mean length estimation needs at least one sample");
    std::vector<double> shard_sum(kShards, 0.0), shard_sumsq(kShards, 0.0);
    run_sharded(samples, [&](std::size_t shard, std::size_t begin, std::size_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
            SampleTrace s = source(i);
            if (!s.complete)
                throw InputError("mean length needs complete outputs; "
                                 "the generator's configuration classifies infinite");
            double len = static_cast<double>(s.trace.length());
            shard_sum[shard] += len;
            shard_sumsq[shard] += len * len;
        }
    });
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t s = 0; s < kShards; ++s) {
        sum += shard_sum[s];
        sumsq += shard_sumsq[s];
    }
    double n = static_cast<double>(samples);
    double mean = sum / n;
    double variance = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
    return make_report(mean, std::sqrt(variance / n), samples, 0);
}

namespace {

FitReport assemble_fit(std::vector<FitBucket> buckets, std::size_t samples,
                       std::size_t estimated_params) {
    // Merge under-populated buckets (expected < 5) into the last (tail) one.
    FitReport report;
    report.samples = samples;
    FitBucket tail = buckets.back();
    buckets.pop_back();
    std::vector<FitBucket> kept;
    for (auto& b : buckets) {
        if (b.expected < 5.0) {
            tail.expected += b.expected;
            tail.observed += b.observed;
        } else {
            kept.push_back(std::move(b));
        }
    }
    if (tail.expected >= 5.0 || kept.empty()) {
        if (tail.expected > 0.0 || tail.observed > 0)
            kept.push_back(std::move(tail));
    } else if (tail.expected > 0.0 || tail.observed > 0) {
        // An under-populated tail folds into the last regular bucket.
        kept.back().label += " +tail";
        kept.back().expected += tail.expected;
        kept.back().observed += tail.observed;
    }
    if (kept.size() < 2) {
        report.buckets = std::move(kept);
        report.dof = 0;
        report.p_value = 1.0;
        return report;
    }
    double stat = 0.0;
    for (const auto& b : kept) {
        double diff = static_cast<double>(b.observed) - b.expected;
        stat += diff * diff / b.expected;
    }
    report.buckets = std::move(kept);
    report.statistic = stat;
    report.dof = report.buckets.size() - 1 - estimated_params;
    report.p_value = chi_square_p_value(stat, report.dof);
    return report;
}

} // namespace

FitReport fit_first_hitting(const TraceMonoid& m, const std::vector<Trace>& samples,
                            const Valuation& f, LetterId a, std::size_t horizon) {
    if (samples.empty())
        throw InputError("fit needs samples");
    Classification cls = classify_valuation(m, f);
    if (cls.kind == ValuationClass::Neither)
        throw InputError("fit valuation classifies as Neither: " + cls.diagnostic);
    for (const Trace& v : samples)
        if (!in_hitting_set(m, v, a))
            throw InputError("fit sample outside the hitting set: " + trace_to_string(m, v));

    // Expected masses on hitting-set members up to the horizon, tail beyond.
    std::map<Trace, std::size_t> index;
    std::vector<FitBucket> buckets;
    double mass = 0.0;
    for (const Trace& v : enumerate_traces(m, horizon)) {
        if (v.empty() || !in_hitting_set(m, v, a))
            continue;
        double p = f.of_trace(v);
        mass += p;
        index.emplace(v, buckets.size());
        buckets.push_back({trace_to_string(m, v), p * static_cast<double>(samples.size()), 0});
    }
    double tail_mass = 1.0 - mass;
    if (tail_mass < -1e-9)
        throw InputError("valuation mass on the hitting set exceeds 1; not a Moebius valuation");
    buckets.push_back({"(longer)", std::max(0.0, tail_mass) * static_cast<double>(samples.size()), 0});

    for (const Trace& v : samples) {
        auto it = index.find(v);
        std::size_t slot = it != index.end() ? it->second : buckets.size() - 1;
        ++buckets[slot].observed;
    }
    return assemble_fit(std::move(buckets), samples.size(), 0);
}

FitReport two_sample_fit(const TraceMonoid& m, const std::vector<Trace>& first,
                         const std::vector<Trace>& second) {
    if (first.empty() || second.empty())
        throw InputError("two-sample fit needs samples on both sides");
    std::map<Trace, std::pair<std::size_t, std::size_t>> counts;
    for (const Trace& v : first)
        ++counts[v].first;
    for (const Trace& v : second)
        ++counts[v].second;

    // Merge sparse cells (combined count < 10) into one tail cell.
    std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> cells;
    std::pair<std::size_t, std::size_t> tail{0, 0};
    for (const auto& [v, rs] : counts) {
        if (rs.first + rs.second < 10) {
            tail.first += rs.first;
            tail.second += rs.second;
        } else {
            cells.emplace_back(trace_to_string(m, v), rs);
        }
    }
    if (tail.first + tail.second > 0)
        cells.emplace_back("(merged)", tail);

    FitReport report;
    report.samples = first.size() + second.size();
    double n1 = static_cast<double>(first.size());
    double n2 = static_cast<double>(second.size());
    double k1 = std::sqrt(n2 / n1);
    double k2 = std::sqrt(n1 / n2);
    double stat = 0.0;
    for (const auto& [label, rs] : cells) {
        double r = static_cast<double>(rs.first);
        double s = static_cast<double>(rs.second);
        double num = k1 * r - k2 * s;
        stat += num * num / (r + s);
        report.buckets.push_back({label, r * n2 / n1, rs.second});
    }
    report.statistic = stat;
    report.dof = cells.size() > 1 ? cells.size() - 1 : 0;
    report.p_value = chi_square_p_value(stat, report.dof);
    return report;
}

} // namespace tracegen
