#ifndef TRACEGEN_STATS_HPP
#define TRACEGEN_STATS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tracegen/moebius.hpp"
#include "tracegen/trace.hpp"

namespace tracegen {

// One generated trace: either a completed finite output or a prefix of a
// conceptually infinite one.
struct SampleTrace {
    Trace trace;
    bool complete = true;
};

// Deterministic seeded source: sample index -> trace. Estimators invoke it
// concurrently on distinct indices, so it must not share mutable state.
using TraceSource = std::function<SampleTrace(std::uint64_t)>;

struct EstimateReport {
    double estimate = 0.0;
    double stderror = 0.0;
    std::size_t samples = 0;
    std::size_t undecided = 0;
    double ci_low = 0.0;  // estimate - 2.576 stderr (99%)
    double ci_high = 0.0; // estimate + 2.576 stderr

    bool contains(double value) const { return ci_low <= value && value <= ci_high; }
    std::string to_text() const;
    std::string to_kv() const;
};

struct FitBucket {
    std::string label;
    double expected = 0.0; // expected count
    std::size_t observed = 0;
};

struct FitReport {
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 1.0;
    std::size_t samples = 0;
    std::vector<FitBucket> buckets;

    std::string to_text() const;
    std::string to_kv() const;
};

// Upper tail of the chi-square distribution with `dof` degrees of freedom:
// P(X >= statistic).
double chi_square_p_value(double statistic, std::size_t dof);

// Fraction of sampled outputs that dominate x. Membership is decided on the
// sample itself when complete; an incomplete prefix not dominating x counts
// as a miss when it is at least |x| + slack pieces long and as undecided
// otherwise. More than 1% undecided samples is an error.
EstimateReport estimate_cylinder(const TraceMonoid& m, const TraceSource& source, const Trace& x,
                                 std::size_t samples, std::size_t slack = 64);

// Sample mean of |output| over complete outputs; incomplete samples are an
// error (the configuration should have been classified finite).
EstimateReport estimate_mean_length(const TraceSource& source, std::size_t samples);

// Chi-square goodness of fit of first-hitting-time samples against the
// distribution P_a(v) = f(v) on the hitting set of `a`. Traces longer than
// `horizon` fall into a merged tail bucket, as do buckets with expected
// count below 5. Every sample must lie in the hitting set; f must not
// classify Neither (non-Moebius valuations serve as negative controls).
FitReport fit_first_hitting(const TraceMonoid& m, const std::vector<Trace>& samples,
                            const Valuation& f, LetterId a, std::size_t horizon = 6);

// Two-sample chi-square on trace histograms with a shared tail bucket.
FitReport two_sample_fit(const TraceMonoid& m, const std::vector<Trace>& first,
                         const std::vector<Trace>& second);

} // namespace tracegen

#endif
