#ifndef TRACEGEN_MOEBIUS_HPP
#define TRACEGEN_MOEBIUS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tracegen/monoid.hpp"
#include "tracegen/trace.hpp"

namespace tracegen {

// Real polynomial, coefficient index = degree, trailing zeros trimmed.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coefficients);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    double coefficient(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : 0.0; }
    const std::vector<double>& coefficients() const { return coeffs_; }

    double operator()(double t) const;
    Polynomial derivative() const;

    // "1 - 5t + 6t^2 - 1t^3"
    std::string to_string() const;

private:
    std::vector<double> coeffs_;
};

// A multiplicative weight on traces, determined by positive letter weights.
// The domain may be a proper subset of the alphabet, in which case the
// valuation lives on the submonoid generated by the domain. Holds its own
// copy of the monoid, so it stays valid independently of the source object.
class Valuation {
public:
    Valuation(const TraceMonoid& m, std::vector<double> weights_by_letter);
    static Valuation uniform(const TraceMonoid& m, double p);
    static Valuation from_names(const TraceMonoid& m, const std::map<std::string, double>& weights);

    const TraceMonoid& monoid() const { return monoid_; }
    CliqueMask domain() const { return domain_; }
    bool covers_all_letters() const { return domain_ == monoid_.universe(); }

    double weight(LetterId a) const;
    // Product of the letter weights of a clique (1 for the empty clique).
    double of_clique(CliqueMask c) const;
    double of_trace(const Trace& t) const;

    // Same weights restricted to the submonoid generated by `letters`.
    Valuation restricted(CliqueMask letters) const;
    // Restriction to the alphabet minus one letter.
    Valuation without(LetterId a) const;
    // Copy with one letter weight replaced/added.
    Valuation with_weight(LetterId a, double w) const;

private:
    TraceMonoid monoid_;
    std::vector<double> weights_;
    CliqueMask domain_;
};

// Moebius transform h of a valuation: h(c) = sum over cliques c' >= c of
// (-1)^{|c'|-|c|} f(c'). epsilon = h(empty).
struct MoebiusTransform {
    std::vector<std::pair<CliqueMask, double>> values; // ascending mask order
    double epsilon = 0.0;

    double at(CliqueMask c) const;
};

enum class ValuationClass { Moebius, SubMoebius, Neither };

struct Classification {
    ValuationClass kind;
    double epsilon;
    std::string diagnostic; // nonempty for Neither
};

// Univariate Moebius polynomial: coefficient of t^k is (-1)^k times the
// number of k-cliques.
Polynomial moebius_polynomial(const TraceMonoid& m, std::size_t budget = 10'000'000);

// Multivariate Moebius polynomial of the submonoid generated by the letters
// of f's domain that are parallel to `restrict_to`, evaluated at t_a = f(a).
// restrict_to = 0 evaluates the polynomial of the whole (sub)monoid.
double multivariate_eval(const TraceMonoid& m, const Valuation& f, CliqueMask restrict_to = 0);

// Root of smallest modulus of the Moebius polynomial; real, in (0, 1],
// located by bisection from the sign change after t = 0 (tolerance 1e-12).
double smallest_root(const TraceMonoid& m);
double smallest_root(const Polynomial& mu);

// First n+1 coefficients of the growth series 1/mu(t), by linear recurrence.
std::vector<long long> growth_coefficients(const TraceMonoid& m, std::size_t n);

// Direct evaluation of the alternating-sum transform on every clique of the
// domain. Agrees with the factored multivariate form within 1e-10.
MoebiusTransform moebius_transform(const TraceMonoid& m, const Valuation& f);

// Moebius iff h(e) = 0 (within 1e-9) and h > 0 on nonempty cliques;
// sub-Moebius iff h(e) > 0 and h > 0 on nonempty cliques.
Classification classify_valuation(const TraceMonoid& m, const Valuation& f);

// True iff the dependence graph (S, D) is connected.
bool is_irreducible(const TraceMonoid& m);

// Unique Moebius extension of a sub-Moebius valuation defined on the
// complement of `a` in an irreducible monoid. The new weight is
// f(a) = h'(e) / (1 - K') with K' an inclusion-exclusion sum over nonempty
// cliques of the submonoid parallel to a.
Valuation extend_valuation(const TraceMonoid& m, LetterId a, const Valuation& f_prime);

} // namespace tracegen

#endif
