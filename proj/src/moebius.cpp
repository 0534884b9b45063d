#include "tracegen/moebius.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace tracegen {

namespace {

constexpr double kEpsilonTolerance = 1e-9;  // h(e) = 0 test
constexpr double kRootTolerance = 1e-12;

std::string format_number(double v) {
    double r = std::round(v);
    if (std::abs(v - r) < 1e-12 && std::abs(r) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.0f", r);
        return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

} // namespace

Polynomial::Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
    while (!coeffs_.empty() && coeffs_.back() == 0.0)
        coeffs_.pop_back();
}

double Polynomial::operator()(double t) const {
    double acc = 0.0;
    for (std::size_t k = coeffs_.size(); k-- > 0;)
        acc = acc * t + coeffs_[k];
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1)
        return Polynomial{};
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k)
        d[k - 1] = static_cast<double>(k) * coeffs_[k];
    return Polynomial(std::move(d));
}

std::string Polynomial::to_string() const {
    if (coeffs_.empty())
        return "0";
    std::string s;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        double c = coeffs_[k];
        if (c == 0.0 && coeffs_.size() > 1)
            continue;
        if (s.empty()) {
            s += (c < 0 ? "-" : "");
        } else {
            s += (c < 0 ? " - " : " + ");
        }
        s += format_number(std::abs(c));
        if (k == 1)
            s += "t";
        else if (k >= 2)
            s += "t^" + std::to_string(k);
    }
    return s;
}

Valuation::Valuation(const TraceMonoid& m, std::vector<double> weights_by_letter)
    : monoid_(m), weights_(std::move(weights_by_letter)), domain_(0) {
    if (weights_.size() != m.letter_count())
        throw InputError("valuation needs one weight slot per letter (use 0 for letters outside the domain)");
    for (LetterId a = 0; a < weights_.size(); ++a) {
        if (weights_[a] < 0.0)
            throw InputError("valuation weights must be positive; " + m.name(a) + " is negative");
        if (weights_[a] > 0.0)
            domain_ |= letter_bit(a);
    }
    if (domain_ == 0)
        throw InputError("valuation has an empty domain");
}

Valuation Valuation::uniform(const TraceMonoid& m, double p) {
    if (p <= 0.0)
        throw InputError("uniform valuation needs a positive weight");
    return Valuation(m, std::vector<double>(m.letter_count(), p));
}

Valuation Valuation::from_names(const TraceMonoid& m, const std::map<std::string, double>& weights) {
    std::vector<double> w(m.letter_count(), 0.0);
    for (const auto& [name, value] : weights) {
        if (value <= 0.0)
            throw InputError("valuation weight for " + name + " must be positive");
        w[m.letter(name)] = value;
    }
    return Valuation(m, std::move(w));
}

double Valuation::weight(LetterId a) const {
    monoid_.check_letter(a);
    if ((domain_ & letter_bit(a)) == 0)
        throw InputError("letter " + monoid_.name(a) + " is outside the valuation's domain");
    return weights_[a];
}

double Valuation::of_clique(CliqueMask c) const {
    double prod = 1.0;
    for (LetterId a : clique_letters(c))
        prod *= weight(a);
    return prod;
}

double Valuation::of_trace(const Trace& t) const {
    double prod = 1.0;
    for (CliqueMask c : t.cliques)
        prod *= of_clique(c);
    return prod;
}

Valuation Valuation::restricted(CliqueMask letters) const {
    std::vector<double> w(weights_.size(), 0.0);
    CliqueMask keep = domain_ & letters;
    for (LetterId a : clique_letters(keep))
        w[a] = weights_[a];
    return Valuation(monoid_, std::move(w));
}

Valuation Valuation::without(LetterId a) const {
    monoid_.check_letter(a);
    return restricted(domain_ & ~letter_bit(a));
}

Valuation Valuation::with_weight(LetterId a, double w) const {
    monoid_.check_letter(a);
    if (w <= 0.0)
        throw InputError("valuation weight must be positive");
    std::vector<double> ws = weights_;
    ws[a] = w;
    return Valuation(monoid_, std::move(ws));
}

double MoebiusTransform::at(CliqueMask c) const {
    auto it = std::lower_bound(values.begin(), values.end(), c,
                               [](const auto& kv, CliqueMask key) { return kv.first < key; });
    if (it == values.end() || it->first != c)
        throw InputError("no Moebius transform value for the requested clique");
    return it->second;
}

Polynomial moebius_polynomial(const TraceMonoid& m, std::size_t budget) {
    std::vector<double> coeffs(m.letter_count() + 1, 0.0);
    std::size_t max_size = 0;
    for (CliqueMask c : enumerate_cliques(m, budget)) {
        std::size_t k = static_cast<std::size_t>(clique_size(c));
        coeffs[k] += (k % 2 == 0) ? 1.0 : -1.0;
        max_size = std::max(max_size, k);
    }
    coeffs.resize(max_size + 1);
    return Polynomial(std::move(coeffs));
}

namespace {

// Sum over cliques contained in `allowed` of (-1)^{|c|} f(c), by DFS.
double alternating_clique_sum(const TraceMonoid& m, const Valuation& f, CliqueMask allowed) {
    double total = 1.0; // empty clique
    std::vector<std::pair<CliqueMask, double>> stack; // (candidates, signed partial product)
    stack.emplace_back(allowed, 1.0);
    while (!stack.empty()) {
        auto [candidates, prod] = stack.back();
        stack.pop_back();
        while (candidates != 0) {
            LetterId a = static_cast<LetterId>(std::countr_zero(candidates));
            candidates &= candidates - 1;
            double next = -prod * f.weight(a);
            total += next;
            CliqueMask ext = candidates & m.indep_mask(a);
            if (ext != 0)
                stack.emplace_back(ext, next);
        }
    }
    return total;
}

} // namespace

double multivariate_eval(const TraceMonoid& m, const Valuation& f, CliqueMask restrict_to) {
    CliqueMask allowed = f.domain();
    for (LetterId b : clique_letters(restrict_to))
        allowed &= m.indep_mask(b);
    return alternating_clique_sum(m, f, allowed);
}

double smallest_root(const TraceMonoid& m) {
    return smallest_root(moebius_polynomial(m));
}

double smallest_root(const Polynomial& mu) {
    if (mu.degree() < 1)
        throw InternalError("Moebius polynomial is constant; no root to find");
    // mu(0) = 1 and the smallest-modulus root is the first positive real
    // zero, so a sign scan followed by bisection brackets it.
    const double step = 1.0 / 4096.0;
    double lo = 0.0, hi = 0.0;
    bool bracketed = false;
    for (double t = step; t <= 1.0 + step / 2; t += step) {
        double v = mu(std::min(t, 1.0));
        if (v <= 0.0) {
            hi = std::min(t, 1.0);
            lo = hi - step;
            bracketed = true;
            break;
        }
    }
    if (!bracketed)
        throw InternalError("no root of the Moebius polynomial in (0, 1]");
    while (hi - lo > kRootTolerance) {
        double mid = 0.5 * (lo + hi);
        if (mu(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<long long> growth_coefficients(const TraceMonoid& m, std::size_t n) {
    Polynomial mu = moebius_polynomial(m);
    std::vector<long long> mu_int(static_cast<std::size_t>(mu.degree()) + 1);
    for (std::size_t k = 0; k < mu_int.size(); ++k)
        mu_int[k] = std::llround(mu.coefficient(k));
    std::vector<long long> lambda(n + 1, 0);
    lambda[0] = 1;
    for (std::size_t i = 1; i <= n; ++i) {
        __int128 acc = 0;
        for (std::size_t k = 1; k < mu_int.size() && k <= i; ++k)
            acc -= static_cast<__int128>(mu_int[k]) * lambda[i - k];
        if (acc < 0)
            throw InternalError("growth coefficient went negative");
        if (acc > std::numeric_limits<long long>::max())
            throw ResourceError("growth coefficient overflows at degree " + std::to_string(i));
        lambda[i] = static_cast<long long>(acc);
    }
    return lambda;
}

MoebiusTransform moebius_transform(const TraceMonoid& m, const Valuation& f) {
    std::vector<CliqueMask> cliques = enumerate_cliques(m);
    // Keep only cliques within the valuation's domain.
    std::vector<CliqueMask> domain_cliques;
    for (CliqueMask c : cliques)
        if ((c & ~f.domain()) == 0)
            domain_cliques.push_back(c);

    MoebiusTransform h;
    h.values.reserve(domain_cliques.size());
    for (CliqueMask c : domain_cliques) {
        double acc = 0.0;
        int base = clique_size(c);
        for (CliqueMask cp : domain_cliques) {
            if ((cp & c) != c)
                continue; // need c' >= c, i.e. c' contains c
            int sign = ((clique_size(cp) - base) % 2 == 0) ? 1 : -1;
            acc += sign * f.of_clique(cp);
        }
        h.values.emplace_back(c, acc);
    }
    h.epsilon = h.at(0);
    return h;
}

Classification classify_valuation(const TraceMonoid& m, const Valuation& f) {
    MoebiusTransform h = moebius_transform(m, f);
    for (const auto& [c, value] : h.values) {
        if (c == 0)
            continue;
        if (value <= kEpsilonTolerance) {
            std::string diag = "h(" + trace_to_string(m, Trace{{c}}) + ") = " +
                               std::to_string(value) + " is not clearly positive";
            return {ValuationClass::Neither, h.epsilon, diag};
        }
    }
    if (std::abs(h.epsilon) <= kEpsilonTolerance)
        return {ValuationClass::Moebius, h.epsilon, ""};
    if (h.epsilon > 0.0)
        return {ValuationClass::SubMoebius, h.epsilon, ""};
    return {ValuationClass::Neither, h.epsilon,
            "h(e) = " + std::to_string(h.epsilon) + " is negative"};
}

bool is_irreducible(const TraceMonoid& m) {
    std::vector<LetterId> stack{0};
    CliqueMask seen = letter_bit(0);
    while (!stack.empty()) {
        LetterId a = stack.back();
        stack.pop_back();
        CliqueMask fresh = m.dep_mask(a) & ~seen;
        seen |= fresh;
        for (LetterId b : clique_letters(fresh))
            stack.push_back(b);
    }
    return seen == m.universe();
}

Valuation extend_valuation(const TraceMonoid& m, LetterId a, const Valuation& f_prime) {
    m.check_letter(a);
    if (!is_irreducible(m))
        throw InputError("valuation extension requires an irreducible monoid");
    if ((f_prime.domain() & letter_bit(a)) != 0)
        throw InputError("letter " + m.name(a) + " must lie outside the domain of the restricted valuation");
    if ((f_prime.domain() | letter_bit(a)) != m.universe())
        throw InputError("restricted valuation must cover all letters except " + m.name(a));
    Classification cls = classify_valuation(m, f_prime);
    if (cls.kind != ValuationClass::SubMoebius)
        throw InputError("restricted valuation must be sub-Moebius to admit a Moebius extension");

    double h_empty = multivariate_eval(m, f_prime, 0);
    // K' = sum over nonempty cliques of M' parallel to a of (-1)^{|d|+1} f'(d);
    // with the sign flipped this is the alternating clique sum minus 1.
    CliqueMask parallel = f_prime.domain() & m.indep_mask(a);
    double k_prime = -(alternating_clique_sum(m, f_prime, parallel) - 1.0);
    double k = 1.0 - k_prime;
    if (k <= 0.0)
        throw InternalError("extension constant K must be positive for an irreducible monoid");
    double t = h_empty / k;
    if (t <= 0.0)
        throw InternalError("extended weight must be positive");
    return f_prime.with_weight(a, t);
}

} // namespace tracegen
