#include "qortho/hyper.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qortho/qcore.hpp"

namespace qortho {
namespace {

// Is x equal to q^{-m} for some m >= 0, to within kNearSingularThreshold?
bool is_inverse_q_power(cplx x, QBase q) {
    if (x == cplx{}) return false;
    cplx xqk = x;
    for (int k = 0; k < 100000 && std::abs(xqk) >= 0.5; ++k) {
        if (std::abs(1.0 - xqk) < kNearSingularThreshold) return true;
        xqk *= q.value();
    }
    return false;
}

}  // namespace

bool PhiSpec::terminating() const {
    return std::any_of(numerators.begin(), numerators.end(),
                       [this](cplx a) { return is_inverse_q_power(a, q); });
}

void PhiSpec::validate() const {
    for (std::size_t j = 0; j < denominators.size(); ++j) {
        if (is_inverse_q_power(denominators[j], q)) {
            throw DomainError("denominator parameter b_" + std::to_string(j + 1) +
                              " is of the form q^-m; the series is undefined");
        }
    }
    if (!terminating() && !(std::abs(z) < 1.0)) {
        throw DomainError("non-terminating series needs |z| < 1, got |z| = " + std::to_string(std::abs(z)));
    }
}

cplx phi_series(const PhiSpec& spec, const TruncationPolicy& policy) {
    policy.validate();
    spec.validate();

    const cplx q = spec.q.value();
    const std::size_t growth_limit = std::max<std::size_t>(20, spec.denominators.size());

    cplx term{1.0, 0.0};
    cplx sum{1.0, 0.0};
    cplx qk{1.0, 0.0};
    std::size_t small_run = 0;
    std::size_t growth_run = 0;

    for (std::size_t k = 0;; ++k) {
        if (k >= policy.max_terms) {
            throw TruncationExceeded("basic hypergeometric series not converged after " +
                                     std::to_string(policy.max_terms) + " terms");
        }
        cplx num = spec.z;
        for (const cplx a : spec.numerators) {
            const cplx factor = 1.0 - a * qk;
            if (std::abs(factor) < kNearSingularThreshold) return sum;  // terminates
            num *= factor;
        }
        cplx den = 1.0 - qk * q;
        for (const cplx b : spec.denominators) den *= 1.0 - b * qk;

        const cplx next = term * num / den;
        const double next_abs = std::abs(next);

        small_run = next_abs <= policy.rel_tol * std::abs(sum) ? small_run + 1 : 0;
        growth_run = next_abs > std::abs(term) ? growth_run + 1 : 0;
        if (growth_run >= growth_limit) {
            throw DivergentSeries("series terms grew for " + std::to_string(growth_run) + " consecutive indices");
        }

        sum += next;
        term = next;
        qk *= q;
        if (small_run >= 3) return sum;
    }
}

PhiSpec very_well_poised_spec(cplx a1, std::span<const cplx> rest, QBase q, cplx z) {
    const cplx root = std::sqrt(a1);
    const cplx qq = q.value();
    PhiSpec spec;
    spec.q = q;
    spec.z = z;
    spec.numerators = {a1, qq * root, -qq * root};
    spec.denominators = {root, -root};
    for (const cplx a : rest) {
        if (a == cplx{}) throw DomainError("very-well-poised parameters must be nonzero");
        spec.numerators.push_back(a);
        spec.denominators.push_back(qq * a1 / a);
    }
    return spec;
}

cplx very_well_poised(cplx a1, std::span<const cplx> rest, QBase q, cplx z, const TruncationPolicy& policy) {
    return phi_series(very_well_poised_spec(a1, rest, q, z), policy);
}

cplx rogers_6w5_rhs(cplx a, cplx b, cplx c, cplx d, QBase q, const TruncationPolicy& policy) {
    if (b == cplx{} || c == cplx{} || d == cplx{}) throw DomainError("Rogers 6W5 needs nonzero b, c, d");
    const cplx aq = a * q.value();
    if (!(std::abs(aq / (b * c * d)) < 1.0)) {
        throw DomainError("Rogers 6W5 needs |aq/bcd| < 1");
    }
    cplx numer = qpoch({aq, aq / (b * c), aq / (b * d), aq / (c * d)}, q, infinity, policy);
    cplx denom{1.0, 0.0};
    for (const cplx x : {aq / b, aq / c, aq / d, aq / (b * c * d)}) {
        const cplx factor = qpoch(x, q, infinity, policy);
        if (std::abs(factor) < kNearSingularThreshold) {
            throw NearSingular("Rogers 6W5 denominator product vanishes");
        }
        denom *= factor;
    }
    return numer / denom;
}

}  // namespace qortho
