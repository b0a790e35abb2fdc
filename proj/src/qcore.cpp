#include "qortho/qcore.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace qortho {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Domain: return "DomainError";
        case ErrorKind::TruncationExceeded: return "TruncationExceeded";
        case ErrorKind::DivergentSeries: return "DivergentSeries";
        case ErrorKind::NearSingular: return "NearSingular";
        case ErrorKind::NoConvergence: return "NoConvergence";
    }
    return "Unknown";
}

QBase::QBase(cplx q) : q_(q) {
    if (!(std::abs(q) < 1.0)) {
        throw DomainError("base q must satisfy |q| < 1, got |q| = " + std::to_string(std::abs(q)));
    }
}

void TruncationPolicy::validate() const {
    if (!(rel_tol > 0.0)) throw DomainError("truncation rel_tol must be positive");
    if (max_terms < 1) throw DomainError("truncation max_terms must be at least 1");
}

std::size_t truncation_terms(double max_abs_arg, double abs_q, const TruncationPolicy& policy) {
    policy.validate();
    std::size_t k = 0;
    double bound = max_abs_arg;
    while (!(bound < policy.rel_tol)) {
        if (k >= policy.max_terms) {
            throw TruncationExceeded("infinite product needs more than " + std::to_string(policy.max_terms) +
                                     " factors (|a| = " + std::to_string(max_abs_arg) + ")");
        }
        bound *= abs_q;
        ++k;
    }
    return k;
}

cplx ipow(cplx z, std::size_t n) {
    cplx result{1.0, 0.0};
    while (n > 0) {
        if (n & 1U) result *= z;
        z *= z;
        n >>= 1U;
    }
    return result;
}

cplx qpoch(cplx a, QBase q, std::size_t n) {
    cplx prod{1.0, 0.0};
    cplx aqk = a;
    for (std::size_t k = 0; k < n; ++k) {
        prod *= 1.0 - aqk;
        aqk *= q.value();
    }
    return prod;
}

ProductResult qpoch_detailed(cplx a, QBase q, infinity_t, const TruncationPolicy& policy) {
    const std::size_t terms = truncation_terms(std::abs(a), q.abs(), policy);
    ProductResult result{cplx{1.0, 0.0}, terms, false};
    cplx aqk = a;
    for (std::size_t k = 0; k < terms; ++k) {
        const cplx factor = 1.0 - aqk;
        if (std::abs(factor) < kExactZeroFactor) {
            result.value = 0.0;
            result.near_singular = true;
            return result;
        }
        result.value *= factor;
        aqk *= q.value();
    }
    return result;
}

cplx qpoch(cplx a, QBase q, infinity_t inf, const TruncationPolicy& policy) {
    return qpoch_detailed(a, q, inf, policy).value;
}

cplx qpoch(std::span<const cplx> as, QBase q, std::size_t n) {
    if (as.empty()) throw DomainError("multi-symbol q-Pochhammer needs at least one parameter");
    cplx prod{1.0, 0.0};
    for (const cplx a : as) prod *= qpoch(a, q, n);
    return prod;
}

cplx qpoch(std::span<const cplx> as, QBase q, infinity_t inf, const TruncationPolicy& policy) {
    if (as.empty()) throw DomainError("multi-symbol q-Pochhammer needs at least one parameter");
    cplx prod{1.0, 0.0};
    for (const cplx a : as) prod *= qpoch(a, q, inf, policy);
    return prod;
}

cplx qpoch(std::initializer_list<cplx> as, QBase q, std::size_t n) {
    return qpoch(std::span<const cplx>(as.begin(), as.size()), q, n);
}

cplx qpoch(std::initializer_list<cplx> as, QBase q, infinity_t inf, const TruncationPolicy& policy) {
    return qpoch(std::span<const cplx>(as.begin(), as.size()), q, inf, policy);
}

cplx qbinom(std::size_t n, std::size_t k, QBase q) {
    if (k > n) {
        throw DomainError("q-binomial needs k <= n, got n = " + std::to_string(n) + ", k = " + std::to_string(k));
    }
    const cplx qq = q.value();
    return qpoch(qq, q, n) / (qpoch(qq, q, k) * qpoch(qq, q, n - k));
}

}  // namespace qortho
