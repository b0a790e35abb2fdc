#pragma once

// q-Pochhammer symbols and q-binomial coefficients over complex scalars.

#include <cstddef>
#include <span>

#include "qortho/types.hpp"

namespace qortho {

/// Tag selecting the infinite product (a;q)_inf in the qpoch overloads.
struct infinity_t {
    explicit constexpr infinity_t() = default;
};
inline constexpr infinity_t infinity{};

struct ProductResult {
    cplx value;
    std::size_t terms = 0;       // factors multiplied
    bool near_singular = false;  // some |1 - a q^k| < kExactZeroFactor; value forced to 0
};

/// Finite symbol (a;q)_n = prod_{k<n} (1 - a q^k); (a;q)_0 = 1.
cplx qpoch(cplx a, QBase q, std::size_t n);

/// Infinite symbol, truncated at the first k with |a||q|^k < policy.rel_tol.
/// Throws TruncationExceeded when max_terms is reached first.
ProductResult qpoch_detailed(cplx a, QBase q, infinity_t, const TruncationPolicy& policy = {});
cplx qpoch(cplx a, QBase q, infinity_t, const TruncationPolicy& policy = {});

/// (a_1, ..., a_r; q)_n as the product of the individual symbols.
cplx qpoch(std::span<const cplx> as, QBase q, std::size_t n);
cplx qpoch(std::span<const cplx> as, QBase q, infinity_t, const TruncationPolicy& policy = {});
cplx qpoch(std::initializer_list<cplx> as, QBase q, std::size_t n);
cplx qpoch(std::initializer_list<cplx> as, QBase q, infinity_t, const TruncationPolicy& policy = {});

/// Gaussian binomial (q;q)_n / ((q;q)_k (q;q)_{n-k}). DomainError if k > n.
cplx qbinom(std::size_t n, std::size_t k, QBase q);

/// z^n by repeated squaring; ipow(z, 0) = 1 for every z.
cplx ipow(cplx z, std::size_t n);

/// Number of factors the truncation rule needs for arguments bounded by
/// max_abs_arg; shared by the scalar path and the batch kernels.
std::size_t truncation_terms(double max_abs_arg, double abs_q, const TruncationPolicy& policy);

}  // namespace qortho
