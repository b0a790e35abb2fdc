#pragma once

// Basic hypergeometric series r+1 phi r, the very-well-poised r+1 W r and the
// Rogers 6W5 closed form.

#include <span>
#include <vector>

#include "qortho/types.hpp"

namespace qortho {

struct PhiSpec {
    std::vector<cplx> numerators;    // a_1 .. a_{r+1}
    std::vector<cplx> denominators;  // b_1 .. b_r
    QBase q{0.0};
    cplx z{0.0, 0.0};

    /// True when some numerator equals q^{-m}, m >= 0 (to 1e-12), so the
    /// series is a polynomial in z.
    bool terminating() const;

    /// Throws DomainError when a denominator is q^{-m} or when |z| >= 1 for a
    /// non-terminating series.
    void validate() const;
};

/// Sums the series with the term-ratio recurrence. Stops after three
/// consecutive terms below rel_tol * |partial sum|, or at an exact zero
/// numerator factor.
cplx phi_series(const PhiSpec& spec, const TruncationPolicy& policy = {});

/// Parameter list of r+1 W r(a1; rest; q, z) written out as an r+1 phi r.
/// The principal square root of a1 is used.
PhiSpec very_well_poised_spec(cplx a1, std::span<const cplx> rest, QBase q, cplx z);

cplx very_well_poised(cplx a1, std::span<const cplx> rest, QBase q, cplx z,
                      const TruncationPolicy& policy = {});

/// Product side of the Rogers 6phi5 sum:
///   (aq, aq/bc, aq/bd, aq/cd; q)_inf / (aq/b, aq/c, aq/d, aq/bcd; q)_inf.
/// Requires |aq/bcd| < 1; NearSingular when a denominator product is tiny.
cplx rogers_6w5_rhs(cplx a, cplx b, cplx c, cplx d, QBase q, const TruncationPolicy& policy = {});

}  // namespace qortho
