#pragma once

// Periodic trapezoidal quadrature, the Jackson q-integral and the Jackson
// integral representation of Phi_n.

#include <cstddef>
#include <functional>
#include <span>

#include "qortho/qfun.hpp"
#include "qortho/types.hpp"

namespace qortho {

struct QuadratureSpec {
    std::size_t nodes = 256;
    std::size_t max_nodes = 8192;
    double rel_tol = 1e-10;

    /// nodes >= 16, max_nodes >= nodes, rel_tol > 0.
    void validate() const;
};

enum class Interval {
    FullPeriod,  // [0, 2 pi]
    HalfPeriod,  // [0, pi], computed as half the full-period rule
};

struct QuadratureResult {
    cplx value;
    double integrand_scale = 0.0;  // max |f| over the nodes times the interval length
    double change = 0.0;           // |I_N - I_{N/2}| at the last refinement
    std::size_t nodes = 0;
    bool converged = false;        // false: max_nodes reached, value still returned
};

/// Fills out[j] = f(thetas[j]).
using BatchIntegrand = std::function<void(std::span<const double> thetas, std::span<cplx> out)>;

/// Equispaced trapezoidal rule on [0, 2 pi), doubling the node count until two
/// successive estimates agree to rel_tol relative to max(|I|, integrand scale).
/// A HalfPeriod request applies the same rule and halves it, which is the
/// integral over [0, pi] whenever the integrand is even.
QuadratureResult periodic_integral(const BatchIntegrand& f, Interval interval, const QuadratureSpec& spec = {});
QuadratureResult periodic_integral(const std::function<cplx(double)>& f, Interval interval,
                                   const QuadratureSpec& spec = {});

/// Jackson lattice {b q^n} and {a q^n}, n >= 0.
struct QLattice {
    cplx a;
    cplx b;
    QBase q{0.0};
};

/// (1-q) b sum q^n f(b q^n) - (1-q) a sum q^n f(a q^n), each sum stopped after
/// three consecutive terms below rel_tol times the partial sum.
cplx jackson_integral(const std::function<cplx(cplx)>& f, const QLattice& lattice,
                      const TruncationPolicy& policy = {});

/// Phi_n(x, y | q) through its Jackson integral representation over the
/// lattice from gamma x to delta y. Throws NearSingular when a prefactor or
/// integrand denominator is below 1e-12, including gamma x == delta y.
cplx phi_qintegral_repr(std::size_t n, cplx x, cplx y, const ParamSet4& p, QBase q,
                        const TruncationPolicy& policy = {});

}  // namespace qortho
