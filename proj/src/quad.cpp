#include "qortho/quad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qortho/qcore.hpp"

namespace qortho {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct PartialSum {
    cplx sum{};
    double max_abs = 0.0;
};

// Evaluates f on thetas_j = (offset + j * stride) * 2 pi / total for j < count.
PartialSum sample(const BatchIntegrand& f, std::size_t total, std::size_t offset, std::size_t stride,
                  std::size_t count) {
    std::vector<double> thetas(count);
    for (std::size_t j = 0; j < count; ++j) {
        thetas[j] = kTwoPi * static_cast<double>(offset + j * stride) / static_cast<double>(total);
    }
    std::vector<cplx> values(count);
    f(thetas, values);
    PartialSum out;
    for (const cplx v : values) {
        out.sum += v;
        out.max_abs = std::max(out.max_abs, std::abs(v));
    }
    return out;
}

}  // namespace

void QuadratureSpec::validate() const {
    if (nodes < 16) throw DomainError("quadrature needs at least 16 nodes");
    if (max_nodes < nodes) throw DomainError("quadrature max_nodes must be >= nodes");
    if (!(rel_tol > 0.0)) throw DomainError("quadrature rel_tol must be positive");
}

QuadratureResult periodic_integral(const BatchIntegrand& f, Interval interval, const QuadratureSpec& spec) {
    spec.validate();
    const double share = interval == Interval::FullPeriod ? 1.0 : 0.5;
    const double length = kTwoPi * share;

    std::size_t n = spec.nodes;
    PartialSum acc = sample(f, n, 0, 1, n);
    QuadratureResult result;
    result.value = share * kTwoPi / static_cast<double>(n) * acc.sum;
    result.nodes = n;
    result.integrand_scale = acc.max_abs * length;

    while (2 * n <= spec.max_nodes) {
        const PartialSum fresh = sample(f, 2 * n, 1, 2, n);
        acc.sum += fresh.sum;
        acc.max_abs = std::max(acc.max_abs, fresh.max_abs);
        n *= 2;

        const cplx refined = share * kTwoPi / static_cast<double>(n) * acc.sum;
        result.change = std::abs(refined - result.value);
        result.value = refined;
        result.nodes = n;
        result.integrand_scale = acc.max_abs * length;
        if (!std::isfinite(result.change)) break;
        if (result.change <= spec.rel_tol * std::max(std::abs(refined), result.integrand_scale)) {
            result.converged = true;
            break;
        }
    }
    return result;
}

QuadratureResult periodic_integral(const std::function<cplx(double)>& f, Interval interval,
                                   const QuadratureSpec& spec) {
    const BatchIntegrand batch = [&f](std::span<const double> thetas, std::span<cplx> out) {
        for (std::size_t j = 0; j < thetas.size(); ++j) out[j] = f(thetas[j]);
    };
    return periodic_integral(batch, interval, spec);
}

namespace {

cplx lattice_sum(const std::function<cplx(cplx)>& f, cplx endpoint, QBase q, const TruncationPolicy& policy) {
    if (endpoint == cplx{}) return cplx{};
    cplx sum{};
    cplx qn{1.0, 0.0};
    std::size_t small_run = 0;
    for (std::size_t n = 0;; ++n) {
        if (n >= policy.max_terms) {
            throw TruncationExceeded("Jackson integral not converged after " + std::to_string(policy.max_terms) +
                                     " lattice points");
        }
        const cplx term = qn * f(endpoint * qn);
        sum += term;
        small_run = std::abs(term) <= policy.rel_tol * std::abs(sum) ? small_run + 1 : 0;
        if (small_run >= 3) break;
        qn *= q.value();
    }
    return (1.0 - q.value()) * endpoint * sum;
}

cplx nonvanishing(cplx value, const char* what) {
    if (std::abs(value) < kNearSingularThreshold) throw NearSingular(std::string(what) + " vanishes");
    return value;
}

}  // namespace

cplx jackson_integral(const std::function<cplx(cplx)>& f, const QLattice& lattice, const TruncationPolicy& policy) {
    policy.validate();
    return lattice_sum(f, lattice.b, lattice.q, policy) - lattice_sum(f, lattice.a, lattice.q, policy);
}

cplx phi_qintegral_repr(std::size_t n, cplx x, cplx y, const ParamSet4& p, QBase q, const TruncationPolicy& policy) {
    p.require_nonzero_scales();
    const cplx qq = q.value();
    const cplx gx = p.gamma * x;
    const cplx dy = p.delta * y;
    if (std::abs(gx) < kNearSingularThreshold || std::abs(dy) < kNearSingularThreshold) {
        throw NearSingular("Jackson endpoints gamma x and delta y must be nonzero");
    }
    if (std::abs(gx - dy) < kNearSingularThreshold * std::max(std::abs(gx), std::abs(dy))) {
        throw NearSingular("(gamma x/delta y;q)_inf vanishes: gamma x == delta y");
    }

    const cplx ratio = p.ratio_product();
    const cplx numer = qpoch(ratio, q, n) * qpoch({p.alpha_over_gamma(), p.beta_over_delta(), p.beta * y / (p.gamma * x),
                                                    p.alpha * x / (p.delta * y)},
                                                   q, infinity, policy);
    cplx denom = (1.0 - qq) * dy;
    denom *= nonvanishing(qpoch(qq, q, infinity, policy), "(q;q)_inf");
    denom *= nonvanishing(qpoch(ratio, q, infinity, policy), "(alpha beta/gamma delta;q)_inf");
    denom *= nonvanishing(qpoch(gx / dy, q, infinity, policy), "(gamma x/delta y;q)_inf");
    denom *= nonvanishing(qpoch(qq * dy / gx, q, infinity, policy), "(q delta y/gamma x;q)_inf");

    const cplx left = p.beta / (p.delta * gx);   // beta z / (gamma delta x)
    const cplx right = p.alpha / (p.gamma * dy); // alpha z / (gamma delta y)
    const auto integrand = [&](cplx z) {
        const cplx d = nonvanishing(qpoch(left * z, q, infinity, policy), "Jackson integrand denominator") *
                       nonvanishing(qpoch(right * z, q, infinity, policy), "Jackson integrand denominator");
        return qpoch({qq * z / gx, qq * z / dy}, q, infinity, policy) * ipow(z, n) / d;
    };
    return numer / denom * jackson_integral(integrand, QLattice{gx, dy, q}, policy);
}

}  // namespace qortho
