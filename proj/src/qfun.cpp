#include "qortho/qfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qortho/kernels.hpp"
#include "qortho/qcore.hpp"

namespace qortho {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ratios[k] = (r;q)_k / (q;q)_k for k = 0..n.
std::vector<cplx> binomial_ratios(cplx r, QBase q, std::size_t n) {
    std::vector<cplx> out(n + 1);
    out[0] = 1.0;
    cplx qk{1.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
        const cplx qk1 = qk * q.value();
        out[k + 1] = out[k] * (1.0 - r * qk) / (1.0 - qk1);
        qk = qk1;
    }
    return out;
}

// Expansion weights without the gamma/delta powers.
std::vector<cplx> scaled_coeffs(std::size_t n, const ParamSet4& p, QBase q) {
    const auto left = binomial_ratios(p.alpha_over_gamma(), q, n);
    const auto right = binomial_ratios(p.beta_over_delta(), q, n);
    std::vector<cplx> c(n + 1);
    for (std::size_t k = 0; k <= n; ++k) c[k] = left[k] * right[n - k];
    return c;
}

// sum_k c[k] x^k y^{n-k}
cplx homogeneous_eval(const std::vector<cplx>& c, cplx x, cplx y) {
    const std::size_t n = c.size() - 1;
    cplx acc = c[n];
    cplx ypow{1.0, 0.0};
    for (std::size_t k = n; k-- > 0;) {
        ypow *= y;
        acc = acc * x + c[k] * ypow;
    }
    return acc;
}

cplx checked_denominator(cplx arg, QBase q, const TruncationPolicy& policy, const char* what) {
    const cplx value = qpoch(arg, q, infinity, policy);
    if (std::abs(value) < kNearSingularThreshold) {
        throw NearSingular(std::string(what) + " vanishes");
    }
    return value;
}

}  // namespace

void ParamSet4::require_nonzero_scales() const {
    if (gamma == cplx{} || delta == cplx{}) throw DomainError("gamma and delta must be nonzero");
}

void ParamSet4::validate() const {
    require_nonzero_scales();
    if (!(std::abs(alpha_over_gamma()) < 1.0)) throw DomainError("hypothesis |alpha/gamma| < 1 violated");
    if (!(std::abs(beta_over_delta()) < 1.0)) throw DomainError("hypothesis |beta/delta| < 1 violated");
}

void ReducedParams::validate() const {
    if (!(std::abs(a) < 1.0)) throw DomainError("hypothesis |a| < 1 violated");
    if (!(std::abs(b) < 1.0)) throw DomainError("hypothesis |b| < 1 violated");
}

EvaluationPoint::EvaluationPoint(double theta) {
    if (!std::isfinite(theta)) throw DomainError("evaluation angle must be finite");
    theta_ = std::fmod(theta, kTwoPi);
    if (theta_ < 0.0) theta_ += kTwoPi;
    x_ = std::polar(1.0, theta_);
    y_ = std::conj(x_);
}

std::vector<cplx> big_c_coeffs(std::size_t n, const ParamSet4& p, QBase q) {
    p.require_nonzero_scales();
    auto c = scaled_coeffs(n, p, q);
    std::vector<cplx> gpow(n + 1), dpow(n + 1);
    gpow[0] = dpow[0] = 1.0;
    for (std::size_t k = 1; k <= n; ++k) {
        gpow[k] = gpow[k - 1] * p.gamma;
        dpow[k] = dpow[k - 1] * p.delta;
    }
    for (std::size_t k = 0; k <= n; ++k) c[k] *= gpow[k] * dpow[n - k];
    return c;
}

cplx big_c_eval(std::size_t n, const EvaluationPoint& pt, const ParamSet4& p, QBase q) {
    p.require_nonzero_scales();
    return homogeneous_eval(scaled_coeffs(n, p, q), p.gamma * pt.x(), p.delta * pt.y());
}

void big_c_eval_batch(std::size_t n, std::span<const cplx> unit_x, std::span<const cplx> unit_y,
                      const ParamSet4& p, QBase q, std::span<cplx> out) {
    kernels::homogeneous_poly_batch(big_c_coeffs(n, p, q), unit_x, unit_y, out);
}

cplx phi_eval(std::size_t n, cplx x, cplx y, const ParamSet4& p, QBase q) {
    p.require_nonzero_scales();
    return qpoch(q.value(), q, n) * homogeneous_eval(scaled_coeffs(n, p, q), p.gamma * x, p.delta * y);
}

std::vector<cplx> cq_ultraspherical_coeffs(std::size_t n, cplx beta, QBase q) {
    const auto ratios = binomial_ratios(beta, q, n);
    std::vector<cplx> c(n + 1);
    for (std::size_t k = 0; k <= n; ++k) c[k] = ratios[k] * ratios[n - k];
    return c;
}

cplx cq_ultraspherical(std::size_t n, double theta, cplx beta, QBase q) {
    const auto c = cq_ultraspherical_coeffs(n, beta, q);
    cplx sum{};
    for (std::size_t k = 0; k <= n; ++k) {
        sum += c[k] * std::cos((static_cast<double>(n) - 2.0 * static_cast<double>(k)) * theta);
    }
    return sum;
}

cplx weight_omega(const EvaluationPoint& pt, const ParamSet4& p, QBase q, const TruncationPolicy& policy) {
    p.require_nonzero_scales();
    const cplx w = pt.x() * pt.x();
    const cplx wi = pt.y() * pt.y();
    const cplx numer = qpoch({p.gamma / p.delta * w, p.delta / p.gamma * wi}, q, infinity, policy);
    const cplx den1 = checked_denominator(p.alpha / p.delta * w, q, policy, "weight denominator (alpha/delta e^{2i theta};q)_inf");
    const cplx den2 = checked_denominator(p.beta / p.gamma * wi, q, policy, "weight denominator (beta/gamma e^{-2i theta};q)_inf");
    return numer / (den1 * den2);
}

void weight_omega_batch(std::span<const cplx> unit_x, const ParamSet4& p, QBase q, const TruncationPolicy& policy,
                        std::span<cplx> out) {
    p.require_nonzero_scales();
    if (out.size() != unit_x.size()) throw DomainError("weight batch output size mismatch");
    const std::size_t count = unit_x.size();
    const cplx coef[4] = {p.gamma / p.delta, p.delta / p.gamma, p.alpha / p.delta, p.beta / p.gamma};

    std::vector<cplx> args(count), factor(count);
    std::vector<double> min_factor(count);
    for (int which = 0; which < 4; ++which) {
        // Arguments lie on a circle of radius |coef|, so one truncation depth serves all nodes.
        const std::size_t terms = truncation_terms(std::abs(coef[which]), q.abs(), policy);
        for (std::size_t j = 0; j < count; ++j) {
            const cplx w = unit_x[j] * unit_x[j];
            args[j] = coef[which] * (which % 2 == 0 ? w : std::conj(w));
        }
        kernels::qpoch_inf_batch(args, q.value(), terms, factor, min_factor);
        if (which == 0) {
            std::copy(factor.begin(), factor.end(), out.begin());
        } else if (which == 1) {
            kernels::multiply_batch(out, factor);
        } else {
            for (std::size_t j = 0; j < count; ++j) {
                if (std::abs(factor[j]) < kNearSingularThreshold || min_factor[j] < kExactZeroFactor) {
                    throw NearSingular("weight denominator vanishes at a quadrature node");
                }
                factor[j] = 1.0 / factor[j];
            }
            kernels::multiply_batch(out, factor);
        }
    }
}

cplx h_norm(std::size_t n, cplx a, QBase q, const TruncationPolicy& policy) {
    if (!(std::abs(a) < 1.0)) throw DomainError("h_n(a|q) needs |a| < 1");
    const cplx qq = q.value();
    const cplx a2 = a * a;
    const cplx qn = ipow(qq, n);
    const cplx da = checked_denominator(a, q, policy, "(a;q)_inf");
    const cplx daq = checked_denominator(a * qq, q, policy, "(aq;q)_inf");
    const cplx numer = qpoch({qq, a2}, q, infinity, policy) * qpoch(qq, q, n) * (1.0 - a * qn);
    return numer / (kTwoPi * da * daq * qpoch(a2, q, n) * (1.0 - a));
}

cplx diag_rhs_thm11(std::size_t n, const ParamSet4& p, QBase q, const TruncationPolicy& policy) {
    p.require_nonzero_scales();
    const cplx qq = q.value();
    const cplx ra = p.alpha_over_gamma();
    const cplx rb = p.beta_over_delta();
    const cplx rab = p.ratio_product();
    const cplx qn = ipow(qq, n);
    const cplx dq = checked_denominator(qq, q, policy, "(q;q)_inf");
    const cplx dab = checked_denominator(rab, q, policy, "(alpha beta/gamma delta;q)_inf");
    const cplx prefactor = kTwoPi * qpoch({ra, rb}, q, infinity, policy) / (dq * dab);
    const cplx bracket = 1.0 / (1.0 - ra * qn) + 1.0 / (1.0 - rb * qn);
    const cplx gd_pow = ipow(p.gamma * p.delta, n);
    return prefactor * bracket * qpoch(rab, q, n) * gd_pow / qpoch(qq, q, n);
}

std::vector<cplx> connection_coeffs(std::size_t m, const ReducedParams& r, cplx gamma_delta, QBase q) {
    if (r.a == cplx{}) throw DomainError("connection coefficients need a != 0");
    const cplx qq = q.value();
    std::vector<cplx> out(m + 1, cplx{});
    for (std::size_t n = m % 2; n <= m; n += 2) {
        const std::size_t j = (m - n) / 2;
        const std::size_t s = (m + n) / 2;
        const cplx qn = ipow(qq, n);
        const cplx numer = (1.0 - r.a * qn) * qpoch(r.b / r.a, q, j) * qpoch(r.b, q, s);
        const cplx denom = qpoch(qq, q, j) * qpoch(r.a, q, s + 1);
        out[n] = numer / denom * ipow(r.a * gamma_delta, j);
    }
    return out;
}

double growth_root(std::size_t n, const ParamSet4& p, QBase q) {
    if (n == 0) throw DomainError("growth_root needs n >= 1");
    const double value = std::abs(big_c_eval(n, EvaluationPoint(0.0), p, q));
    return std::pow(value, 1.0 / static_cast<double>(n));
}

}  // namespace qortho
