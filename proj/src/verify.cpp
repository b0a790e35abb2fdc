#include "qortho/verify.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <random>
#include <thread>
#include <utility>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qortho/hyper.hpp"
#include "qortho/kernels.hpp"
#include "qortho/qcore.hpp"

namespace qortho {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
const cplx kNaNc{kNaN, kNaN};

struct IdentityName {
    IdentityId id;
    std::string_view name;
    double tolerance;
};

constexpr IdentityName kIdentityNames[] = {
    {IdentityId::THM_1_1, "THM_1_1", 1e-8},       {IdentityId::THM_1_2, "THM_1_2", 1e-8},
    {IdentityId::THM_1_3, "THM_1_3", 1e-8},       {IdentityId::PROP_2_1_2, "PROP_2_1_2", 1e-12},
    {IdentityId::PROP_2_1_3, "PROP_2_1_3", 0.05}, {IdentityId::PROP_2_2, "PROP_2_2", 1e-10},
    {IdentityId::PROP_2_4, "PROP_2_4", 1e-10},    {IdentityId::PROP_3_1, "PROP_3_1", 1e-9},
    {IdentityId::ROGERS_6W5, "ROGERS_6W5", 1e-9}, {IdentityId::QBINOMIAL, "QBINOMIAL", 1e-11},
    {IdentityId::ULTRA_ORTHO, "ULTRA_ORTHO", 1e-8},
};

void note(std::vector<Flag>& flags, const Error& e) {
    switch (e.kind()) {
        case ErrorKind::Domain: throw;
        case ErrorKind::NearSingular: flags.push_back(Flag::NearSingular); break;
        case ErrorKind::TruncationExceeded: flags.push_back(Flag::TruncationExceeded); break;
        case ErrorKind::DivergentSeries:
        case ErrorKind::NoConvergence: flags.push_back(Flag::NoConvergence); break;
    }
}

double tolerance_for(IdentityId id, const CheckOptions& opts) {
    return opts.tolerance.value_or(default_tolerance(id));
}

Input in(std::string name, cplx v) { return {std::move(name), v}; }
Input in(std::string name, std::size_t v) { return {std::move(name), static_cast<std::int64_t>(v)}; }
Input in(std::string name, double v) { return {std::move(name), v}; }

void push_params(Inputs& inputs, const ParamSet4& p, QBase q) {
    inputs.push_back(in("q", q.value()));
    inputs.push_back(in("alpha", p.alpha));
    inputs.push_back(in("beta", p.beta));
    inputs.push_back(in("gamma", p.gamma));
    inputs.push_back(in("delta", p.delta));
}

struct Nodes {
    std::vector<cplx> x;  // e^{i theta}
    std::vector<cplx> y;  // e^{-i theta}

    explicit Nodes(std::span<const double> thetas) : x(thetas.size()), y(thetas.size()) {
        for (std::size_t j = 0; j < thetas.size(); ++j) {
            x[j] = std::polar(1.0, thetas[j]);
            y[j] = std::conj(x[j]);
        }
    }
};

// out[j] = (coef * x_j^power; q)_inf for power in {1, -1}.
void product_at_nodes(cplx coef, int power, const Nodes& nodes, QBase q, const TruncationPolicy& policy,
                      std::span<cplx> out, bool denominator) {
    const std::size_t count = nodes.x.size();
    std::vector<cplx> args(count);
    for (std::size_t j = 0; j < count; ++j) args[j] = coef * (power > 0 ? nodes.x[j] : nodes.y[j]);
    std::vector<double> min_factor(count);
    const std::size_t terms = truncation_terms(std::abs(coef), q.abs(), policy);
    kernels::qpoch_inf_batch(args, q.value(), terms, out, min_factor);
    if (denominator) {
        for (std::size_t j = 0; j < count; ++j) {
            if (std::abs(out[j]) < kNearSingularThreshold || min_factor[j] < kExactZeroFactor) {
                throw NearSingular("integrand denominator vanishes at a quadrature node");
            }
        }
    }
}

void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError("hypothesis violated: " + what);
}

void validate_weight(const ParamSet4& p) {
    require(std::abs(p.alpha / p.delta) < 1.0 && std::abs(p.beta / p.gamma) < 1.0,
            "weight regularity |alpha/delta| < 1 and |beta/gamma| < 1");
}

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }
bool same(cplx a, cplx b) { return same(a.real(), b.real()) && same(a.imag(), b.imag()); }

}  // namespace

std::string_view to_string(IdentityId id) noexcept {
    for (const auto& entry : kIdentityNames) {
        if (entry.id == id) return entry.name;
    }
    return "UNKNOWN";
}

std::optional<IdentityId> identity_from_string(std::string_view name) noexcept {
    for (const auto& entry : kIdentityNames) {
        if (entry.name == name) return entry.id;
    }
    return std::nullopt;
}

double default_tolerance(IdentityId id) noexcept {
    for (const auto& entry : kIdentityNames) {
        if (entry.id == id) return entry.tolerance;
    }
    return 0.0;
}

std::string_view to_string(Flag flag) noexcept {
    switch (flag) {
        case Flag::NearSingular: return "NearSingular";
        case Flag::NoConvergence: return "NoConvergence";
        case Flag::TruncationExceeded: return "TruncationExceeded";
    }
    return "Unknown";
}

std::optional<Flag> flag_from_string(std::string_view name) noexcept {
    for (const Flag f : {Flag::NearSingular, Flag::NoConvergence, Flag::TruncationExceeded}) {
        if (to_string(f) == name) return f;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// VerificationReport

VerificationReport VerificationReport::evaluate(IdentityId id, Inputs inputs, cplx lhs, cplx rhs, double tolerance,
                                                double scale, std::vector<Flag> flags) {
    std::sort(flags.begin(), flags.end());
    flags.erase(std::unique(flags.begin(), flags.end()), flags.end());

    VerificationReport r;
    r.identity_ = id;
    r.inputs_ = std::move(inputs);
    r.lhs_ = lhs;
    r.rhs_ = rhs;
    r.abs_residual_ = std::abs(lhs - rhs);
    const double denom = std::max({std::abs(lhs), std::abs(rhs), scale});
    r.rel_residual_ = denom > 0.0 ? r.abs_residual_ / denom : r.abs_residual_;
    r.tolerance_ = tolerance;
    r.flags_ = std::move(flags);
    r.passed_ = r.flags_.empty() && r.rel_residual_ <= tolerance;
    return r;
}

VerificationReport VerificationReport::restore(IdentityId id, Inputs inputs, cplx lhs, cplx rhs, double abs_residual,
                                               double rel_residual, double tolerance, bool passed,
                                               std::vector<Flag> flags) {
    const bool expected = flags.empty() && rel_residual <= tolerance;
    if (expected != passed) throw DomainError("stored report: passed flag disagrees with residual and flags");
    VerificationReport r;
    r.identity_ = id;
    r.inputs_ = std::move(inputs);
    r.lhs_ = lhs;
    r.rhs_ = rhs;
    r.abs_residual_ = abs_residual;
    r.rel_residual_ = rel_residual;
    r.tolerance_ = tolerance;
    r.passed_ = passed;
    r.flags_ = std::move(flags);
    return r;
}

const InputValue* VerificationReport::input(std::string_view name) const noexcept {
    for (const auto& i : inputs_) {
        if (i.name == name) return &i.value;
    }
    return nullptr;
}

bool operator==(const VerificationReport& a, const VerificationReport& b) {
    return a.identity_ == b.identity_ && a.inputs_ == b.inputs_ && same(a.lhs_, b.lhs_) && same(a.rhs_, b.rhs_) &&
           same(a.abs_residual_, b.abs_residual_) && same(a.rel_residual_, b.rel_residual_) &&
           a.tolerance_ == b.tolerance_ && a.passed_ == b.passed_ && a.flags_ == b.flags_;
}

// ---------------------------------------------------------------------------
// Integral identities

VerificationReport check_thm_1_1(const ParamSet4& p, QBase q, std::size_t m, std::size_t n,
                                 const CheckOptions& opts) {
    p.validate();
    validate_weight(p);
    Inputs inputs;
    push_params(inputs, p, q);
    inputs.push_back(in("m", m));
    inputs.push_back(in("n", n));

    std::vector<Flag> flags;
    cplx rhs = kNaNc;
    try {
        rhs = m == n ? diag_rhs_thm11(n, p, q, opts.truncation) : cplx{};
    } catch (const Error& e) {
        note(flags, e);
    }

    cplx lhs = kNaNc;
    double scale = 0.0;
    try {
        const BatchIntegrand integrand = [&](std::span<const double> thetas, std::span<cplx> out) {
            const Nodes nodes(thetas);
            std::vector<cplx> other(thetas.size());
            big_c_eval_batch(m, nodes.x, nodes.y, p, q, out);
            big_c_eval_batch(n, nodes.x, nodes.y, p, q, other);
            kernels::multiply_batch(out, other);
            weight_omega_batch(nodes.x, p, q, opts.truncation, other);
            kernels::multiply_batch(out, other);
        };
        const QuadratureResult res = periodic_integral(integrand, Interval::FullPeriod, opts.quadrature);
        lhs = res.value;
        scale = res.integrand_scale;
        inputs.push_back(in("nodes", res.nodes));
        if (!res.converged) flags.push_back(Flag::NoConvergence);
    } catch (const Error& e) {
        note(flags, e);
    }
    return VerificationReport::evaluate(IdentityId::THM_1_1, std::move(inputs), lhs, rhs,
                                        tolerance_for(IdentityId::THM_1_1, opts), scale, std::move(flags));
}

cplx thm_1_2_series(const ParamSet4& p, cplx s, cplx t, QBase q, const TruncationPolicy& policy) {
    policy.validate();
    const cplx qq = q.value();
    const cplx ra = p.alpha_over_gamma();
    const cplx rb = p.beta_over_delta();
    const cplx rab = p.ratio_product();
    // s and t only enter through their product; fix the multiplication order.
    const bool swap = std::make_pair(t.real(), t.imag()) < std::make_pair(s.real(), s.imag());
    const cplx st = swap ? t * s : s * t;
    const cplx x = p.gamma * p.delta * st;

    const cplx dq = qpoch(qq, q, infinity, policy);
    const cplx dab = qpoch(rab, q, infinity, policy);
    if (std::abs(dq * dab) < kNearSingularThreshold) throw NearSingular("(q, ab/gd;q)_inf vanishes");
    const cplx prefactor = kTwoPi * qpoch({ra, rb}, q, infinity, policy) / (dq * dab);

    cplx sum{};
    cplx term{1.0, 0.0};  // (ab/gd;q)_n / (q;q)_n x^n
    cplx qn{1.0, 0.0};
    std::size_t small_run = 0;
    for (std::size_t n = 0;; ++n) {
        if (n >= policy.max_terms) throw TruncationExceeded("seven-parameter series not converged");
        const cplx contribution = (1.0 / (1.0 - ra * qn) + 1.0 / (1.0 - rb * qn)) * term;
        sum += contribution;
        small_run = std::abs(contribution) <= policy.rel_tol * std::abs(sum) ? small_run + 1 : 0;
        if (small_run >= 3) break;
        term *= (1.0 - rab * qn) / (1.0 - qn * qq) * x;
        qn *= qq;
    }
    return prefactor * sum;
}

VerificationReport check_thm_1_2(const ParamSet4& p, cplx s, cplx t, QBase q, const CheckOptions& opts) {
    p.require_nonzero_scales();
    const double bound = std::max({q.abs(), std::abs(p.alpha_over_gamma()), std::abs(p.beta_over_delta()),
                                   std::abs(p.gamma * s), std::abs(p.gamma * t), std::abs(p.delta * s),
                                   std::abs(p.delta * t)});
    require(bound < 1.0, "max{|q|,|alpha/gamma|,|beta/delta|,|gamma s|,|gamma t|,|delta s|,|delta t|} < 1");
    validate_weight(p);

    Inputs inputs;
    push_params(inputs, p, q);
    inputs.push_back(in("s", s));
    inputs.push_back(in("t", t));

    std::vector<Flag> flags;
    cplx rhs = kNaNc;
    try {
        rhs = thm_1_2_series(p, s, t, q, opts.truncation);
    } catch (const Error& e) {
        note(flags, e);
    }

    // The integrand is symmetric in (s, t); evaluate the two factors in a fixed order.
    const bool swap = std::make_pair(t.real(), t.imag()) < std::make_pair(s.real(), s.imag());
    const cplx first = swap ? t : s;
    const cplx second = swap ? s : t;

    cplx lhs = kNaNc;
    double scale = 0.0;
    try {
        const BatchIntegrand integrand = [&](std::span<const double> thetas, std::span<cplx> out) {
            const Nodes nodes(thetas);
            const std::size_t count = thetas.size();
            std::vector<cplx> factor(count);
            weight_omega_batch(nodes.x, p, q, opts.truncation, out);
            for (const cplx u : {first, second}) {
                product_at_nodes(p.alpha * u, +1, nodes, q, opts.truncation, factor, false);
                kernels::multiply_batch(out, factor);
                product_at_nodes(p.beta * u, -1, nodes, q, opts.truncation, factor, false);
                kernels::multiply_batch(out, factor);
                std::vector<cplx> denom(count);
                product_at_nodes(p.gamma * u, +1, nodes, q, opts.truncation, denom, true);
                product_at_nodes(p.delta * u, -1, nodes, q, opts.truncation, factor, true);
                kernels::multiply_batch(denom, factor);
                for (auto& d : denom) d = 1.0 / d;
                kernels::multiply_batch(out, denom);
            }
        };
        const QuadratureResult res = periodic_integral(integrand, Interval::FullPeriod, opts.quadrature);
        lhs = res.value;
        scale = res.integrand_scale;
        inputs.push_back(in("nodes", res.nodes));
        if (!res.converged) flags.push_back(Flag::NoConvergence);
    } catch (const Error& e) {
        note(flags, e);
    }
    return VerificationReport::evaluate(IdentityId::THM_1_2, std::move(inputs), lhs, rhs,
                                        tolerance_for(IdentityId::THM_1_2, opts), scale, std::move(flags));
}

namespace {

void validate_thm_1_3(const ReducedParams& r, cplx gamma, cplx delta, std::size_t m, std::size_t n) {
    r.validate();
    require(gamma != cplx{} && delta != cplx{}, "gamma and delta must be nonzero");
    require(std::abs(r.a * gamma / delta) < 1.0 && std::abs(r.a * delta / gamma) < 1.0,
            "weight regularity |a gamma/delta| < 1 and |a delta/gamma| < 1");
    if ((m - n) % 2 == 0 && m < n) {
        throw DomainError("bi-orthogonality closed form needs m >= n when m = n (mod 2)");
    }
    if (m != n && (m - n) % 2 == 0) require(r.a != cplx{}, "a != 0 for the (b/a;q) factor");
}

}  // namespace

cplx thm_1_3_rhs(const ReducedParams& r, cplx gamma, cplx delta, QBase q, std::size_t m, std::size_t n,
                 const TruncationPolicy& policy) {
    validate_thm_1_3(r, gamma, delta, m, n);
    if ((m + n) % 2 != 0) return cplx{};
    const std::size_t j = (m - n) / 2;
    const std::size_t s = (m + n) / 2;
    const cplx qq = q.value();
    const cplx gd = gamma * delta;
    const cplx ratio = j == 0 ? cplx{1.0, 0.0} : qpoch(r.b / r.a, q, j);
    const cplx numer = ipow(gd, n) * (1.0 - r.a * ipow(qq, n)) * ratio * qpoch(r.b, q, s) * ipow(r.a * gd, j);
    const cplx denom = (1.0 - r.a) * h_norm(n, r.a, q, policy) * qpoch(qq, q, j) * qpoch(r.a * qq, q, s);
    return numer / denom;
}

VerificationReport check_thm_1_3(const ReducedParams& r, cplx gamma, cplx delta, QBase q, std::size_t m,
                                 std::size_t n, const CheckOptions& opts) {
    validate_thm_1_3(r, gamma, delta, m, n);
    Inputs inputs{in("q", q.value()), in("a", r.a),     in("b", r.b),
                  in("gamma", gamma), in("delta", delta), in("m", m), in("n", n)};

    std::vector<Flag> flags;
    cplx rhs = kNaNc;
    try {
        rhs = thm_1_3_rhs(r, gamma, delta, q, m, n, opts.truncation);
    } catch (const Error& e) {
        note(flags, e);
    }

    const ParamSet4 fam_a = r.a_family(gamma, delta);
    const ParamSet4 fam_b = r.b_family(gamma, delta);
    cplx lhs = kNaNc;
    double scale = 0.0;
    try {
        const BatchIntegrand integrand = [&](std::span<const double> thetas, std::span<cplx> out) {
            const Nodes nodes(thetas);
            std::vector<cplx> other(thetas.size());
            big_c_eval_batch(m, nodes.x, nodes.y, fam_b, q, out);
            big_c_eval_batch(n, nodes.x, nodes.y, fam_a, q, other);
            kernels::multiply_batch(out, other);
            weight_omega_batch(nodes.x, fam_a, q, opts.truncation, other);
            kernels::multiply_batch(out, other);
        };
        const QuadratureResult res = periodic_integral(integrand, Interval::HalfPeriod, opts.quadrature);
        lhs = res.value;
        scale = res.integrand_scale;
        inputs.push_back(in("nodes", res.nodes));
        if (!res.converged) flags.push_back(Flag::NoConvergence);
    } catch (const Error& e) {
        note(flags, e);
    }
    return VerificationReport::evaluate(IdentityId::THM_1_3, std::move(inputs), lhs, rhs,
                                        tolerance_for(IdentityId::THM_1_3, opts), scale, std::move(flags));
}

VerificationReport check_prop_3_1(const ReducedParams& r, cplx gamma, cplx delta, QBase q, std::size_t m,
                                  const std::vector<double>& thetas, const CheckOptions& opts) {
    r.validate();
    require(r.a != cplx{}, "a != 0");
    require(gamma != cplx{} && delta != cplx{}, "gamma and delta must be nonzero");
    require(!thetas.empty(), "at least one evaluation angle");

    Inputs inputs{in("q", q.value()), in("a", r.a), in("b", r.b), in("gamma", gamma), in("delta", delta),
                  in("m", m), in("theta_count", thetas.size())};

    const ParamSet4 fam_a = r.a_family(gamma, delta);
    const ParamSet4 fam_b = r.b_family(gamma, delta);
    const auto coeffs = connection_coeffs(m, r, gamma * delta, q);

    cplx worst_lhs{}, worst_rhs{};
    double worst = -1.0;
    double scale = 0.0;
    for (const double theta : thetas) {
        const EvaluationPoint pt(theta);
        const cplx lhs = big_c_eval(m, pt, fam_b, q);
        cplx rhs{};
        for (std::size_t n = 0; n <= m; ++n) {
            if (coeffs[n] != cplx{}) rhs += coeffs[n] * big_c_eval(n, pt, fam_a, q);
        }
        scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
        const double diff = std::abs(lhs - rhs);
        if (!(diff <= worst)) {
            worst = diff;
            worst_lhs = lhs;
            worst_rhs = rhs;
        }
    }
    return VerificationReport::evaluate(IdentityId::PROP_3_1, std::move(inputs), worst_lhs, worst_rhs,
                                        tolerance_for(IdentityId::PROP_3_1, opts), scale, {});
}

VerificationReport check_ultra_ortho(cplx beta, QBase q, std::size_t m, std::size_t n, const CheckOptions& opts) {
    require(std::abs(beta) < 1.0, "|beta| < 1");
    Inputs inputs{in("q", q.value()), in("beta", beta), in("m", m), in("n", n)};

    std::vector<Flag> flags;
    cplx rhs = kNaNc;
    try {
        rhs = m == n ? 1.0 / h_norm(n, beta, q, opts.truncation) : cplx{};
    } catch (const Error& e) {
        note(flags, e);
    }

    const ParamSet4 weight_params{beta, beta, 1.0, 1.0};
    cplx lhs = kNaNc;
    double scale = 0.0;
    try {
        const BatchIntegrand integrand = [&](std::span<const double> thetas, std::span<cplx> out) {
            const Nodes nodes(thetas);
            weight_omega_batch(nodes.x, weight_params, q, opts.truncation, out);
            for (std::size_t j = 0; j < thetas.size(); ++j) {
                out[j] *= cq_ultraspherical(m, thetas[j], beta, q) * cq_ultraspherical(n, thetas[j], beta, q);
            }
        };
        const QuadratureResult res = periodic_integral(integrand, Interval::HalfPeriod, opts.quadrature);
        lhs = res.value;
        scale = res.integrand_scale;
        inputs.push_back(in("nodes", res.nodes));
        if (!res.converged) flags.push_back(Flag::NoConvergence);
    } catch (const Error& e) {
        note(flags, e);
    }
    return VerificationReport::evaluate(IdentityId::ULTRA_ORTHO, std::move(inputs), lhs, rhs,
                                        tolerance_for(IdentityId::ULTRA_ORTHO, opts), scale, std::move(flags));
}

// ---------------------------------------------------------------------------
// Structural and series identities

VerificationReport check_prop_2_1_2(const ParamSet4& p, QBase q, std::size_t n, double theta,
                                    const CheckOptions& opts) {
    p.validate();
    const EvaluationPoint pt(theta);
    Inputs inputs;
    push_params(inputs, p, q);
    inputs.push_back(in("n", n));
    inputs.push_back(in("theta", pt.theta()));
    const cplx lhs = phi_eval(n, pt.x(), pt.y(), p, q);
    const cplx rhs = qpoch(q.value(), q, n) * big_c_eval(n, pt, p, q);
    return VerificationReport::evaluate(IdentityId::PROP_2_1_2, std::move(inputs), lhs, rhs,
                                        tolerance_for(IdentityId::PROP_2_1_2, opts), 0.0, {});
}

VerificationReport check_prop_2_1_3(const ParamSet4& p, QBase q, std::size_t n, const CheckOptions& opts) {
    p.validate();
    require(n >= 1, "degree n >= 1");
    Inputs inputs;
    push_params(inputs, p, q);
    inputs.push_back(in("n", n));
    const cplx lhs = growth_root(n, p, q);
    const cplx rhs = std::max(std::abs(p.gamma), std::abs(p.delta));
    return VerificationReport::evaluate(IdentityId::PROP_2_1_3, std::move(inputs), lhs, rhs,
                                        tolerance_for(IdentityId::PROP_2_1_3, opts), 0.0, {});
}

VerificationReport check_prop_2_2(const ParamSet4& p, QBase q, std::size_t k, double t_abs, std::size_t cutoff,
                                  const CheckOptions& opts) {
    p.validate();
    const double radius = std::min(1.0 / std::abs(p.gamma), 1.0 / std::abs(p.delta));
    require(t_abs >= 0.0 && t_abs < radius, "|t| < min{1/|gamma|, 1/|delta|}");
    Inputs inputs;
    push_params(inputs, p, q);
    inputs.push_back(in("k", k));
    inputs.push_back(in("t_abs", t_abs));
    inputs.push_back(in("cutoff", cutoff));

    const cplx qq = q.value();
    const cplx ra = p.alpha_over_gamma();
    const cplx rb = p.beta_over_delta();
    const cplx rab = p.ratio_product();
    const double g = std::abs(p.gamma);
    const double d = std::abs(p.delta);

    // left[i] = |(ra;q)_i/(q;q)_i| g^i, right[i] likewise with rb and d.
    std::vector<double> left{1.0}, right{1.0};
    cplx qi{1.0, 0.0};
    const auto extend = [&](std::size_t upto) {
        while (left.size() <= upto) {
            const std::size_t i = left.size() - 1;
            const double denom = std::abs(1.0 - qi * qq);
            left.push_back(left[i] * std::abs(1.0 - ra * qi) / denom * g);
            right.push_back(right[i] * std::abs(1.0 - rb * qi) / denom * d);
            qi *= qq;
        }
    };
    const auto majorant_c = [&](std::size_t deg) {
        extend(deg);
        double s = 0.0;
        for (std::size_t i = 0; i <= deg; ++i) s += left[i] * right[deg - i];
        return s;
    };

    std::vector<Flag> flags;
    double partial = 0.0;
    double total = 0.0;
    cplx ratio_q{1.0, 0.0};   // (q;q)_{n+k}
    cplx ratio_ab{1.0, 0.0};  // (ab/gd;q)_{n+k}
    cplx qj{1.0, 0.0};
    for (std::size_t j = 0; j < k; ++j) {
        ratio_q *= 1.0 - qj * qq;
        ratio_ab *= 1.0 - rab * qj;
        qj *= qq;
    }
    double tpow = 1.0;
    std::size_t small_run = 0;
    std::size_t growth_run = 0;
    double previous = std::numeric_limits<double>::infinity();
    bool finished = false;
    for (std::size_t n = 0; n < opts.truncation.max_terms; ++n) {
        const double term = majorant_c(n + k) * majorant_c(n) * std::abs(ratio_q / ratio_ab) * tpow;
        if (!std::isfinite(term)) break;
        total += term;
        if (n < cutoff) partial += term;
        if (n >= cutoff) {
            small_run = term <= 1e-17 * total ? small_run + 1 : 0;
            growth_run = term > previous ? growth_run + 1 : 0;
            if (small_run >= 3) {
                finished = true;
                break;
            }
            if (growth_run >= 50) break;
        }
        previous = term;
        ratio_q *= 1.0 - qj * qq;
        ratio_ab *= 1.0 - rab * qj;
        qj *= qq;
        tpow *= t_abs;
    }
    if (!finished) flags.push_back(Flag::NoConvergence);
    return VerificationReport::evaluate(IdentityId::PROP_2_2, std::move(inputs), partial, total,
                                        tolerance_for(IdentityId::PROP_2_2, opts), 0.0, std::move(flags));
}

VerificationReport check_prop_2_4(const ParamSet4& p, QBase q, std::size_t n, cplx x, cplx y,
                                  const CheckOptions& opts) {
    p.require_nonzero_scales();
    require(x != cplx{} && y != cplx{}, "x and y must be nonzero");
    Inputs inputs;
    push_params(inputs, p, q);
    inputs.push_back(in("n", n));
    inputs.push_back(in("x", x));
    inputs.push_back(in("y", y));

    std::vector<Flag> flags;
    cplx lhs = kNaNc;
    try {
        lhs = phi_qintegral_repr(n, x, y, p, q, opts.truncation);
    } catch (const Error& e) {
        note(flags, e);
    }
    const cplx rhs = phi_eval(n, x, y, p, q);
    return VerificationReport::evaluate(IdentityId::PROP_2_4, std::move(inputs), lhs, rhs,
                                        tolerance_for(IdentityId::PROP_2_4, opts), 0.0, std::move(flags));
}

VerificationReport check_rogers_6w5(cplx a, cplx b, cplx c, cplx d, QBase q, const CheckOptions& opts) {
    require(b != cplx{} && c != cplx{} && d != cplx{}, "b, c, d nonzero");
    const cplx z = a * q.value() / (b * c * d);
    require(std::abs(z) < 1.0, "|aq/bcd| < 1");
    Inputs inputs{in("q", q.value()), in("a", a), in("b", b), in("c", c), in("d", d)};

    std::vector<Flag> flags;
    cplx lhs = kNaNc, rhs = kNaNc;
    try {
        const cplx rest[] = {b, c, d};
        lhs = very_well_poised(a, rest, q, z, opts.truncation);
    } catch (const Error& e) {
        note(flags, e);
    }
    try {
        rhs = rogers_6w5_rhs(a, b, c, d, q, opts.truncation);
    } catch (const Error& e) {
        note(flags, e);
    }
    return VerificationReport::evaluate(IdentityId::ROGERS_6W5, std::move(inputs), lhs, rhs,
                                        tolerance_for(IdentityId::ROGERS_6W5, opts), 0.0, std::move(flags));
}

VerificationReport check_qbinomial(cplx a, QBase q, cplx z, const CheckOptions& opts) {
    require(std::abs(z) < 1.0, "|z| < 1");
    Inputs inputs{in("q", q.value()), in("a", a), in("z", z)};

    std::vector<Flag> flags;
    cplx lhs = kNaNc, rhs = kNaNc;
    try {
        lhs = phi_series(PhiSpec{{a}, {}, q, z}, opts.truncation);
    } catch (const Error& e) {
        note(flags, e);
    }
    try {
        const cplx denom = qpoch(z, q, infinity, opts.truncation);
        if (std::abs(denom) < kNearSingularThreshold) throw NearSingular("(z;q)_inf vanishes");
        rhs = qpoch(a * z, q, infinity, opts.truncation) / denom;
    } catch (const Error& e) {
        note(flags, e);
    }
    return VerificationReport::evaluate(IdentityId::QBINOMIAL, std::move(inputs), lhs, rhs,
                                        tolerance_for(IdentityId::QBINOMIAL, opts), 0.0, std::move(flags));
}

// ---------------------------------------------------------------------------
// Cases and sweeps

IdentityId identity_of(const Case& c) noexcept {
    constexpr IdentityId order[] = {IdentityId::THM_1_1,    IdentityId::THM_1_2,   IdentityId::THM_1_3,
                                    IdentityId::PROP_2_1_2, IdentityId::PROP_2_1_3, IdentityId::PROP_2_2,
                                    IdentityId::PROP_2_4,   IdentityId::PROP_3_1,  IdentityId::ROGERS_6W5,
                                    IdentityId::QBINOMIAL,  IdentityId::ULTRA_ORTHO};
    static_assert(std::size(order) == std::variant_size_v<Case>);
    return order[c.index()];
}

namespace {

struct CaseRunner {
    const CheckOptions& opts;

    VerificationReport operator()(const Thm11Case& c) const { return check_thm_1_1(c.p, QBase(c.q), c.m, c.n, opts); }
    VerificationReport operator()(const Thm12Case& c) const { return check_thm_1_2(c.p, c.s, c.t, QBase(c.q), opts); }
    VerificationReport operator()(const Thm13Case& c) const {
        return check_thm_1_3(c.r, c.gamma, c.delta, QBase(c.q), c.m, c.n, opts);
    }
    VerificationReport operator()(const Prop212Case& c) const {
        return check_prop_2_1_2(c.p, QBase(c.q), c.n, c.theta, opts);
    }
    VerificationReport operator()(const Prop213Case& c) const { return check_prop_2_1_3(c.p, QBase(c.q), c.n, opts); }
    VerificationReport operator()(const Prop22Case& c) const {
        return check_prop_2_2(c.p, QBase(c.q), c.k, c.t_abs, 200, opts);
    }
    VerificationReport operator()(const Prop24Case& c) const {
        return check_prop_2_4(c.p, QBase(c.q), c.n, c.x, c.y, opts);
    }
    VerificationReport operator()(const Prop31Case& c) const {
        return check_prop_3_1(c.r, c.gamma, c.delta, QBase(c.q), c.m, c.thetas, opts);
    }
    VerificationReport operator()(const RogersCase& c) const {
        return check_rogers_6w5(c.a, c.b, c.c, c.d, QBase(c.q), opts);
    }
    VerificationReport operator()(const QBinomialCase& c) const { return check_qbinomial(c.a, QBase(c.q), c.z, opts); }
    VerificationReport operator()(const UltraCase& c) const {
        return check_ultra_ortho(c.beta, QBase(c.q), c.m, c.n, opts);
    }
};

struct CaseValidator {
    void operator()(const Thm11Case& c) const {
        QBase q(c.q);
        c.p.validate();
        validate_weight(c.p);
    }
    void operator()(const Thm12Case& c) const {
        QBase q(c.q);
        c.p.validate();
        validate_weight(c.p);
        const double bound = std::max({std::abs(c.p.gamma * c.s), std::abs(c.p.gamma * c.t),
                                       std::abs(c.p.delta * c.s), std::abs(c.p.delta * c.t)});
        require(bound < 1.0, "max{|gamma s|,|gamma t|,|delta s|,|delta t|} < 1");
    }
    void operator()(const Thm13Case& c) const {
        QBase q(c.q);
        validate_thm_1_3(c.r, c.gamma, c.delta, c.m, c.n);
    }
    void operator()(const Prop212Case& c) const {
        QBase q(c.q);
        c.p.validate();
    }
    void operator()(const Prop213Case& c) const {
        QBase q(c.q);
        c.p.validate();
        require(c.n >= 1, "degree n >= 1");
    }
    void operator()(const Prop22Case& c) const {
        QBase q(c.q);
        c.p.validate();
        require(c.t_abs >= 0.0 && c.t_abs < std::min(1.0 / std::abs(c.p.gamma), 1.0 / std::abs(c.p.delta)),
                "|t| < min{1/|gamma|, 1/|delta|}");
    }
    void operator()(const Prop24Case& c) const {
        QBase q(c.q);
        c.p.require_nonzero_scales();
        require(c.x != cplx{} && c.y != cplx{}, "x and y must be nonzero");
    }
    void operator()(const Prop31Case& c) const {
        QBase q(c.q);
        c.r.validate();
        require(c.r.a != cplx{}, "a != 0");
        require(c.gamma != cplx{} && c.delta != cplx{}, "gamma and delta must be nonzero");
        require(!c.thetas.empty(), "at least one evaluation angle");
    }
    void operator()(const RogersCase& c) const {
        const QBase q(c.q);
        require(c.b != cplx{} && c.c != cplx{} && c.d != cplx{}, "b, c, d nonzero");
        require(std::abs(c.a * q.value() / (c.b * c.c * c.d)) < 1.0, "|aq/bcd| < 1");
    }
    void operator()(const QBinomialCase& c) const {
        QBase q(c.q);
        require(std::abs(c.z) < 1.0, "|z| < 1");
    }
    void operator()(const UltraCase& c) const {
        QBase q(c.q);
        require(std::abs(c.beta) < 1.0, "|beta| < 1");
    }
};

// min_k |1 - x q^k| over the factors that can come near zero.
double min_factor(cplx x, cplx q) {
    double best = std::numeric_limits<double>::infinity();
    cplx v = x;
    for (int k = 0; k < 10000 && std::abs(v) >= 0.5; ++k) {
        best = std::min(best, std::abs(1.0 - v));
        v *= q;
    }
    return best;
}

class Drawer {
public:
    Drawer(std::uint64_t seed, std::size_t index) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
        rng_.seed(seq);
    }

    double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    double uniform(Range r) { return r.lo + (r.hi - r.lo) * unit(); }
    cplx polar(Range modulus, Range phase) { return std::polar(uniform(modulus), uniform(phase)); }
    std::size_t index(std::size_t max_inclusive) {
        return std::min<std::size_t>(static_cast<std::size_t>(unit() * static_cast<double>(max_inclusive + 1)),
                                     max_inclusive);
    }

private:
    std::mt19937_64 rng_;
};

ParamSet4 draw_params(Drawer& d, const SweepSpec& spec) {
    ParamSet4 p;
    p.gamma = d.polar(spec.scale_modulus, spec.scale_phase);
    p.delta = d.polar(spec.scale_modulus, spec.scale_phase);
    p.alpha = d.polar(spec.ratio_modulus, spec.phase) * p.gamma;
    p.beta = d.polar(spec.ratio_modulus, spec.phase) * p.delta;
    return p;
}

bool weight_ok(const ParamSet4& p, const SweepSpec& spec) {
    return std::abs(p.alpha / p.delta) <= spec.weight_margin && std::abs(p.beta / p.gamma) <= spec.weight_margin;
}

std::optional<Case> draw_once(IdentityId id, Drawer& d, const SweepSpec& spec) {
    const cplx q = d.uniform(spec.q);
    switch (id) {
        case IdentityId::THM_1_1: {
            const ParamSet4 p = draw_params(d, spec);
            if (!weight_ok(p, spec)) return std::nullopt;
            return Thm11Case{p, q, d.index(spec.m_max), d.index(spec.n_max)};
        }
        case IdentityId::THM_1_2: {
            const ParamSet4 p = draw_params(d, spec);
            if (!weight_ok(p, spec)) return std::nullopt;
            const double m = std::max(std::abs(p.gamma), std::abs(p.delta));
            const cplx s = std::polar(d.uniform({0.0, spec.st_bound}) / m, d.uniform(spec.phase));
            const cplx t = std::polar(d.uniform({0.0, spec.st_bound}) / m, d.uniform(spec.phase));
            return Thm12Case{p, s, t, q};
        }
        case IdentityId::THM_1_3: {
            const ReducedParams r{d.polar(spec.ratio_modulus, spec.phase), d.polar(spec.ratio_modulus, spec.phase)};
            const cplx g = d.polar(spec.scale_modulus, spec.scale_phase);
            const cplx dl = d.polar(spec.scale_modulus, spec.scale_phase);
            std::size_t m = d.index(spec.m_max);
            std::size_t n = d.index(spec.n_max);
            if ((m + n) % 2 == 0 && m < n) std::swap(m, n);
            if (std::abs(r.a * g / dl) > spec.weight_margin || std::abs(r.a * dl / g) > spec.weight_margin) {
                return std::nullopt;
            }
            if (std::abs(r.a) < spec.singular_margin) return std::nullopt;
            return Thm13Case{r, g, dl, q, m, n};
        }
        case IdentityId::PROP_2_1_2: {
            const ParamSet4 p = draw_params(d, spec);
            return Prop212Case{p, q, d.index(spec.n_max), d.uniform(spec.phase)};
        }
        case IdentityId::PROP_2_1_3:
            return Prop213Case{draw_params(d, spec), q, spec.growth_degree};
        case IdentityId::PROP_2_2: {
            const ParamSet4 p = draw_params(d, spec);
            const double radius = std::min(1.0 / std::abs(p.gamma), 1.0 / std::abs(p.delta));
            return Prop22Case{p, q, d.index(3), 0.9 * radius};
        }
        case IdentityId::PROP_2_4: {
            const ParamSet4 p = draw_params(d, spec);
            const cplx x = d.polar(spec.point_modulus, spec.phase);
            const cplx y = d.polar(spec.point_modulus, spec.phase);
            if (std::abs(p.alpha * x / (p.delta * y)) > spec.weight_margin ||
                std::abs(p.beta * y / (p.gamma * x)) > spec.weight_margin) {
                return std::nullopt;
            }
            const cplx ratio = p.gamma * x / (p.delta * y);
            if (min_factor(ratio, q) < spec.lattice_margin || min_factor(q / ratio, q) < spec.lattice_margin) {
                return std::nullopt;
            }
            return Prop24Case{p, q, d.index(spec.n_max), x, y};
        }
        case IdentityId::PROP_3_1: {
            const ReducedParams r{d.polar(spec.ratio_modulus, spec.phase), d.polar(spec.ratio_modulus, spec.phase)};
            if (std::abs(r.a) < spec.singular_margin) return std::nullopt;
            const cplx g = d.polar(spec.scale_modulus, spec.scale_phase);
            const cplx dl = d.polar(spec.scale_modulus, spec.scale_phase);
            std::vector<double> thetas(spec.theta_points);
            for (std::size_t j = 0; j < thetas.size(); ++j) {
                thetas[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(thetas.size());
            }
            return Prop31Case{r, g, dl, q, d.index(spec.m_max), std::move(thetas)};
        }
        case IdentityId::ROGERS_6W5: {
            const cplx a = d.polar(spec.ratio_modulus, spec.phase);
            const cplx b = d.polar(spec.scale_modulus, spec.phase);
            const cplx c = d.polar(spec.scale_modulus, spec.phase);
            const cplx dd = d.polar(spec.scale_modulus, spec.phase);
            const cplx aq = a * q;
            if (std::abs(aq / (b * c * dd)) > spec.rogers_argument_bound) return std::nullopt;
            const cplx root = std::sqrt(a);
            for (const cplx x : {aq / b, aq / c, aq / dd, aq / (b * c * dd), root, -root}) {
                if (min_factor(x, q) < spec.singular_margin) return std::nullopt;
            }
            return RogersCase{a, b, c, dd, q};
        }
        case IdentityId::QBINOMIAL: {
            const cplx a = d.polar(spec.numerator_modulus, spec.phase);
            const cplx z = d.polar(spec.z_modulus, spec.phase);
            if (min_factor(z, q) < spec.singular_margin) return std::nullopt;
            return QBinomialCase{a, q, z};
        }
        case IdentityId::ULTRA_ORTHO: {
            const double beta = d.uniform(spec.ratio_modulus) * (d.unit() < 0.5 ? -1.0 : 1.0);
            return UltraCase{beta, q, d.index(spec.m_max), d.index(spec.n_max)};
        }
    }
    return std::nullopt;
}

}  // namespace

void validate_case(const Case& c) { std::visit(CaseValidator{}, c); }

VerificationReport run_case(const Case& c, const CheckOptions& opts) { return std::visit(CaseRunner{opts}, c); }

std::vector<Case> sample_cases(IdentityId id, const SweepSpec& spec) {
    require(spec.q.lo >= 0.0 && spec.q.hi < 1.0 && spec.q.lo <= spec.q.hi, "sweep q range inside [0, 1)");
    require(spec.max_attempts > 0, "max_attempts > 0");
    std::vector<Case> cases;
    cases.reserve(spec.draws);
    for (std::size_t i = 0; i < spec.draws; ++i) {
        Drawer drawer(spec.seed, i);
        std::optional<Case> drawn;
        for (std::size_t attempt = 0; attempt < spec.max_attempts && !drawn; ++attempt) {
            drawn = draw_once(id, drawer, spec);
            if (drawn) {
                try {
                    validate_case(*drawn);
                } catch (const DomainError&) {
                    drawn.reset();
                }
            }
        }
        if (!drawn) {
            throw DomainError("sweep box admits no valid draw for " + std::string(to_string(id)) + " (draw " +
                              std::to_string(i) + ")");
        }
        cases.push_back(std::move(*drawn));
    }
    return cases;
}

std::vector<VerificationReport> run_sweep(IdentityId id, const SweepSpec& spec) {
    const std::vector<Case> cases = sample_cases(id, spec);
    std::vector<std::optional<VerificationReport>> slots(cases.size());
    std::vector<std::exception_ptr> errors(cases.size());

    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < cases.size(); i = next++) {
            try {
                slots[i] = run_case(cases[i], spec.options);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads =
        std::min<std::size_t>(cases.size(), std::max(1u, std::thread::hardware_concurrency()));
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
    }

    std::vector<VerificationReport> reports;
    reports.reserve(cases.size());
    for (std::size_t i = 0; i < cases.size(); ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        reports.push_back(std::move(*slots[i]));
    }
    return reports;
}

}  // namespace qortho
