#pragma once

// Four-parameter q-functions C_n and Phi_n, the continuous q-ultraspherical
// polynomials, the weight omega, and the closed forms that go with them.
//
// C_n^{(alpha,beta,gamma,delta)}(e^{i theta}; q) is the coefficient of t^n in
//   (alpha t e^{i theta}, beta t e^{-i theta}; q)_inf / (gamma t e^{i theta}, delta t e^{-i theta}; q)_inf.
// Applying the q-binomial theorem to each numerator/denominator pair gives
//   C_n = sum_k (alpha/gamma;q)_k (beta/delta;q)_{n-k} / ((q;q)_k (q;q)_{n-k})
//               gamma^k delta^{n-k} e^{i(2k-n) theta},
// which is what every evaluator below uses.

#include <cstddef>
#include <span>
#include <vector>

#include "qortho/types.hpp"

namespace qortho {

/// (alpha, beta, gamma, delta). gamma and delta must be nonzero for any
/// evaluation; the orthogonality hypotheses |alpha/gamma| < 1,
/// |beta/delta| < 1 are checked by validate(), which the verification
/// checkers call. Evaluators accept the degenerate ratio-one case.
struct ParamSet4 {
    cplx alpha;
    cplx beta;
    cplx gamma;
    cplx delta;

    cplx alpha_over_gamma() const { return alpha / gamma; }
    cplx beta_over_delta() const { return beta / delta; }
    cplx ratio_product() const { return alpha * beta / (gamma * delta); }

    /// Throws DomainError if gamma or delta is zero.
    void require_nonzero_scales() const;
    /// Also requires |alpha/gamma| < 1 and |beta/delta| < 1.
    void validate() const;

    friend bool operator==(const ParamSet4&, const ParamSet4&) = default;
};

/// The reduction alpha = a gamma, beta = a delta and the second family's b.
struct ReducedParams {
    cplx a;
    cplx b;

    void validate() const;  // |a| < 1, |b| < 1
    ParamSet4 a_family(cplx gamma, cplx delta) const { return {a * gamma, a * delta, gamma, delta}; }
    ParamSet4 b_family(cplx gamma, cplx delta) const { return {b * gamma, b * delta, gamma, delta}; }
};

/// theta reduced into [0, 2 pi); x = e^{i theta}, y = e^{-i theta}.
class EvaluationPoint {
public:
    explicit EvaluationPoint(double theta);
    double theta() const noexcept { return theta_; }
    cplx x() const noexcept { return x_; }
    cplx y() const noexcept { return y_; }

private:
    double theta_;
    cplx x_;
    cplx y_;
};

/// Coefficient of e^{i(2k-n) theta} in C_n, k = 0..n.
std::vector<cplx> big_c_coeffs(std::size_t n, const ParamSet4& p, QBase q);

cplx big_c_eval(std::size_t n, const EvaluationPoint& pt, const ParamSet4& p, QBase q);

/// C_n at many points; unit_x[j] = e^{i theta_j}, unit_y[j] = e^{-i theta_j}.
void big_c_eval_batch(std::size_t n, std::span<const cplx> unit_x, std::span<const cplx> unit_y,
                      const ParamSet4& p, QBase q, std::span<cplx> out);

/// Phi_n(x, y | q) = (q;q)_n * sum_k (alpha/gamma)_k (beta/delta)_{n-k} / ((q)_k (q)_{n-k}) (gamma x)^k (delta y)^{n-k}.
cplx phi_eval(std::size_t n, cplx x, cplx y, const ParamSet4& p, QBase q);

/// Continuous q-ultraspherical (Rogers) polynomial by its explicit cosine sum.
cplx cq_ultraspherical(std::size_t n, double theta, cplx beta, QBase q);

/// Coefficient of cos((n-2k) theta) in C_n(cos theta; beta | q), k = 0..n.
std::vector<cplx> cq_ultraspherical_coeffs(std::size_t n, cplx beta, QBase q);

/// omega(cos theta | q) = (g/d e^{2i theta}, d/g e^{-2i theta}; q)_inf / (a/d e^{2i theta}, b/g e^{-2i theta}; q)_inf.
/// NearSingular when a denominator product falls below 1e-12 in magnitude.
cplx weight_omega(const EvaluationPoint& pt, const ParamSet4& p, QBase q, const TruncationPolicy& policy = {});

void weight_omega_batch(std::span<const cplx> unit_x, const ParamSet4& p, QBase q, const TruncationPolicy& policy,
                        std::span<cplx> out);

/// h_n(a|q) = (q, a^2; q)_inf (q;q)_n (1 - a q^n) / (2 pi (a, aq; q)_inf (a^2;q)_n (1 - a)).
cplx h_norm(std::size_t n, cplx a, QBase q, const TruncationPolicy& policy = {});

/// Diagonal value of the four-parameter orthogonality relation:
///   2 pi (a/g, b/d; q)_inf / (q, ab/gd; q)_inf * (1/(1 - a q^n / g) + 1/(1 - b q^n / d))
///   * (ab/gd; q)_n (g d)^n / (q;q)_n.
cplx diag_rhs_thm11(std::size_t n, const ParamSet4& p, QBase q, const TruncationPolicy& policy = {});

/// Coefficients c_n (n = 0..m) of
///   C_m^{(b g, b d, g, d)} = sum_n c_n C_n^{(a g, a d, g, d)};
/// zero unless n = m (mod 2). gamma_delta is the product g*d.
std::vector<cplx> connection_coeffs(std::size_t m, const ReducedParams& r, cplx gamma_delta, QBase q);

/// |C_n(1; q)|^{1/n}; approaches max(|gamma|, |delta|) as n grows.
double growth_root(std::size_t n, const ParamSet4& p, QBase q);

}  // namespace qortho
