#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qortho/qcore.hpp"
#include "qortho/qfun.hpp"
#include "qortho/quad.hpp"

using namespace qortho;
using oracle::rel;

namespace {

constexpr double kPi = std::numbers::pi;

ParamSet4 random_params(oracle::Rng& rng, double ratio_max = 0.6) {
    ParamSet4 p;
    p.gamma = rng.polar(0.5, 1.5);
    p.delta = rng.polar(0.5, 1.5);
    p.alpha = rng.polar(0.0, ratio_max) * p.gamma;
    p.beta = rng.polar(0.0, ratio_max) * p.delta;
    return p;
}

const ParamSet4 kBox{0.2, 0.1, 0.8, 0.9};

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_NOTHROW(kBox.validate());
    CHECK_THROWS_AS((ParamSet4{0.9, 0.1, 0.8, 0.9}.validate()), DomainError);
    CHECK_THROWS_AS((ParamSet4{0.1, 0.1, 0.0, 0.9}.require_nonzero_scales()), DomainError);
    CHECK_THROWS_AS((ReducedParams{1.2, 0.1}.validate()), DomainError);
    CHECK(rel(EvaluationPoint(-1.0).theta(), 2.0 * kPi - 1.0) < 1e-15);
    CHECK(rel(EvaluationPoint(0.3).x(), std::polar(1.0, 0.3)) < 1e-15);
}

TEST_CASE("big_c trivial values") {
    const QBase q(0.5);
    CHECK(big_c_eval(0, EvaluationPoint(0.4), kBox, q) == cplx{1.0});
    const ParamSet4 equal{0.8, 0.9, 0.8, 0.9};
    for (std::size_t n = 1; n <= 6; ++n) CHECK(std::abs(big_c_eval(n, EvaluationPoint(1.1), equal, q)) < 1e-15);
}

TEST_CASE("big_c reduces to the Rogers polynomial") {
    const QBase q(0.5);
    const ParamSet4 p{0.3, 0.3, 1.0, 1.0};
    CHECK(rel(big_c_eval(2, EvaluationPoint(kPi / 3), p, q), cq_ultraspherical(2, kPi / 3, 0.3, q)) < 1e-14);
}

TEST_CASE("big_c matches the generating-function power series") {
    oracle::Rng rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        const ParamSet4 p = random_params(rng);
        const double qv = rng.uniform(0.1, 0.7);
        const double theta = rng.uniform(0.0, 2.0 * kPi);
        const auto series = oracle::generating_function(p.alpha, p.beta, p.gamma, p.delta, qv, theta, 8);
        for (std::size_t n = 0; n <= 8; ++n) {
            CHECK(rel(big_c_eval(n, EvaluationPoint(theta), p, QBase(qv)), series[n]) <= 1e-11);
        }
    }
}

TEST_CASE("big_c coefficients sum to the evaluation") {
    const QBase q(0.4);
    const auto c = big_c_coeffs(5, kBox, q);
    const double theta = 0.9;
    cplx sum = 0.0;
    for (std::size_t k = 0; k <= 5; ++k) sum += c[k] * std::polar(1.0, (2.0 * k - 5.0) * theta);
    CHECK(rel(sum, big_c_eval(5, EvaluationPoint(theta), kBox, q)) < 1e-14);
}

TEST_CASE("big_c batch equals pointwise") {
    oracle::Rng rng(22);
    const ParamSet4 p = random_params(rng);
    const QBase q(0.6);
    std::vector<cplx> xs(37), ys(37), out(37);
    std::vector<double> thetas(37);
    for (std::size_t j = 0; j < 37; ++j) {
        thetas[j] = rng.uniform(0.0, 2.0 * kPi);
        xs[j] = std::polar(1.0, thetas[j]);
        ys[j] = std::conj(xs[j]);
    }
    big_c_eval_batch(7, xs, ys, p, q, out);
    for (std::size_t j = 0; j < 37; ++j) CHECK(rel(out[j], big_c_eval(7, EvaluationPoint(thetas[j]), p, q)) < 1e-13);
}

TEST_CASE("conjugate symmetry for real parameters") {
    oracle::Rng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const double g = rng.uniform(0.5, 1.5), d = rng.uniform(0.5, 1.5);
        const ParamSet4 p{rng.uniform(-0.6, 0.6) * g, rng.uniform(-0.6, 0.6) * d, g, d};
        const QBase q(rng.uniform(0.1, 0.7));
        const std::size_t n = rng.index(12);
        const double theta = rng.uniform(0.0, 2.0 * kPi);
        const cplx v = big_c_eval(n, EvaluationPoint(theta), p, q);
        CHECK(std::abs(big_c_eval(n, EvaluationPoint(-theta), p, q) - std::conj(v)) <= 1e-13 * std::max(1.0, std::abs(v)));

        // Real values need the k <-> n-k pairing: alpha = beta and gamma = delta.
        const ParamSet4 sym{p.alpha, p.alpha, g, g};
        const cplx s = big_c_eval(n, EvaluationPoint(theta), sym, q);
        CHECK(std::abs(s.imag()) <= 1e-13 * std::max(1.0, std::abs(s)));
    }
}

TEST_CASE("big_c is not real for asymmetric real parameters") {
    const ParamSet4 p{0.1, 0.3, 0.7, 1.2};
    const cplx v = big_c_eval(3, EvaluationPoint(0.8), p, QBase(0.5));
    const auto series = oracle::generating_function(0.1, 0.3, 0.7, 1.2, 0.5, 0.8, 3);
    CHECK(rel(v, series[3]) < 1e-13);
    CHECK(std::abs(v.imag()) > 0.1);
}

TEST_CASE("bound on the nonnegative-coefficient subdomain") {
    oracle::Rng rng(24);
    for (int trial = 0; trial < 50; ++trial) {
        const double g = rng.uniform(0.5, 1.5), d = rng.uniform(0.5, 1.5);
        const ParamSet4 p{rng.uniform(0.0, 0.99) * g, rng.uniform(0.0, 0.99) * d, g, d};
        const QBase q(rng.uniform(0.0, 0.9));
        const std::size_t n = rng.index(12);
        const double at_one = std::abs(big_c_eval(n, EvaluationPoint(0.0), p, q));
        for (int j = 0; j < 20; ++j) {
            CHECK(std::abs(big_c_eval(n, EvaluationPoint(rng.uniform(0.0, 2.0 * kPi)), p, q)) <= at_one * (1 + 1e-14));
        }
    }
}

TEST_CASE("phi_eval known values") {
    const QBase q(0.5);
    CHECK(phi_eval(0, 0.4, 0.7, kBox, q) == cplx{1.0});
    const ParamSet4 p{0.2, 0.1, 0.9, 0.8};
    const auto series = oracle::phi_generating_function(p.alpha, p.beta, p.gamma, p.delta, 0.5, 0.4, 0.7, 3);
    CHECK(rel(phi_eval(3, 0.4, 0.7, p, q), oracle::qpoch(0.5, 0.5, 3) * series[3]) < 1e-13);
}

TEST_CASE("phi_eval on the unit circle") {
    oracle::Rng rng(25);
    for (int trial = 0; trial < 40; ++trial) {
        const ParamSet4 p = random_params(rng);
        const QBase q(rng.uniform(0.1, 0.7));
        const EvaluationPoint pt(rng.uniform(0.0, 2.0 * kPi));
        const std::size_t n = rng.index(12);
        CHECK(rel(phi_eval(n, pt.x(), pt.y(), p, q), qpoch(q.value(), q, n) * big_c_eval(n, pt, p, q)) <= 1e-12);
    }
}

TEST_CASE("cq_ultraspherical known values and recurrence") {
    const QBase q(0.5);
    CHECK(cq_ultraspherical(0, 1.3, 0.3, q) == cplx{1.0});
    CHECK(rel(cq_ultraspherical(1, 0.0, 0.3, q), 2.8) < 1e-15);
    CHECK(rel(cq_ultraspherical(1, 0.7, 0.3, q), 2.0 * std::cos(0.7) * 0.7 / 0.5) < 1e-15);
    CHECK(rel(cq_ultraspherical(2, 1.0, 0.3, q), oracle::ultra_recurrence(2, 1.0, 0.3, 0.5)[2]) < 1e-14);

    oracle::Rng rng(26);
    for (int trial = 0; trial < 20; ++trial) {
        const double beta = rng.uniform(-0.9, 0.9);
        const double qv = rng.uniform(0.05, 0.8);
        const double theta = rng.uniform(0.0, kPi);
        // Near a zero of C_n the cosine sum cancels; rounding is relative to sum_k |c_k|.
        std::vector<cplx> c(32);
        std::vector<double> mass(32);
        for (std::size_t n = 0; n < c.size(); ++n) {
            c[n] = cq_ultraspherical(n, theta, beta, QBase(qv));
            for (const cplx ck : cq_ultraspherical_coeffs(n, beta, QBase(qv))) mass[n] += std::abs(ck);
        }
        const double x = std::cos(theta);
        for (std::size_t n = 1; n <= 30; ++n) {
            const double qn = std::pow(qv, n);
            const cplx a = (1.0 - qn * qv) * c[n + 1];
            const cplx b = 2.0 * x * (1.0 - beta * qn) * c[n];
            const cplx d = (1.0 - beta * beta * qn / qv) * c[n - 1];
            const double scale = std::abs(1.0 - qn * qv) * mass[n + 1] + std::abs(2.0 * (1.0 - beta * qn)) * mass[n] +
                                 std::abs(1.0 - beta * beta * qn / qv) * mass[n - 1];
            CHECK(std::abs(a - b + d) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("cq_ultraspherical coefficient table") {
    const QBase q(0.5);
    const auto c = cq_ultraspherical_coeffs(2, 0.3, q);
    // (beta;q)_k (beta;q)_{2-k} / ((q;q)_k (q;q)_{2-k})
    const auto ratio = [](std::size_t k) { return oracle::qpoch(0.3, 0.5, k) / oracle::qpoch(0.5, 0.5, k); };
    for (std::size_t k = 0; k <= 2; ++k) CHECK(rel(c[k], ratio(k) * ratio(2 - k)) < 1e-15);
}

TEST_CASE("weight_omega") {
    const QBase q(0.5);
    const ParamSet4 equal{0.8, 0.9, 0.8, 0.9};
    for (double theta : {0.1, 1.0, 2.5}) CHECK(rel(weight_omega(EvaluationPoint(theta), equal, q), 1.0) < 1e-14);

    const ParamSet4 swapped{kBox.beta, kBox.alpha, kBox.delta, kBox.gamma};
    CHECK(rel(weight_omega(EvaluationPoint(2.0 * kPi - 0.7), kBox, q), weight_omega(EvaluationPoint(0.7), swapped, q)) <
          1e-14);

    const cplx w = std::polar(1.0, 1.4);
    const cplx expect = oracle::qpoch_inf(kBox.gamma / kBox.delta * w, 0.5) *
                        oracle::qpoch_inf(kBox.delta / kBox.gamma / w, 0.5) /
                        (oracle::qpoch_inf(kBox.alpha / kBox.delta * w, 0.5) *
                         oracle::qpoch_inf(kBox.beta / kBox.gamma / w, 0.5));
    CHECK(rel(weight_omega(EvaluationPoint(0.7), kBox, q), expect) < 1e-13);

    // e^{2 i theta} = 1 with alpha = delta puts a zero in the denominator.
    CHECK_THROWS_AS(weight_omega(EvaluationPoint(0.0), ParamSet4{0.9, 0.1, 1.0, 0.9}, q), NearSingular);
}

TEST_CASE("weight_omega batch equals pointwise") {
    oracle::Rng rng(27);
    const ParamSet4 p = random_params(rng);
    const QBase q(0.55);
    std::vector<cplx> xs(41), out(41);
    std::vector<double> thetas(41);
    for (std::size_t j = 0; j < 41; ++j) {
        thetas[j] = rng.uniform(0.0, 2.0 * kPi);
        xs[j] = std::polar(1.0, thetas[j]);
    }
    weight_omega_batch(xs, p, q, {}, out);
    for (std::size_t j = 0; j < 41; ++j) CHECK(rel(out[j], weight_omega(EvaluationPoint(thetas[j]), p, q)) < 1e-13);
}

TEST_CASE("h_norm") {
    const QBase q(0.5);
    const double a = 0.3;
    const double expect0 = (oracle::qpoch_inf(0.5, 0.5) * oracle::qpoch_inf(a * a, 0.5) /
                            (2.0 * kPi * oracle::qpoch_inf(a, 0.5) * oracle::qpoch_inf(a * 0.5, 0.5)))
                               .real();
    CHECK(rel(h_norm(0, a, q), expect0) < 1e-13);
    for (std::size_t n = 0; n < 8; ++n) {
        const double qn = std::pow(0.5, n);
        const cplx ratio = (1 - qn * 0.5) * (1 - a * qn * 0.5) / ((1 - a * a * qn) * (1 - a * qn));
        CHECK(rel(h_norm(n + 1, a, q) / h_norm(n, a, q), ratio) < 1e-14);
    }
    // Quadrature oracle: int_0^pi C_2^2 W = 1/h_2 with the (a, a, 1, 1) weight.
    const ParamSet4 w{a, a, 1.0, 1.0};
    const cplx integral = 0.5 * oracle::trapezoid(
                                    [&](double t) {
                                        const cplx c = cq_ultraspherical(2, t, a, q);
                                        return c * c * weight_omega(EvaluationPoint(t), w, q);
                                    },
                                    512);
    CHECK(rel(integral, 1.0 / h_norm(2, a, q)) < 1e-11);
    CHECK_THROWS_AS(h_norm(1, 1.2, q), DomainError);
}

TEST_CASE("diag_rhs_thm11") {
    const QBase q(0.5);
    const cplx integral = oracle::trapezoid([&](double t) { return weight_omega(EvaluationPoint(t), kBox, q); }, 512);
    CHECK(rel(diag_rhs_thm11(0, kBox, q), integral) < 1e-11);

    const cplx c{0.7, 0.4};
    const ParamSet4 scaled{c * kBox.alpha, c * kBox.beta, c * kBox.gamma, c * kBox.delta};
    for (std::size_t n = 0; n < 6; ++n) {
        CHECK(rel(diag_rhs_thm11(n, scaled, q), ipow(c * c, n) * diag_rhs_thm11(n, kBox, q)) < 1e-13);
    }

    // gamma = delta = 1: closed form with alpha, beta in place of the ratios.
    const double al = 0.35, be = 0.15;
    for (std::size_t n = 0; n < 5; ++n) {
        const double qn = std::pow(0.5, n);
        const cplx expect = 2.0 * kPi * oracle::qpoch_inf(al, 0.5) * oracle::qpoch_inf(be, 0.5) /
                            (oracle::qpoch_inf(0.5, 0.5) * oracle::qpoch_inf(al * be, 0.5)) *
                            (1.0 / (1.0 - al * qn) + 1.0 / (1.0 - be * qn)) * oracle::qpoch(al * be, 0.5, n) /
                            oracle::qpoch(0.5, 0.5, n);
        CHECK(rel(diag_rhs_thm11(n, ParamSet4{al, be, 1.0, 1.0}, q), expect) < 1e-13);
    }
}

TEST_CASE("connection coefficients") {
    const QBase q(0.5);
    const auto c0 = connection_coeffs(0, ReducedParams{0.3, 0.5}, 0.72, q);
    REQUIRE(c0.size() == 1);
    CHECK(rel(c0[0], 1.0) < 1e-15);

    const auto same = connection_coeffs(5, ReducedParams{0.3, 0.3}, 0.72, q);
    for (std::size_t n = 0; n < 5; ++n) CHECK(std::abs(same[n]) < 1e-15);
    CHECK(rel(same[5], 1.0) < 1e-14);

    const auto c2 = connection_coeffs(2, ReducedParams{0.3, 0.5}, 0.72, q);
    CHECK(c2[1] == cplx{0.0});
    const ParamSet4 fa{0.3 * 0.8, 0.3 * 0.9, 0.8, 0.9};
    const ParamSet4 fb{0.5 * 0.8, 0.5 * 0.9, 0.8, 0.9};
    for (int j = 0; j < 16; ++j) {
        const EvaluationPoint pt(2.0 * kPi * j / 16.0);
        cplx rhs = 0.0;
        for (std::size_t n = 0; n <= 2; ++n) rhs += c2[n] * big_c_eval(n, pt, fa, q);
        CHECK(std::abs(big_c_eval(2, pt, fb, q) - rhs) < 1e-13);
    }
    CHECK_THROWS_AS(connection_coeffs(2, ReducedParams{0.0, 0.5}, 0.72, q), DomainError);
}

TEST_CASE("growth_root") {
    const QBase q(0.5);
    CHECK_THROWS_AS(growth_root(0, kBox, q), DomainError);
    CHECK(rel(growth_root(1, kBox, q), std::abs(big_c_eval(1, EvaluationPoint(0.0), kBox, q))) < 1e-15);
    CHECK(std::abs(growth_root(200, ParamSet4{0.0, 0.0, 1.0, 1.0}, q) - 1.0) < 0.05);
    CHECK(std::abs(growth_root(200, ParamSet4{0.45, 0.15, 1.5, 0.5}, q) - 1.5) < 0.05 * 1.5);
}
