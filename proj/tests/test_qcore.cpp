#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qortho/qcore.hpp"

using namespace qortho;
using oracle::rel;

TEST_CASE("qbase rejects the closed unit disc complement") {
    CHECK_THROWS_AS(QBase(1.0), DomainError);
    CHECK_THROWS_AS(QBase(cplx{0.8, 0.7}), DomainError);
    CHECK_NOTHROW(QBase(-0.99));
    CHECK(QBase(0.5).is_real());
    CHECK_FALSE(QBase(cplx{0.1, 0.2}).is_real());
}

TEST_CASE("finite qpoch known values") {
    const QBase q(0.5);
    CHECK(qpoch(0.7, q, 0) == cplx{1.0});
    CHECK(qpoch(0.0, q, 5) == cplx{1.0});
    CHECK(std::abs(qpoch(0.5, q, 2) - 0.375) < 1e-15);
}

TEST_CASE("infinite qpoch known values") {
    const QBase q(0.5);
    CHECK(qpoch(0.0, q, infinity) == cplx{1.0});
    const ProductResult one = qpoch_detailed(1.0, q, infinity);
    CHECK(one.value == cplx{0.0});
    CHECK(one.near_singular);
    CHECK(std::abs(qpoch(0.5, q, infinity) - 0.2887880951) < 1e-10);
    // The truncation rule guarantees rel_tol / (1 - |q|) = 2e-14 here.
    CHECK(rel(qpoch(0.5, q, infinity), oracle::qpoch_inf(0.5, 0.5)) < 3e-14);
}

TEST_CASE("multi-symbol qpoch") {
    const QBase q(0.5);
    CHECK(qpoch({0.0, 0.0}, q, infinity) == cplx{1.0});
    CHECK(qpoch({cplx{0.3, 0.1}}, q, 7) == qpoch(cplx{0.3, 0.1}, q, 7));
    const cplx single = oracle::qpoch_inf(0.5, 0.5);
    CHECK(rel(qpoch({0.5, 0.5}, q, infinity), single * single) < 6e-14);
    CHECK_THROWS_AS(qpoch(std::span<const cplx>{}, q, infinity), DomainError);
}

TEST_CASE("qbinom values and recurrence") {
    const QBase q(0.5);
    CHECK(qbinom(4, 0, q) == cplx{1.0});
    CHECK(std::abs(qbinom(2, 1, q) - 1.5) < 1e-15);
    CHECK_THROWS_AS(qbinom(2, 3, q), DomainError);

    oracle::Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const QBase qc(rng.polar(0.05, 0.9));
        const std::size_t n = 1 + rng.index(20);
        const std::size_t k = 1 + rng.index(n - 1);
        const cplx lhs = qbinom(n, k, qc);
        const cplx rhs = qbinom(n - 1, k - 1, qc) + ipow(qc.value(), k) * (k <= n - 1 ? qbinom(n - 1, k, qc) : 0.0);
        CHECK(rel(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("finite qpoch recursion property") {
    oracle::Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const cplx a = rng.polar(0.0, 2.0);
        const QBase q(rng.polar(0.0, 0.95));
        const std::size_t n = rng.index(50);
        const cplx lhs = qpoch(a, q, n + 1);
        const cplx rhs = qpoch(a, q, n) * (1.0 - a * ipow(q.value(), n));
        CHECK(rel(lhs, rhs) <= 1e-13);
        CHECK(rel(qpoch(a, q, n), oracle::qpoch(a, q.value(), n)) <= 1e-12);
    }
}

TEST_CASE("infinite qpoch splitting property") {
    oracle::Rng rng(12);
    const TruncationPolicy policy;
    for (int trial = 0; trial < 200; ++trial) {
        const cplx a = rng.polar(0.0, 1.5);
        const QBase q(rng.uniform(0.05, 0.8));
        const std::size_t n = rng.index(20);
        const cplx whole = qpoch(a, q, infinity, policy);
        const cplx split = qpoch(a, q, n) * qpoch(a * ipow(q.value(), n), q, infinity, policy);
        if (std::abs(whole) < 1e-8) continue;  // close to a zero factor: relative comparison is meaningless
        CHECK(rel(whole, split) <= policy.rel_tol * 10.0);
    }
}

TEST_CASE("truncation rule") {
    const TruncationPolicy policy{1e-14, 10000};
    // |a||q|^k < rel_tol first at k = ceil(log(rel_tol/|a|)/log|q|).
    CHECK(truncation_terms(1.0, 0.5, policy) == 47);
    CHECK(truncation_terms(0.0, 0.5, policy) == 0);
    CHECK(qpoch_detailed(1.0, QBase(0.5), infinity, policy).terms == 47);
    const TruncationPolicy tight{1e-14, 10};
    CHECK_THROWS_AS(qpoch(0.5, QBase(0.9), infinity, tight), TruncationExceeded);
    CHECK_THROWS_AS((TruncationPolicy{0.0, 10}.validate()), DomainError);
}

TEST_CASE("ipow") {
    CHECK(ipow(0.0, 0) == cplx{1.0});
    CHECK(ipow(cplx{0.0, 1.0}, 4) == cplx{1.0});
    CHECK(rel(ipow(cplx{0.9, 0.3}, 13), std::pow(cplx{0.9, 0.3}, 13)) < 1e-14);
}
