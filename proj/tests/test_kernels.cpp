#include <cstdlib>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qortho/kernels.hpp"

using namespace qortho;
using oracle::rel;

namespace {

std::vector<const kernels::KernelTable*> tables() {
    std::vector<const kernels::KernelTable*> out{&kernels::scalar_table()};
    if (const auto* avx2 = kernels::avx2_table()) out.push_back(avx2);
    return out;
}

std::vector<cplx> random_points(oracle::Rng& rng, std::size_t count, double lo, double hi) {
    std::vector<cplx> v(count);
    for (auto& z : v) z = rng.polar(lo, hi);
    return v;
}

}  // namespace

TEST_CASE("kernel dispatch") {
    const char* env = std::getenv("QORTHO_KERNELS");
    if (env != nullptr && std::string(env) == "scalar") {
        CHECK(kernels::active_name() == "scalar");
    } else if (kernels::avx2_table() != nullptr) {
        CHECK(kernels::active_name() == "avx2");
    } else {
        CHECK(kernels::active_name() == "scalar");
    }
    MESSAGE("active kernels: " << kernels::active_name());
}

TEST_CASE("scalar kernels against direct loops") {
    oracle::Rng rng(41);
    for (std::size_t count : {0u, 1u, 2u, 3u, 17u}) {
        const auto args = random_points(rng, count, 0.0, 1.5);
        const cplx q = rng.polar(0.1, 0.8);
        std::vector<cplx> out(count);
        std::vector<double> minf(count);
        kernels::qpoch_inf_batch(args, q, 40, out, minf, kernels::scalar_table());
        for (std::size_t j = 0; j < count; ++j) {
            CHECK(rel(out[j], oracle::qpoch(args[j], q, 40)) < 1e-14);
            double m = 1e300;
            cplx qk = 1.0;
            for (int k = 0; k < 40; ++k, qk *= q) m = std::min(m, std::abs(1.0 - args[j] * qk));
            CHECK(minf[j] == doctest::Approx(m).epsilon(1e-14));
        }

        const auto coeffs = random_points(rng, 6, 0.0, 2.0);
        const auto xs = random_points(rng, count, 0.5, 1.5);
        const auto ys = random_points(rng, count, 0.5, 1.5);
        kernels::homogeneous_poly_batch(coeffs, xs, ys, out, kernels::scalar_table());
        for (std::size_t j = 0; j < count; ++j) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < 6; ++k) s += coeffs[k] * std::pow(xs[j], k) * std::pow(ys[j], 5 - k);
            CHECK(rel(out[j], s) < 1e-13);
        }
    }
}

TEST_CASE("SIMD kernels agree with the scalar reference") {
    const auto* avx2 = kernels::avx2_table();
    if (avx2 == nullptr) {
        MESSAGE("AVX2 variant unavailable; equivalence test skipped");
        return;
    }
    const auto& ref = kernels::scalar_table();
    oracle::Rng rng(42);
    for (std::size_t count : {0u, 1u, 2u, 5u, 64u, 257u}) {
        for (std::size_t terms : {0u, 1u, 7u, 60u}) {
            const auto args = random_points(rng, count, 0.0, 2.0);
            const cplx q = rng.polar(0.0, 0.9);
            std::vector<cplx> a(count), b(count);
            std::vector<double> ma(count), mb(count);
            kernels::qpoch_inf_batch(args, q, terms, a, ma, ref);
            kernels::qpoch_inf_batch(args, q, terms, b, mb, *avx2);
            for (std::size_t j = 0; j < count; ++j) {
                CHECK(std::abs(a[j] - b[j]) <= 1e-13 * std::max(1.0, std::abs(a[j])));
                if (terms == 0) {
                    CHECK(ma[j] == mb[j]);
                } else {
                    CHECK(ma[j] == doctest::Approx(mb[j]).epsilon(1e-14));
                }
            }
        }
        for (std::size_t degree : {0u, 1u, 4u, 13u}) {
            const auto coeffs = random_points(rng, degree + 1, 0.0, 2.0);
            const auto xs = random_points(rng, count, 0.5, 1.5);
            const auto ys = random_points(rng, count, 0.5, 1.5);
            std::vector<cplx> a(count), b(count);
            kernels::homogeneous_poly_batch(coeffs, xs, ys, a, ref);
            kernels::homogeneous_poly_batch(coeffs, xs, ys, b, *avx2);
            double scale = 0.0;
            for (std::size_t k = 0; k <= degree; ++k) scale += std::abs(coeffs[k]) * std::pow(1.5, degree);
            for (std::size_t j = 0; j < count; ++j) CHECK(std::abs(a[j] - b[j]) <= 1e-14 * scale);
        }
        const auto base = random_points(rng, count, 0.0, 3.0);
        const auto factor = random_points(rng, count, 0.0, 3.0);
        auto a = base, b = base;
        kernels::multiply_batch(a, factor, ref);
        kernels::multiply_batch(b, factor, *avx2);
        for (std::size_t j = 0; j < count; ++j) CHECK(rel(a[j], b[j]) < 1e-15);
    }
}

TEST_CASE("kernel span size checks") {
    std::vector<cplx> a(3), b(2);
    std::vector<double> m(3);
    CHECK_THROWS_AS(kernels::multiply_batch(a, b), DomainError);
    CHECK_THROWS_AS(kernels::qpoch_inf_batch(a, 0.5, 3, b, m), DomainError);
    CHECK_THROWS_AS(kernels::homogeneous_poly_batch(a, a, b, a), DomainError);
}
