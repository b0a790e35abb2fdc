// AVX2+FMA kernels. Two interleaved complex doubles per __m256d.

#include "kernels_impl.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace qortho::kernels::detail {
namespace {

inline __m256d cmul(__m256d a, __m256d b) {
    const __m256d b_re = _mm256_movedup_pd(b);
    const __m256d b_im = _mm256_permute_pd(b, 0xF);
    const __m256d a_swap = _mm256_permute_pd(a, 0x5);
    return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_swap, b_im));
}

inline __m256d cbroadcast(const double* p) { return _mm256_broadcast_pd(reinterpret_cast<const __m128d*>(p)); }

// |v|^2 of each complex lane, duplicated into both of its doubles.
inline __m256d cnorm(__m256d v) {
    const __m256d sq = _mm256_mul_pd(v, v);
    return _mm256_hadd_pd(sq, sq);
}

inline void qpoch_pair(const double* args, __m256d q, std::size_t terms, double* out, double* min_factor) {
    const __m256d one = _mm256_setr_pd(1.0, 0.0, 1.0, 0.0);
    __m256d t = _mm256_loadu_pd(args);
    __m256d prod = one;
    __m256d min_sq = _mm256_set1_pd(__builtin_inf());
    for (std::size_t k = 0; k < terms; ++k) {
        const __m256d factor = _mm256_sub_pd(one, t);
        min_sq = _mm256_min_pd(min_sq, cnorm(factor));
        prod = cmul(prod, factor);
        t = cmul(t, q);
    }
    _mm256_storeu_pd(out, prod);
    if (min_factor != nullptr) {
        const __m256d root = _mm256_sqrt_pd(min_sq);
        alignas(32) double lanes[4];
        _mm256_store_pd(lanes, root);
        min_factor[0] = lanes[0];
        min_factor[1] = lanes[2];
    }
}

inline __m256d poly_pair(const double* coeffs, std::size_t degree, __m256d x, __m256d y) {
    __m256d acc = cbroadcast(coeffs + 2 * degree);
    __m256d ypow = _mm256_setr_pd(1.0, 0.0, 1.0, 0.0);
    for (std::size_t k = degree; k-- > 0;) {
        ypow = cmul(ypow, y);
        acc = _mm256_add_pd(cmul(acc, x), cmul(cbroadcast(coeffs + 2 * k), ypow));
    }
    return acc;
}

}  // namespace

bool avx2_compiled() noexcept { return true; }

void qpoch_inf_avx2(const double* args, std::size_t count, const double* q, std::size_t terms, double* out,
                    double* min_factor) {
    const __m256d qv = cbroadcast(q);
    std::size_t j = 0;
    for (; j + 2 <= count; j += 2) {
        qpoch_pair(args + 2 * j, qv, terms, out + 2 * j, min_factor != nullptr ? min_factor + j : nullptr);
    }
    if (j < count) {
        double in_pad[4] = {args[2 * j], args[2 * j + 1], 0.0, 0.0};
        double out_pad[4];
        double min_pad[2];
        qpoch_pair(in_pad, qv, terms, out_pad, min_pad);
        out[2 * j] = out_pad[0];
        out[2 * j + 1] = out_pad[1];
        if (min_factor != nullptr) min_factor[j] = min_pad[0];
    }
}

void homogeneous_poly_avx2(const double* coeffs, std::size_t degree, const double* xs, const double* ys,
                           std::size_t count, double* out) {
    std::size_t j = 0;
    for (; j + 2 <= count; j += 2) {
        const __m256d r = poly_pair(coeffs, degree, _mm256_loadu_pd(xs + 2 * j), _mm256_loadu_pd(ys + 2 * j));
        _mm256_storeu_pd(out + 2 * j, r);
    }
    if (j < count) {
        const double x_pad[4] = {xs[2 * j], xs[2 * j + 1], 0.0, 0.0};
        const double y_pad[4] = {ys[2 * j], ys[2 * j + 1], 0.0, 0.0};
        double out_pad[4];
        _mm256_storeu_pd(out_pad, poly_pair(coeffs, degree, _mm256_loadu_pd(x_pad), _mm256_loadu_pd(y_pad)));
        out[2 * j] = out_pad[0];
        out[2 * j + 1] = out_pad[1];
    }
}

void multiply_avx2(double* inout, const double* factor, std::size_t count) {
    std::size_t j = 0;
    for (; j + 2 <= count; j += 2) {
        const __m256d r = cmul(_mm256_loadu_pd(inout + 2 * j), _mm256_loadu_pd(factor + 2 * j));
        _mm256_storeu_pd(inout + 2 * j, r);
    }
    if (j < count) {
        const double a_re = inout[2 * j], a_im = inout[2 * j + 1];
        const double b_re = factor[2 * j], b_im = factor[2 * j + 1];
        inout[2 * j] = __builtin_fma(a_re, b_re, -(a_im * b_im));
        inout[2 * j + 1] = __builtin_fma(a_im, b_re, a_re * b_im);
    }
}

}  // namespace qortho::kernels::detail

#else

namespace qortho::kernels::detail {

bool avx2_compiled() noexcept { return false; }
void qpoch_inf_avx2(const double*, std::size_t, const double*, std::size_t, double*, double*) {}
void homogeneous_poly_avx2(const double*, std::size_t, const double*, const double*, std::size_t, double*) {}
void multiply_avx2(double*, const double*, std::size_t) {}

}  // namespace qortho::kernels::detail

#endif
