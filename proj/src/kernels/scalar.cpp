// Reference kernels. Complex arithmetic is spelled out on doubles so the
// results follow the same operation order as the vector variants.

#include <algorithm>
#include <cmath>

#include "qortho/kernels.hpp"

namespace qortho::kernels {
namespace {

struct C {
    double re, im;
};

inline C load(const cplx* p) {
    const double* d = reinterpret_cast<const double*>(p);
    return {d[0], d[1]};
}

inline void store(cplx* p, C v) {
    double* d = reinterpret_cast<double*>(p);
    d[0] = v.re;
    d[1] = v.im;
}

inline C mul(C a, C b) { return {a.re * b.re - a.im * b.im, a.im * b.re + a.re * b.im}; }
inline C add(C a, C b) { return {a.re + b.re, a.im + b.im}; }

void qpoch_inf_scalar(const cplx* args, std::size_t count, cplx q, std::size_t terms, cplx* out,
                      double* min_factor) {
    const C qq{q.real(), q.imag()};
    for (std::size_t j = 0; j < count; ++j) {
        C t = load(args + j);
        C prod{1.0, 0.0};
        double min_sq = INFINITY;
        for (std::size_t k = 0; k < terms; ++k) {
            const C factor{1.0 - t.re, -t.im};
            min_sq = std::min(min_sq, factor.re * factor.re + factor.im * factor.im);
            prod = mul(prod, factor);
            t = mul(t, qq);
        }
        store(out + j, prod);
        if (min_factor != nullptr) min_factor[j] = std::sqrt(min_sq);
    }
}

void homogeneous_poly_scalar(const cplx* coeffs, std::size_t degree, const cplx* xs, const cplx* ys,
                             std::size_t count, cplx* out) {
    for (std::size_t j = 0; j < count; ++j) {
        const C x = load(xs + j);
        const C y = load(ys + j);
        C acc = load(coeffs + degree);
        C ypow{1.0, 0.0};
        for (std::size_t k = degree; k-- > 0;) {
            ypow = mul(ypow, y);
            acc = add(mul(acc, x), mul(load(coeffs + k), ypow));
        }
        store(out + j, acc);
    }
}

void multiply_scalar(cplx* inout, const cplx* factor, std::size_t count) {
    for (std::size_t j = 0; j < count; ++j) store(inout + j, mul(load(inout + j), load(factor + j)));
}

constexpr KernelTable kScalar{"scalar", qpoch_inf_scalar, homogeneous_poly_scalar, multiply_scalar};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace qortho::kernels
