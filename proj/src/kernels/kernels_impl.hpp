#pragma once

// Raw entry points of the vector kernels. This header is included by the
// translation units compiled with ISA-specific flags, so it deliberately pulls
// in nothing beyond <cstddef>: inline code from other headers instantiated
// there could be picked by the linker for the generic build.

#include <cstddef>

namespace qortho::kernels::detail {

bool avx2_compiled() noexcept;

// Complex arrays are interleaved (re, im) doubles; q points at two doubles.
void qpoch_inf_avx2(const double* args, std::size_t count, const double* q, std::size_t terms, double* out,
                    double* min_factor);
void homogeneous_poly_avx2(const double* coeffs, std::size_t degree, const double* xs, const double* ys,
                           std::size_t count, double* out);
void multiply_avx2(double* inout, const double* factor, std::size_t count);

}  // namespace qortho::kernels::detail
