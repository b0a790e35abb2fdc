#pragma once

// Data-parallel inner loops used by the quadrature checks. Each kernel has a
// scalar reference implementation and, on x86-64, an AVX2+FMA variant. The
// variant is chosen once at first use from the CPU feature bits; setting the
// environment variable QORTHO_KERNELS=scalar forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

#include "qortho/types.hpp"

namespace qortho::kernels {

struct KernelTable {
    const char* name;

    // out[j] = prod_{k<terms} (1 - args[j] q^k); min_factor[j] = min_k |1 - args[j] q^k|.
    void (*qpoch_inf)(const cplx* args, std::size_t count, cplx q, std::size_t terms, cplx* out,
                      double* min_factor);

    // out[j] = sum_{k=0}^{degree} coeffs[k] xs[j]^k ys[j]^{degree-k}
    void (*homogeneous_poly)(const cplx* coeffs, std::size_t degree, const cplx* xs, const cplx* ys,
                             std::size_t count, cplx* out);

    // inout[j] *= factor[j]
    void (*multiply)(cplx* inout, const cplx* factor, std::size_t count);
};

const KernelTable& scalar_table() noexcept;

/// nullptr when the binary was built without the AVX2 variant or the CPU
/// lacks AVX2/FMA.
const KernelTable* avx2_table() noexcept;

/// Table selected for this process.
const KernelTable& active() noexcept;

std::string_view active_name() noexcept;

void qpoch_inf_batch(std::span<const cplx> args, cplx q, std::size_t terms, std::span<cplx> out,
                     std::span<double> min_factor, const KernelTable& table = active());

void homogeneous_poly_batch(std::span<const cplx> coeffs, std::span<const cplx> xs, std::span<const cplx> ys,
                            std::span<cplx> out, const KernelTable& table = active());

void multiply_batch(std::span<cplx> inout, std::span<const cplx> factor, const KernelTable& table = active());

}  // namespace qortho::kernels
