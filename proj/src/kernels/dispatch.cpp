#include <cstdlib>
#include <string>

#include "kernels_impl.hpp"
#include "qortho/kernels.hpp"

namespace qortho::kernels {
namespace {

const double* raw(const cplx* p) { return reinterpret_cast<const double*>(p); }
double* raw(cplx* p) { return reinterpret_cast<double*>(p); }

constexpr KernelTable kAvx2{
    "avx2",
    [](const cplx* args, std::size_t count, cplx q, std::size_t terms, cplx* out, double* min_factor) {
        const double qd[2] = {q.real(), q.imag()};
        detail::qpoch_inf_avx2(raw(args), count, qd, terms, raw(out), min_factor);
    },
    [](const cplx* coeffs, std::size_t degree, const cplx* xs, const cplx* ys, std::size_t count, cplx* out) {
        detail::homogeneous_poly_avx2(raw(coeffs), degree, raw(xs), raw(ys), count, raw(out));
    },
    [](cplx* inout, const cplx* factor, std::size_t count) { detail::multiply_avx2(raw(inout), raw(factor), count); },
};

bool cpu_has_avx2() noexcept {
#if defined(__x86_64__) || defined(__i386__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable& select() noexcept {
    if (const char* env = std::getenv("QORTHO_KERNELS"); env != nullptr && std::string(env) == "scalar") {
        return scalar_table();
    }
    if (const KernelTable* avx2 = avx2_table()) return *avx2;
    return scalar_table();
}

void require(bool ok, const char* what) {
    if (!ok) throw DomainError(std::string("kernel argument mismatch: ") + what);
}

}  // namespace

const KernelTable* avx2_table() noexcept {
    static const bool usable = detail::avx2_compiled() && cpu_has_avx2();
    return usable ? &kAvx2 : nullptr;
}

const KernelTable& active() noexcept {
    static const KernelTable& table = select();
    return table;
}

std::string_view active_name() noexcept { return active().name; }

void qpoch_inf_batch(std::span<const cplx> args, cplx q, std::size_t terms, std::span<cplx> out,
                     std::span<double> min_factor, const KernelTable& table) {
    require(out.size() == args.size(), "qpoch output size");
    require(min_factor.empty() || min_factor.size() == args.size(), "qpoch min_factor size");
    table.qpoch_inf(args.data(), args.size(), q, terms, out.data(), min_factor.empty() ? nullptr : min_factor.data());
}

void homogeneous_poly_batch(std::span<const cplx> coeffs, std::span<const cplx> xs, std::span<const cplx> ys,
                            std::span<cplx> out, const KernelTable& table) {
    require(!coeffs.empty(), "empty coefficient list");
    require(xs.size() == ys.size() && out.size() == xs.size(), "polynomial node sizes");
    table.homogeneous_poly(coeffs.data(), coeffs.size() - 1, xs.data(), ys.data(), xs.size(), out.data());
}

void multiply_batch(std::span<cplx> inout, std::span<const cplx> factor, const KernelTable& table) {
    require(inout.size() == factor.size(), "multiply sizes");
    table.multiply(inout.data(), factor.data(), inout.size());
}

}  // namespace qortho::kernels
