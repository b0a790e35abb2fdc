#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace qortho {

using cplx = std::complex<double>;

enum class ErrorKind {
    Domain,
    TruncationExceeded,
    DivergentSeries,
    NearSingular,
    NoConvergence,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base of every error raised by the library. Callers that only care about
/// "the computation could not be trusted" catch this; the derived types below
/// let them discriminate.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Invalid argument or violated hypothesis.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

class TruncationExceeded : public Error {
public:
    explicit TruncationExceeded(const std::string& what) : Error(ErrorKind::TruncationExceeded, what) {}
};

class DivergentSeries : public Error {
public:
    explicit DivergentSeries(const std::string& what) : Error(ErrorKind::DivergentSeries, what) {}
};

/// A denominator factor is (numerically) zero.
class NearSingular : public Error {
public:
    explicit NearSingular(const std::string& what) : Error(ErrorKind::NearSingular, what) {}
};

/// The base q of every product and series; |q| < 1 strictly.
class QBase {
public:
    explicit QBase(cplx q);
    explicit QBase(double q) : QBase(cplx{q, 0.0}) {}

    cplx value() const noexcept { return q_; }
    double abs() const noexcept { return std::abs(q_); }
    bool is_real() const noexcept { return q_.imag() == 0.0; }

    friend bool operator==(const QBase&, const QBase&) = default;

private:
    cplx q_;
};

/// Truncation control for infinite products and series.
struct TruncationPolicy {
    double rel_tol = 1e-14;
    std::size_t max_terms = 10000;

    /// Throws DomainError unless rel_tol > 0 and max_terms >= 1.
    void validate() const;
};

// Threshold below which a product factor is treated as an exact zero.
inline constexpr double kExactZeroFactor = 1e-15;
// Magnitude below which a denominator product (or factor) is rejected.
inline constexpr double kNearSingularThreshold = 1e-12;

}  // namespace qortho
