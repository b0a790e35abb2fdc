#pragma once

// Identity checkers. Each one evaluates the two sides of an identity through
// independent code paths (quadrature and series evaluation on one side,
// closed-form q-Pochhammer products on the other) and packages the outcome in
// an immutable VerificationReport.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qortho/qfun.hpp"
#include "qortho/quad.hpp"
#include "qortho/types.hpp"

namespace qortho {

enum class IdentityId {
    THM_1_1,      // four-parameter orthogonality on [0, 2 pi]
    THM_1_2,      // seven-parameter q-beta integral
    THM_1_3,      // bi-orthogonality of the a- and b-families on [0, pi]
    PROP_2_1_2,   // Phi_n(e^{i theta}, e^{-i theta}) = (q;q)_n C_n
    PROP_2_1_3,   // growth of C_n(1)^{1/n}
    PROP_2_2,     // majorant series convergence
    PROP_2_4,     // Jackson integral representation of Phi_n
    PROP_3_1,     // connection between the a- and b-families
    ROGERS_6W5,
    QBINOMIAL,
    ULTRA_ORTHO,  // continuous q-ultraspherical orthogonality
};

inline constexpr IdentityId kAllIdentities[] = {
    IdentityId::THM_1_1,    IdentityId::THM_1_2,    IdentityId::THM_1_3,   IdentityId::PROP_2_1_2,
    IdentityId::PROP_2_1_3, IdentityId::PROP_2_2,   IdentityId::PROP_2_4,  IdentityId::PROP_3_1,
    IdentityId::ROGERS_6W5, IdentityId::QBINOMIAL,  IdentityId::ULTRA_ORTHO,
};

std::string_view to_string(IdentityId id) noexcept;
std::optional<IdentityId> identity_from_string(std::string_view name) noexcept;

/// Default acceptance tolerance of each identity.
double default_tolerance(IdentityId id) noexcept;

enum class Flag { NearSingular, NoConvergence, TruncationExceeded };

std::string_view to_string(Flag flag) noexcept;
std::optional<Flag> flag_from_string(std::string_view name) noexcept;

using InputValue = std::variant<std::int64_t, double, cplx>;

struct Input {
    std::string name;
    InputValue value;

    friend bool operator==(const Input&, const Input&) = default;
};

using Inputs = std::vector<Input>;

/// Outcome of one identity check. passed holds exactly when rel_residual is
/// within tolerance and no flag was raised. rel_residual is abs_residual over
/// max(|lhs|, |rhs|, scale) where scale is the checker's notion of the
/// integrand size (e.g. max |f| times the interval length), so expected-zero
/// identities are judged against the size of what was integrated.
class VerificationReport {
public:
    static VerificationReport evaluate(IdentityId id, Inputs inputs, cplx lhs, cplx rhs, double tolerance,
                                       double scale, std::vector<Flag> flags);

    /// Rebuilds a stored report; throws DomainError if passed disagrees with
    /// the residual, tolerance and flags.
    static VerificationReport restore(IdentityId id, Inputs inputs, cplx lhs, cplx rhs, double abs_residual,
                                      double rel_residual, double tolerance, bool passed, std::vector<Flag> flags);

    IdentityId identity() const noexcept { return identity_; }
    const Inputs& inputs() const noexcept { return inputs_; }
    cplx lhs() const noexcept { return lhs_; }
    cplx rhs() const noexcept { return rhs_; }
    double abs_residual() const noexcept { return abs_residual_; }
    double rel_residual() const noexcept { return rel_residual_; }
    double tolerance() const noexcept { return tolerance_; }
    bool passed() const noexcept { return passed_; }
    const std::vector<Flag>& flags() const noexcept { return flags_; }

    /// Looks up an input by name.
    const InputValue* input(std::string_view name) const noexcept;

    // NaN fields compare equal to NaN so stored failures round-trip.
    friend bool operator==(const VerificationReport& a, const VerificationReport& b);

private:
    VerificationReport() = default;

    IdentityId identity_ = IdentityId::THM_1_1;
    Inputs inputs_;
    cplx lhs_;
    cplx rhs_;
    double abs_residual_ = 0.0;
    double rel_residual_ = 0.0;
    double tolerance_ = 0.0;
    bool passed_ = false;
    std::vector<Flag> flags_;
};

struct CheckOptions {
    QuadratureSpec quadrature;
    TruncationPolicy truncation;
    std::optional<double> tolerance;  // overrides default_tolerance()
};

// Every checker validates its hypotheses first and throws DomainError naming
// the violated bound. After that nothing escapes: numerical trouble becomes a
// flag on the report.

VerificationReport check_thm_1_1(const ParamSet4& p, QBase q, std::size_t m, std::size_t n,
                                 const CheckOptions& opts = {});

VerificationReport check_thm_1_2(const ParamSet4& p, cplx s, cplx t, QBase q, const CheckOptions& opts = {});

/// Right-hand series of the seven-parameter integral (exposed for tests).
cplx thm_1_2_series(const ParamSet4& p, cplx s, cplx t, QBase q, const TruncationPolicy& policy = {});

VerificationReport check_thm_1_3(const ReducedParams& r, cplx gamma, cplx delta, QBase q, std::size_t m,
                                 std::size_t n, const CheckOptions& opts = {});

/// Closed-form right side of the bi-orthogonality relation; requires m >= n
/// when m = n (mod 2).
cplx thm_1_3_rhs(const ReducedParams& r, cplx gamma, cplx delta, QBase q, std::size_t m, std::size_t n,
                 const TruncationPolicy& policy = {});

VerificationReport check_prop_3_1(const ReducedParams& r, cplx gamma, cplx delta, QBase q, std::size_t m,
                                  const std::vector<double>& thetas, const CheckOptions& opts = {});

VerificationReport check_ultra_ortho(cplx beta, QBase q, std::size_t m, std::size_t n, const CheckOptions& opts = {});

VerificationReport check_prop_2_1_2(const ParamSet4& p, QBase q, std::size_t n, double theta,
                                    const CheckOptions& opts = {});

VerificationReport check_prop_2_1_3(const ParamSet4& p, QBase q, std::size_t n = 200, const CheckOptions& opts = {});

/// Tail of the majorant sum_n C_{n+k}(1) C_n(1) |(q;q)_{n+k} / (ab/gd;q)_{n+k}| |t|^n
/// beyond `cutoff` terms relative to the full sum. C_n(1) is taken as the sum of
/// the moduli of the expansion coefficients, which equals C_n(1) when they are
/// nonnegative and bounds |C_n(e^{i theta})| in general.
VerificationReport check_prop_2_2(const ParamSet4& p, QBase q, std::size_t k, double t_abs,
                                  std::size_t cutoff = 200, const CheckOptions& opts = {});

VerificationReport check_prop_2_4(const ParamSet4& p, QBase q, std::size_t n, cplx x, cplx y,
                                  const CheckOptions& opts = {});

VerificationReport check_rogers_6w5(cplx a, cplx b, cplx c, cplx d, QBase q, const CheckOptions& opts = {});

VerificationReport check_qbinomial(cplx a, QBase q, cplx z, const CheckOptions& opts = {});

// ---------------------------------------------------------------------------
// Seeded sweeps.

struct Thm11Case { ParamSet4 p; cplx q; std::size_t m, n; };
struct Thm12Case { ParamSet4 p; cplx s, t; cplx q; };
struct Thm13Case { ReducedParams r; cplx gamma, delta; cplx q; std::size_t m, n; };
struct Prop212Case { ParamSet4 p; cplx q; std::size_t n; double theta; };
struct Prop213Case { ParamSet4 p; cplx q; std::size_t n; };
struct Prop22Case { ParamSet4 p; cplx q; std::size_t k; double t_abs; };
struct Prop24Case { ParamSet4 p; cplx q; std::size_t n; cplx x, y; };
struct Prop31Case { ReducedParams r; cplx gamma, delta; cplx q; std::size_t m; std::vector<double> thetas; };
struct RogersCase { cplx a, b, c, d; cplx q; };
struct QBinomialCase { cplx a; cplx q; cplx z; };
struct UltraCase { cplx beta; cplx q; std::size_t m, n; };

using Case = std::variant<Thm11Case, Thm12Case, Thm13Case, Prop212Case, Prop213Case, Prop22Case, Prop24Case,
                          Prop31Case, RogersCase, QBinomialCase, UltraCase>;

IdentityId identity_of(const Case& c) noexcept;

/// Validates the hypotheses of the case's identity (DomainError on failure).
void validate_case(const Case& c);

VerificationReport run_case(const Case& c, const CheckOptions& opts = {});

struct Range {
    double lo;
    double hi;
};

/// Parameter box for sweeps. Moduli and phases are drawn uniformly; draws
/// that violate the target identity's hypotheses, or whose weight or series
/// denominators come within `singular_margin` of zero, are redrawn.
struct SweepSpec {
    std::uint64_t seed = 42;
    std::size_t draws = 20;

    Range q{0.1, 0.7};
    Range ratio_modulus{0.0, 0.6};     // |alpha/gamma|, |beta/delta|; |a|, |b|; ultraspherical |beta|
    Range scale_modulus{0.5, 1.5};     // |gamma|, |delta|
    Range phase{0.0, 6.283185307179586};
    Range scale_phase{0.0, 6.283185307179586};
    double st_bound = 0.7;             // max of |gamma s|, |gamma t|, |delta s|, |delta t|
    Range point_modulus{0.5, 1.5};     // |x|, |y| for the Jackson representation
    Range z_modulus{0.0, 0.7};         // q-binomial argument
    Range numerator_modulus{0.0, 1.5}; // q-binomial numerator
    double rogers_argument_bound = 0.7;  // |aq/bcd|
    std::size_t m_max = 6;
    std::size_t n_max = 6;
    std::size_t growth_degree = 200;
    std::size_t theta_points = 16;
    double weight_margin = 0.9;        // |alpha/delta|, |beta/gamma| (and a gamma/delta, a delta/gamma) bound
    double singular_margin = 1e-3;
    double lattice_margin = 0.05;      // Jackson lattice factors (gamma x/delta y;q), (q delta y/gamma x;q)
    std::size_t max_attempts = 10000;  // per draw

    CheckOptions options;
};

/// Deterministic given spec.seed: draw i depends only on the seed and i.
std::vector<Case> sample_cases(IdentityId id, const SweepSpec& spec);

/// Runs every sampled case, possibly concurrently; the result is in draw order.
std::vector<VerificationReport> run_sweep(IdentityId id, const SweepSpec& spec);

}  // namespace qortho
