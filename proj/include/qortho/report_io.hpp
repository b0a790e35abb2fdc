#pragma once

// JSON and CSV rendering of verification reports. Complex values are split
// into _re/_im fields; NaN is written as null (JSON) or an empty cell (CSV).

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qortho/verify.hpp"

namespace qortho {

std::string report_to_json(const VerificationReport& report, int indent = 2);

/// Throws DomainError on malformed input.
VerificationReport report_from_json(std::string_view text);

/// Header: identity,inputs,lhs_re,lhs_im,rhs_re,rhs_im,abs_residual,
/// rel_residual,tolerance,passed,flags. inputs is a JSON object and flags a
/// ';'-separated list, both quoted per RFC 4180.
std::string reports_to_csv(std::span<const VerificationReport> reports);
std::vector<VerificationReport> reports_from_csv(std::string_view text);

struct SweepSummary {
    IdentityId identity;
    std::uint64_t seed;
    std::size_t draws;
    std::string timestamp;  // not part of the determinism contract
};

std::string sweep_to_json(const SweepSummary& summary, std::span<const VerificationReport> reports);
std::vector<VerificationReport> sweep_from_json(std::string_view text);

}  // namespace qortho
