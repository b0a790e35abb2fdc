#include "qortho/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "json.hpp"

namespace qortho {
namespace {

using ojson = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ojson number(double v) { return std::isnan(v) ? ojson(nullptr) : ojson(v); }

double number_from(const ojson& j, const char* key) {
    if (!j.contains(key)) throw DomainError(std::string("report field missing: ") + key);
    const ojson& v = j.at(key);
    if (v.is_null()) return kNaN;
    if (!v.is_number()) throw DomainError(std::string("report field is not a number: ") + key);
    return v.get<double>();
}

ojson inputs_to_json(const Inputs& inputs) {
    ojson out = ojson::object();
    for (const auto& input : inputs) {
        if (const auto* i = std::get_if<std::int64_t>(&input.value)) {
            out[input.name] = *i;
        } else if (const auto* d = std::get_if<double>(&input.value)) {
            out[input.name] = number(*d);
        } else {
            const cplx z = std::get<cplx>(input.value);
            out[input.name + "_re"] = number(z.real());
            out[input.name + "_im"] = number(z.imag());
        }
    }
    return out;
}

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

Inputs inputs_from_json(const ojson& j) {
    if (!j.is_object()) throw DomainError("report inputs must be an object");
    Inputs inputs;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        const auto as_double = [](const ojson& v) { return v.is_null() ? kNaN : v.get<double>(); };
        if (ends_with(key, "_re")) {
            const std::string base = key.substr(0, key.size() - 3);
            auto next = std::next(it);
            if (next != j.end() && next.key() == base + "_im") {
                inputs.push_back({base, cplx{as_double(it.value()), as_double(next.value())}});
                it = next;
                continue;
            }
        }
        const ojson& v = it.value();
        if (v.is_number_integer()) {
            inputs.push_back({key, v.get<std::int64_t>()});
        } else if (v.is_number() || v.is_null()) {
            inputs.push_back({key, as_double(v)});
        } else {
            throw DomainError("report input is not numeric: " + key);
        }
    }
    return inputs;
}

ojson report_object(const VerificationReport& r) {
    ojson j;
    j["identity"] = std::string(to_string(r.identity()));
    j["inputs"] = inputs_to_json(r.inputs());
    j["lhs_re"] = number(r.lhs().real());
    j["lhs_im"] = number(r.lhs().imag());
    j["rhs_re"] = number(r.rhs().real());
    j["rhs_im"] = number(r.rhs().imag());
    j["abs_residual"] = number(r.abs_residual());
    j["rel_residual"] = number(r.rel_residual());
    j["tolerance"] = r.tolerance();
    j["passed"] = r.passed();
    ojson flags = ojson::array();
    for (const Flag f : r.flags()) flags.push_back(std::string(to_string(f)));
    j["flags"] = flags;
    return j;
}

IdentityId parse_identity(const std::string& name) {
    const auto id = identity_from_string(name);
    if (!id) throw DomainError("unknown identity: " + name);
    return *id;
}

Flag parse_flag(const std::string& name) {
    const auto f = flag_from_string(name);
    if (!f) throw DomainError("unknown flag: " + name);
    return *f;
}

VerificationReport report_from_object(const ojson& j) {
    if (!j.is_object()) throw DomainError("report must be a JSON object");
    if (!j.contains("identity") || !j.contains("inputs") || !j.contains("passed") || !j.contains("flags")) {
        throw DomainError("report is missing identity, inputs, passed or flags");
    }
    std::vector<Flag> flags;
    for (const auto& f : j.at("flags")) flags.push_back(parse_flag(f.get<std::string>()));
    return VerificationReport::restore(parse_identity(j.at("identity").get<std::string>()),
                                       inputs_from_json(j.at("inputs")),
                                       cplx{number_from(j, "lhs_re"), number_from(j, "lhs_im")},
                                       cplx{number_from(j, "rhs_re"), number_from(j, "rhs_im")},
                                       number_from(j, "abs_residual"), number_from(j, "rel_residual"),
                                       number_from(j, "tolerance"), j.at("passed").get<bool>(), std::move(flags));
}

ojson parse(std::string_view text) {
    try {
        return ojson::parse(text);
    } catch (const ojson::exception& e) {
        throw DomainError(std::string("malformed JSON: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// CSV

constexpr const char* kCsvHeader =
    "identity,inputs,lhs_re,lhs_im,rhs_re,rhs_im,abs_residual,rel_residual,tolerance,passed,flags";

std::string csv_number(double v) {
    if (std::isnan(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_quote(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::vector<std::string>> csv_rows(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"' && field.empty()) {
            quoted = true;
            field_started = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            field_started = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (field_started || !field.empty() || !row.empty()) {
                row.push_back(std::move(field));
                rows.push_back(std::move(row));
            }
            row.clear();
            field.clear();
            field_started = false;
        } else {
            field += c;
            field_started = true;
        }
    }
    if (quoted) throw DomainError("unterminated quoted CSV field");
    if (field_started || !field.empty() || !row.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

double csv_double(const std::string& s) {
    if (s.empty()) return kNaN;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw DomainError("CSV field is not a number: " + s);
    }
    if (used != s.size()) throw DomainError("CSV field is not a number: " + s);
    return v;
}

}  // namespace

std::string report_to_json(const VerificationReport& report, int indent) { return report_object(report).dump(indent); }

VerificationReport report_from_json(std::string_view text) { return report_from_object(parse(text)); }

std::string reports_to_csv(std::span<const VerificationReport> reports) {
    std::string out = kCsvHeader;
    out += "\r\n";
    for (const auto& r : reports) {
        std::string flags;
        for (const Flag f : r.flags()) {
            if (!flags.empty()) flags += ';';
            flags += to_string(f);
        }
        const std::string fields[] = {
            std::string(to_string(r.identity())),
            inputs_to_json(r.inputs()).dump(),
            csv_number(r.lhs().real()),
            csv_number(r.lhs().imag()),
            csv_number(r.rhs().real()),
            csv_number(r.rhs().imag()),
            csv_number(r.abs_residual()),
            csv_number(r.rel_residual()),
            csv_number(r.tolerance()),
            r.passed() ? "true" : "false",
            flags,
        };
        for (std::size_t i = 0; i < std::size(fields); ++i) {
            if (i) out += ',';
            out += csv_quote(fields[i]);
        }
        out += "\r\n";
    }
    return out;
}

std::vector<VerificationReport> reports_from_csv(std::string_view text) {
    const auto rows = csv_rows(text);
    if (rows.empty()) throw DomainError("CSV has no header");
    const auto header = csv_rows(kCsvHeader).front();
    if (rows.front() != header) throw DomainError("unexpected CSV header");
    std::vector<VerificationReport> reports;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& f = rows[i];
        if (f.size() != header.size()) throw DomainError("CSV row " + std::to_string(i) + " has wrong field count");
        if (f[9] != "true" && f[9] != "false") throw DomainError("CSV passed field must be true or false");
        std::vector<Flag> flags;
        for (std::size_t pos = 0; pos < f[10].size();) {
            const std::size_t end = std::min(f[10].find(';', pos), f[10].size());
            flags.push_back(parse_flag(f[10].substr(pos, end - pos)));
            pos = end + 1;
        }
        reports.push_back(VerificationReport::restore(
            parse_identity(f[0]), inputs_from_json(parse(f[1])), cplx{csv_double(f[2]), csv_double(f[3])},
            cplx{csv_double(f[4]), csv_double(f[5])}, csv_double(f[6]), csv_double(f[7]), csv_double(f[8]),
            f[9] == "true", std::move(flags)));
    }
    return reports;
}

std::string sweep_to_json(const SweepSummary& summary, std::span<const VerificationReport> reports) {
    ojson j;
    j["identity"] = std::string(to_string(summary.identity));
    j["seed"] = summary.seed;
    j["draws"] = summary.draws;
    std::size_t passed = 0;
    for (const auto& r : reports) passed += r.passed() ? 1 : 0;
    j["passed"] = passed;
    j["failed"] = reports.size() - passed;
    j["timestamp"] = summary.timestamp;
    ojson records = ojson::array();
    for (const auto& r : reports) records.push_back(report_object(r));
    j["records"] = records;
    return j.dump(2);
}

std::vector<VerificationReport> sweep_from_json(std::string_view text) {
    const ojson j = parse(text);
    if (!j.is_object() || !j.contains("records") || !j.at("records").is_array()) {
        throw DomainError("sweep document needs a records array");
    }
    std::vector<VerificationReport> reports;
    for (const auto& r : j.at("records")) reports.push_back(report_from_object(r));
    return reports;
}

}  // namespace qortho
