#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qortho/hyper.hpp"
#include "qortho/kernels.hpp"
#include "qortho/qcore.hpp"
#include "qortho/qfun.hpp"
#include "qortho/report_io.hpp"
#include "qortho/verify.hpp"

namespace qortho::cli {
namespace {

using ojson = nlohmann::ordered_json;

struct ComplexArg {
    double re;
    double im = 0.0;
    cplx value() const { return {re, im}; }
};

// Parameter assignments shared by every subcommand.
struct RunConfig {
    std::string identity;
    std::string function;
    std::string kind;
    ComplexArg q{0.5};
    std::map<std::string, ComplexArg> params{
        {"alpha", {0.3}}, {"beta", {0.2}}, {"gamma", {0.9}}, {"delta", {1.1}}, {"a", {0.3}},
        {"b", {0.5}},     {"c", {1.1}},    {"d", {1.3}},     {"s", {0.3}},     {"t", {0.2}},
        {"x", {1.1}},     {"y", {0.8}},    {"z", {0.4}},
    };
    std::size_t m = 0;
    std::size_t n = 1;
    std::size_t k = 0;
    double theta = 0.7;
    std::optional<double> t_abs;
    std::size_t cutoff = 200;
    std::size_t theta_points = 16;
    bool inf = false;
    std::vector<double> num, num_im, den, den_im;

    std::optional<double> tol;
    std::size_t nodes = QuadratureSpec{}.nodes;
    std::size_t max_terms = TruncationPolicy{}.max_terms;
    double trunc_tol = TruncationPolicy{}.rel_tol;

    std::uint64_t seed = 42;
    std::size_t draws = 20;
    std::string format = "json";
    std::string out_path;

    bool n_given = false;

    cplx p(const std::string& name) const { return params.at(name).value(); }
    QBase base() const { return QBase(q.value()); }
    ParamSet4 param_set() const { return {p("alpha"), p("beta"), p("gamma"), p("delta")}; }
    ReducedParams reduced() const { return {p("a"), p("b")}; }

    TruncationPolicy truncation() const {
        TruncationPolicy t{trunc_tol, max_terms};
        t.validate();
        return t;
    }

    CheckOptions options() const {
        CheckOptions o;
        o.truncation = truncation();
        o.quadrature.nodes = nodes;
        o.quadrature.max_nodes = std::max(o.quadrature.max_nodes, nodes);
        o.quadrature.validate();
        o.tolerance = tol;
        return o;
    }
};

void add_parameter_options(CLI::App& app, RunConfig& cfg) {
    app.add_option("--q", cfg.q.re, "base q (real part)");
    app.add_option("--q-im", cfg.q.im, "base q (imaginary part)");
    for (auto& [name, value] : cfg.params) {
        app.add_option("--" + name + "-re", value.re, name + " (real part)");
        app.add_option("--" + name + "-im", value.im, name + " (imaginary part)");
    }
    app.add_option("--m", cfg.m, "degree m");
    app.add_option("--n", cfg.n, "degree n")->each([&cfg](const std::string&) { cfg.n_given = true; });
    app.add_option("--k", cfg.k, "index shift k");
    app.add_option("--theta", cfg.theta, "angle theta");
    app.add_option("--t-abs", cfg.t_abs, "|t| for the majorant series");
    app.add_option("--cutoff", cfg.cutoff, "majorant partial-sum length");
    app.add_option("--theta-points", cfg.theta_points, "angles per connection check");
    app.add_option("--tol", cfg.tol, "acceptance tolerance override");
    app.add_option("--nodes", cfg.nodes, "initial quadrature nodes");
    app.add_option("--max-terms", cfg.max_terms, "truncation cap for products and series");
    app.add_option("--trunc-tol", cfg.trunc_tol, "relative truncation tolerance");
    app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", cfg.out_path, "output file (default stdout)");
}

std::string iso_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.out_path.empty()) {
        out << text;
        if (!text.empty() && text.back() != '\n') out << '\n';
        return;
    }
    std::ofstream file(cfg.out_path, std::ios::binary);
    if (!file) throw DomainError("cannot open output file " + cfg.out_path);
    file << text;
    if (!text.empty() && text.back() != '\n') file << '\n';
}

std::vector<cplx> complex_list(const std::vector<double>& re, const std::vector<double>& im, const char* what) {
    if (!im.empty() && im.size() != re.size()) {
        throw DomainError(std::string(what) + ": imaginary list length must match the real list");
    }
    std::vector<cplx> out(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) out[i] = {re[i], im.empty() ? 0.0 : im[i]};
    return out;
}

IdentityId parse_identity(const std::string& name) {
    const auto id = identity_from_string(name);
    if (!id) throw DomainError("unknown identity '" + name + "'");
    return *id;
}

// ---------------------------------------------------------------------------

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
    const TruncationPolicy policy = cfg.truncation();
    ojson meta;
    meta["rel_tol"] = policy.rel_tol;
    meta["max_terms"] = policy.max_terms;
    meta["kernels"] = std::string(kernels::active_name());
    cplx value;
    const std::string& f = cfg.function;
    if (f == "big_c") {
        value = big_c_eval(cfg.n, EvaluationPoint(cfg.theta), cfg.param_set(), cfg.base());
    } else if (f == "phi") {
        value = phi_eval(cfg.n, cfg.p("x"), cfg.p("y"), cfg.param_set(), cfg.base());
    } else if (f == "ultra") {
        value = cq_ultraspherical(cfg.n, cfg.theta, cfg.p("beta"), cfg.base());
    } else if (f == "weight") {
        const QBase q = cfg.base();
        meta["terms"] = truncation_terms(
            std::max({std::abs(cfg.param_set().alpha / cfg.param_set().delta),
                      std::abs(cfg.param_set().beta / cfg.param_set().gamma),
                      std::abs(cfg.param_set().gamma / cfg.param_set().delta),
                      std::abs(cfg.param_set().delta / cfg.param_set().gamma)}),
            q.abs(), policy);
        value = weight_omega(EvaluationPoint(cfg.theta), cfg.param_set(), q, policy);
    } else if (f == "h") {
        value = h_norm(cfg.n, cfg.p("a"), cfg.base(), policy);
    } else if (f == "qpoch") {
        if (cfg.inf) {
            const ProductResult r = qpoch_detailed(cfg.p("a"), cfg.base(), infinity, policy);
            value = r.value;
            meta["terms"] = r.terms;
            meta["near_singular"] = r.near_singular;
        } else {
            value = qpoch(cfg.p("a"), cfg.base(), cfg.n);
            meta["terms"] = cfg.n;
        }
    } else if (f == "phi_series") {
        PhiSpec spec{complex_list(cfg.num, cfg.num_im, "--num"), complex_list(cfg.den, cfg.den_im, "--den"),
                     cfg.base(), cfg.p("z")};
        value = phi_series(spec, policy);
    } else {
        throw DomainError("unknown function '" + f + "'");
    }

    if (cfg.format == "csv") {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g", value.real(), value.imag());
        emit(cfg, std::string("function,value_re,value_im\r\n") + f + "," + buf + "\r\n", out);
    } else {
        ojson j;
        j["function"] = f;
        j["value_re"] = value.real();
        j["value_im"] = value.imag();
        j["metadata"] = meta;
        emit(cfg, j.dump(2), out);
    }
    return kExitPass;
}

Case build_case(IdentityId id, const RunConfig& cfg) {
    const cplx q = cfg.q.value();
    switch (id) {
        case IdentityId::THM_1_1: return Thm11Case{cfg.param_set(), q, cfg.m, cfg.n};
        case IdentityId::THM_1_2: return Thm12Case{cfg.param_set(), cfg.p("s"), cfg.p("t"), q};
        case IdentityId::THM_1_3: return Thm13Case{cfg.reduced(), cfg.p("gamma"), cfg.p("delta"), q, cfg.m, cfg.n};
        case IdentityId::PROP_2_1_2: return Prop212Case{cfg.param_set(), q, cfg.n, cfg.theta};
        case IdentityId::PROP_2_1_3: return Prop213Case{cfg.param_set(), q, cfg.n_given ? cfg.n : 200};
        case IdentityId::PROP_2_2: {
            const ParamSet4 p = cfg.param_set();
            const double radius = std::min(1.0 / std::abs(p.gamma), 1.0 / std::abs(p.delta));
            return Prop22Case{p, q, cfg.k, cfg.t_abs.value_or(0.9 * radius)};
        }
        case IdentityId::PROP_2_4: return Prop24Case{cfg.param_set(), q, cfg.n, cfg.p("x"), cfg.p("y")};
        case IdentityId::PROP_3_1: {
            std::vector<double> thetas(cfg.theta_points);
            for (std::size_t j = 0; j < thetas.size(); ++j) {
                thetas[j] = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(thetas.size());
            }
            return Prop31Case{cfg.reduced(), cfg.p("gamma"), cfg.p("delta"), q, cfg.m, std::move(thetas)};
        }
        case IdentityId::ROGERS_6W5: return RogersCase{cfg.p("a"), cfg.p("b"), cfg.p("c"), cfg.p("d"), q};
        case IdentityId::QBINOMIAL: return QBinomialCase{cfg.p("a"), q, cfg.p("z")};
        case IdentityId::ULTRA_ORTHO: return UltraCase{cfg.p("beta"), q, cfg.m, cfg.n};
    }
    throw DomainError("unknown identity");
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    const IdentityId id = parse_identity(cfg.identity);
    const CheckOptions opts = cfg.options();
    const Case c = build_case(id, cfg);
    validate_case(c);
    const VerificationReport report = run_case(c, opts);
    if (cfg.format == "csv") {
        emit(cfg, reports_to_csv(std::span(&report, 1)), out);
    } else {
        emit(cfg, report_to_json(report), out);
    }
    return report.passed() ? kExitPass : kExitFail;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    SweepSpec spec;
    spec.seed = cfg.seed;
    spec.draws = cfg.draws;
    spec.options = cfg.options();
    const IdentityId id = parse_identity(cfg.identity);
    const auto reports = run_sweep(id, spec);
    if (cfg.format == "csv") {
        emit(cfg, reports_to_csv(reports), out);
    } else {
        emit(cfg, sweep_to_json({id, spec.seed, spec.draws, iso_timestamp()}, reports), out);
    }
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (!reports[i].passed()) {
            ojson j = ojson::parse(report_to_json(reports[i], -1));
            err << "first failing draw: index " << i << " inputs " << j["inputs"].dump() << " rel_residual "
                << reports[i].rel_residual() << '\n';
            return kExitFail;
        }
    }
    return kExitPass;
}

int cmd_table(const RunConfig& cfg, std::ostream& out) {
    std::ostringstream csv;
    csv << "n,k,coefficient_re,coefficient_im\r\n";
    const auto row = [&csv](std::size_t n, std::size_t k, cplx v) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g", v.real(), v.imag());
        csv << n << ',' << k << ',' << buf << "\r\n";
    };
    if (cfg.kind == "big_c") {
        for (std::size_t n = 0; n <= cfg.n; ++n) {
            const auto c = big_c_coeffs(n, cfg.param_set(), cfg.base());
            for (std::size_t k = 0; k <= n; ++k) row(n, k, c[k]);
        }
    } else if (cfg.kind == "ultra") {
        for (std::size_t n = 0; n <= cfg.n; ++n) {
            const auto c = cq_ultraspherical_coeffs(n, cfg.p("beta"), cfg.base());
            for (std::size_t k = 0; k <= n; ++k) row(n, k, c[k]);
        }
    } else if (cfg.kind == "connection") {
        const ReducedParams r = cfg.reduced();
        r.validate();
        const auto c = connection_coeffs(cfg.m, r, cfg.p("gamma") * cfg.p("delta"), cfg.base());
        for (std::size_t k = 0; k <= cfg.m; ++k) row(cfg.m, k, c[k]);
    } else {
        throw DomainError("unknown table '" + cfg.kind + "'");
    }
    emit(cfg, csv.str(), out);
    return kExitPass;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"q-orthogonal function evaluation and identity verification", "qortho"};
    app.require_subcommand(1);

    auto* eval = app.add_subcommand("eval", "evaluate a function");
    eval->add_option("function", cfg.function, "big_c, phi, ultra, weight, h, qpoch, phi_series")
        ->required()
        ->check(CLI::IsMember({"big_c", "phi", "ultra", "weight", "h", "qpoch", "phi_series"}));
    eval->add_flag("--inf", cfg.inf, "infinite product");
    eval->add_option("--num", cfg.num, "numerator parameters (real parts)");
    eval->add_option("--num-im", cfg.num_im, "numerator parameters (imaginary parts)");
    eval->add_option("--den", cfg.den, "denominator parameters (real parts)");
    eval->add_option("--den-im", cfg.den_im, "denominator parameters (imaginary parts)");
    add_parameter_options(*eval, cfg);

    auto* verify = app.add_subcommand("verify", "check one identity at explicit parameters");
    verify->add_option("identity_id", cfg.identity, "identity id");
    verify->add_option("--identity", cfg.identity, "identity id");
    add_parameter_options(*verify, cfg);

    auto* sweep = app.add_subcommand("sweep", "seeded parameter sweep");
    sweep->add_option("identity_id", cfg.identity, "identity id");
    sweep->add_option("--identity", cfg.identity, "identity id");
    sweep->add_option("--seed", cfg.seed, "RNG seed");
    sweep->add_option("--draws", cfg.draws, "number of draws");
    add_parameter_options(*sweep, cfg);

    auto* table = app.add_subcommand("table", "coefficient tables as CSV");
    table->add_option("kind", cfg.kind, "big_c, connection, ultra")
        ->required()
        ->check(CLI::IsMember({"big_c", "connection", "ultra"}));
    add_parameter_options(*table, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitPass;
        }
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }

    try {
        if (eval->parsed()) return cmd_eval(cfg, out);
        if ((verify->parsed() || sweep->parsed()) && cfg.identity.empty()) {
            throw DomainError("an identity is required (positional or --identity)");
        }
        if (verify->parsed()) return cmd_verify(cfg, out);
        if (sweep->parsed()) return cmd_sweep(cfg, out, err);
        return cmd_table(cfg, out);
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const Error& e) {
        err << "numerical failure (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return kExitFail;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFail;
    }
}

}  // namespace qortho::cli
