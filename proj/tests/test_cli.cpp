#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "qortho/qcore.hpp"
#include "qortho/report_io.hpp"

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "qortho");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = qortho::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json value_of(const Run& r) { return nlohmann::json::parse(r.out); }

std::string strip_timestamp(const std::string& text) {
    auto j = nlohmann::ordered_json::parse(text);
    j.erase("timestamp");
    return j.dump();
}

}  // namespace

TEST_CASE("eval examples") {
    const auto c0 = run({"eval", "big_c", "--n", "0"});
    CHECK(c0.code == 0);
    CHECK(value_of(c0)["value_re"] == 1.0);

    const auto u = run({"eval", "ultra", "--n", "1", "--theta", "0", "--beta-re", "0.3", "--q", "0.5"});
    CHECK(u.code == 0);
    CHECK(value_of(u)["value_re"].get<double>() == doctest::Approx(2.8).epsilon(1e-15));

    const auto p = run({"eval", "qpoch", "--a-re", "1", "--q", "0.5", "--inf"});
    CHECK(p.code == 0);
    CHECK(value_of(p)["value_re"] == 0.0);
    CHECK(value_of(p)["metadata"]["near_singular"] == true);

    const auto s = run({"eval", "phi_series", "--num", "0.3", "--z-re", "0.4", "--q", "0.5"});
    CHECK(s.code == 0);
    CHECK(value_of(s)["value_re"].get<double>() ==
          doctest::Approx(qortho::qpoch(0.12, qortho::QBase(0.5), qortho::infinity).real() /
                          qortho::qpoch(0.4, qortho::QBase(0.5), qortho::infinity).real()));

    for (const char* f : {"phi", "weight", "h"}) CHECK(run({"eval", f}).code == 0);
    CHECK(run({"eval", "h", "--a-re", "1.5"}).code == 2);
    CHECK(run({"eval", "nope"}).code == 2);
}

TEST_CASE("verify examples and exit codes") {
    const auto ok = run({"verify", "THM_1_1", "--alpha-re", "0.2", "--beta-re", "0.1", "--gamma-re", "0.8",
                         "--delta-re", "0.9", "--m", "0", "--n", "1"});
    CHECK(ok.code == 0);
    const auto report = qortho::report_from_json(ok.out);
    CHECK(report.passed());
    CHECK(report.identity() == qortho::IdentityId::THM_1_1);

    const auto bad = run({"verify", "--identity", "THM_1_2", "--s-re", "1.2"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("|gamma s|") != std::string::npos);

    CHECK(run({"verify", "ROGERS_6W5"}).code == 0);
    CHECK(run({"verify", "NOT_AN_ID"}).code == 2);
    CHECK(run({"verify"}).code == 2);
    CHECK(run({"verify", "QBINOMIAL", "--tol", "1e-30"}).code == 1);
    CHECK(run({"verify", "THM_1_1", "--bogus"}).code == 2);
    CHECK(run({"bogus"}).code == 2);
}

TEST_CASE("verify writes CSV") {
    const auto r = run({"verify", "QBINOMIAL", "--format", "csv"});
    CHECK(r.code == 0);
    const auto back = qortho::reports_from_csv(r.out);
    REQUIRE(back.size() == 1);
    CHECK(back[0].passed());
}

TEST_CASE("sweep examples") {
    const auto a = run({"sweep", "THM_1_1", "--draws", "20", "--seed", "42"});
    CHECK(a.code == 0);
    const auto doc = nlohmann::json::parse(a.out);
    CHECK(doc["records"].size() == 20);
    CHECK(doc["failed"] == 0);

    const auto b = run({"sweep", "THM_1_1", "--draws", "20", "--seed", "42"});
    CHECK(strip_timestamp(a.out) == strip_timestamp(b.out));

    const auto empty = run({"sweep", "THM_1_3", "--draws", "0"});
    CHECK(empty.code == 0);
    CHECK(nlohmann::json::parse(empty.out)["records"].empty());

    // The majorant check fails for |gamma| or |delta| above one; the first failure is named.
    const auto fail = run({"sweep", "PROP_2_2", "--draws", "5"});
    CHECK(fail.code == 1);
    CHECK(fail.err.find("first failing draw: index") != std::string::npos);
    CHECK(fail.err.find("gamma_re") != std::string::npos);
}

TEST_CASE("table examples") {
    const auto big = run({"table", "big_c", "--n", "2", "--alpha-re", "0.8", "--gamma-re", "0.8", "--beta-re", "0.9",
                          "--delta-re", "0.9"});
    CHECK(big.code == 0);
    std::istringstream lines(big.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "n,k,coefficient_re,coefficient_im\r");
    int rows = 0;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        ++rows;
        const bool zero = line.find(",0,0\r") != std::string::npos;
        if (line.rfind("0,", 0) == 0) {
            CHECK(line == "0,0,1,0\r");
        } else {
            CHECK(zero);
        }
    }
    CHECK(rows == 6);

    const auto conn = run({"table", "connection", "--m", "0"});
    CHECK(conn.code == 0);
    CHECK(conn.out == "n,k,coefficient_re,coefficient_im\r\n0,0,1,0\r\n");

    const auto ultra = run({"table", "ultra", "--n", "2", "--beta-re", "0.3", "--q", "0.5"});
    CHECK(ultra.code == 0);
    CHECK(ultra.out.find("1,0,1.3999999999999999,0") != std::string::npos);  // (1-0.3)/(1-0.5)

    CHECK(run({"table", "connection", "--a-re", "0"}).code == 2);
    CHECK(run({"table", "other"}).code == 2);
}
