#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "deadoil/coefficients.hpp"
#include "deadoil/field_io.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace deadoil;
using testutil::rel_err;

namespace {

const HypothesisCheck& find_check(const HypothesisReport& rep, const std::string& name) {
    for (const auto& c : rep.checks)
        if (c.name == name) return c;
    REQUIRE(false);
    return rep.checks.front();
}

// Samples a coefficient set onto the tabulated-CSV layout.
std::string write_table(const CoefficientSet& cs, double r_min, double r_max, int samples) {
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "deadoil_coef_table_test.csv";
    std::ofstream out(path);
    out << "r,phi,dphi,d2phi,d3phi,g,dg,d2g,d,dd\n";
    for (int i = 0; i < samples; ++i) {
        const double r = r_min + (r_max - r_min) * i / (samples - 1);
        out << format_double(r) << ',' << format_double(cs.phi(r)) << ','
            << format_double(cs.dphi(r)) << ',' << format_double(cs.d2phi(r)) << ','
            << format_double(cs.d3phi(r)) << ',' << format_double(cs.g(r)) << ','
            << format_double(cs.dg(r)) << ',' << format_double(cs.d2g(r)) << ','
            << format_double(cs.d(r)) << ',' << format_double(cs.dd(r)) << '\n';
    }
    return path.string();
}

}  // namespace

TEST_CASE("builtin default family evaluates as documented") {
    const CoefficientSet cs = builtin_set("default", 1.0, 2.0);
    CHECK(cs.phi(0.0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(cs.dphi(0.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(cs.g(0.0) == 0.0);
    CHECK(cs.d(0.7) == cs.phi(0.7));
    CHECK(cs.dd(-1.3) == cs.dphi(-1.3));
    CHECK(cs.c3 == 0.5);

    CHECK(builtin_set("default", 0.5, 1.0).c3 == 0.25);
    CHECK(builtin_set("default", 1.0, 6.0).c3 == doctest::Approx(1.5).epsilon(1e-15));

    CHECK_THROWS_AS(builtin_set("exotic", 1.0, 2.0), ConfigError);
    CHECK_THROWS_AS(builtin_set("default", 0.0, 2.0), ConfigError);
    CHECK_THROWS_AS(builtin_set("default", 2.0, 1.0), ConfigError);
}

TEST_CASE("default family passes every hypothesis check") {
    const HypothesisReport rep = verify_hypotheses(builtin_set("default", 1.0, 2.0), -10, 10, 1000);
    CHECK(rep.all_pass);
    CHECK(rep.checks.size() >= 12);
    CHECK(rep.to_text().find("FAIL") == std::string::npos);
}

TEST_CASE("planted range violation is flagged") {
    CoefficientSet bad = builtin_set("default", 1.0, 2.0);
    bad.d = [](double r) { return r; };  // leaves the allowed band [c1, c2]
    const HypothesisReport rep = verify_hypotheses(bad, -10, 10, 1000);
    CHECK_FALSE(rep.all_pass);
    CHECK_FALSE(find_check(rep, "c1 <= d").pass);
    CHECK(rep.to_text().find("FAIL") != std::string::npos);
}

TEST_CASE("planted derivative mismatch is flagged by the consistency sweep") {
    CoefficientSet bad = builtin_set("default", 1.0, 2.0);
    const auto true_dphi = bad.dphi;
    bad.dphi = [true_dphi](double r) { return 2.0 * true_dphi(r); };
    const HypothesisReport rep = verify_hypotheses(bad, -10, 10, 1000);
    CHECK_FALSE(rep.all_pass);
    CHECK_FALSE(find_check(rep, "phi' consistent with phi").pass);
}

TEST_CASE("verify_hypotheses rejects degenerate sweeps") {
    const CoefficientSet cs = builtin_set("default", 1.0, 2.0);
    CHECK_THROWS_AS(verify_hypotheses(cs, -10, 10, 2), ConfigError);
    CHECK_THROWS_AS(verify_hypotheses(cs, 5, 5, 100), ConfigError);
}

TEST_CASE("tabulated set reproduces the family it was sampled from") {
    const CoefficientSet ref = builtin_set("default", 1.0, 2.0);
    // Sample past the verification window so derivative probes never hit
    // the clamped region.
    const std::string path = write_table(ref, -11.0, 11.0, 44001);
    const CoefficientSet tab = tabulated_set(path, 1.0, 2.0, 0.5);

    double worst = 0;
    for (int i = 0; i <= 200; ++i) {
        const double r = -10.0 + 20.0 * i / 200.0 + 0.0371;  // off-knot probes
        worst = std::max(worst, rel_err(tab.phi(r), ref.phi(r)));
        worst = std::max(worst, rel_err(tab.g(r) + 2.0, ref.g(r) + 2.0));
        worst = std::max(worst, rel_err(tab.d(r), ref.d(r)));
    }
    CHECK(worst <= 1e-9);

    const HypothesisReport rep = verify_hypotheses(tab, -10, 10, 1000);
    CHECK(rep.all_pass);
    std::filesystem::remove(path);
}

TEST_CASE("tabulated set rejects malformed tables") {
    namespace fs = std::filesystem;
    CHECK_THROWS_AS(tabulated_set("/nonexistent/deadoil_table.csv", 1, 2, 0.5), ConfigError);
    CHECK_THROWS_AS(tabulated_set("/tmp", 0.0, 2.0, 0.5), ConfigError);

    const fs::path bad_header = fs::temp_directory_path() / "deadoil_bad_header_test.csv";
    {
        std::ofstream out(bad_header);
        out << "r,phi\n0,1\n1,2\n2,3\n3,4\n";
    }
    CHECK_THROWS_AS(tabulated_set(bad_header.string(), 1, 2, 0.5), ConfigError);

    const fs::path nonuniform = fs::temp_directory_path() / "deadoil_nonuniform_test.csv";
    {
        std::ofstream out(nonuniform);
        out << "r,phi,dphi,d2phi,d3phi,g,dg,d2g,d,dd\n";
        for (double r : {0.0, 1.0, 2.5, 3.0}) {
            out << r;
            for (int c = 0; c < 9; ++c) out << ",1";
            out << '\n';
        }
    }
    CHECK_THROWS_AS(tabulated_set(nonuniform.string(), 1, 2, 0.5), ConfigError);

    const fs::path tiny = fs::temp_directory_path() / "deadoil_tiny_table_test.csv";
    {
        std::ofstream out(tiny);
        out << "r,phi,dphi,d2phi,d3phi,g,dg,d2g,d,dd\n";
        out << "0,1,0,0,0,0,0,0,1,0\n1,1,0,0,0,0,0,0,1,0\n";
    }
    CHECK_THROWS_AS(tabulated_set(tiny.string(), 1, 2, 0.5), ConfigError);

    fs::remove(bad_header);
    fs::remove(nonuniform);
    fs::remove(tiny);
}
