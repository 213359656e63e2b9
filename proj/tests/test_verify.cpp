#include <set>
#include <sstream>
#include <string>

#include <doctest.h>

#include "dermarket/verify.hpp"

#include "test_util.hpp"

using namespace dermarket;

namespace {

VerifyOptions quick_options() {
    VerifyOptions opts;
    opts.random_count = 6;
    opts.n_max = 6;
    return opts;
}

}  // namespace

TEST_CASE("verification passes on the worked example and covers every check") {
    const Scenario s = testutil::reference_scenario();
    const VerifyReport report = run_verification(s, quick_options());

    CHECK(report.all_passed());
    REQUIRE(report.checks.size() == 14);

    const std::set<std::string> expected{
        "welfare/participation_gain_truthful",
        "welfare/participation_gain_strategic",
        "welfare/strategic_loss_full",
        "welfare/strategic_loss_restricted",
        "welfare/mitigation_dominance",
        "welfare/three_way_representation",
        "gaps/closed_form_agreement",
        "oracle/dispatch_agreement",
        "oracle/cournot_agreement",
        "oracle/kkt_residual",
        "continuity/threshold_price",
        "continuity/utility_derivative",
        "prices/strict_ordering",
        "solver/no_exceptions",
    };
    std::set<std::string> seen;
    for (const CheckResult& check : report.checks) {
        seen.insert(check.name);
        CAPTURE(check.name);
        CHECK(check.passed);
        CHECK(check.worst <= check.bound);
    }
    CHECK(seen == expected);

    REQUIRE_FALSE(report.notes.empty());
    bool flags_ordering = false;
    for (const std::string& note : report.notes)
        if (note.find("inconsistent") != std::string::npos) flags_ordering = true;
    CHECK(flags_ordering);
}

TEST_CASE("verification report is deterministic for a fixed seed") {
    const Scenario s = testutil::reference_scenario();
    const VerifyReport first = run_verification(s, quick_options());
    const VerifyReport second = run_verification(s, quick_options());

    REQUIRE(first.checks.size() == second.checks.size());
    for (std::size_t i = 0; i < first.checks.size(); ++i) {
        CHECK(first.checks[i].name == second.checks[i].name);
        CHECK(first.checks[i].worst == second.checks[i].worst);
        CHECK(first.checks[i].detail == second.checks[i].detail);
        CHECK(first.checks[i].passed == second.checks[i].passed);
    }
    CHECK(first.notes == second.notes);
}

TEST_CASE("an injected welfare violation is caught and attributed") {
    const Scenario s = testutil::reference_scenario();
    VerifyOptions opts = quick_options();
    opts.perturb_w_s = 1.0;
    const VerifyReport report = run_verification(s, opts);

    CHECK_FALSE(report.all_passed());
    int failures = 0;
    for (const CheckResult& check : report.checks) {
        if (!check.passed) {
            ++failures;
            CHECK(check.name == "welfare/strategic_loss_full");
            // The report names the instance where the violation surfaced.
            CHECK_FALSE(check.detail.empty());
        }
    }
    CHECK(failures == 1);
}

TEST_CASE("printed report carries one verdict line per check") {
    const Scenario s = testutil::reference_scenario();
    VerifyOptions opts = quick_options();
    opts.random_count = 2;

    std::ostringstream out;
    print_report(out, run_verification(s, opts));
    const std::string text = out.str();

    std::size_t pass_lines = 0;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line))
        if (line.rfind("[PASS]", 0) == 0) ++pass_lines;
    CHECK(pass_lines == 14);
    CHECK(text.find("verification PASSED (14/14 checks)") != std::string::npos);
    CHECK(text.find("[note]") != std::string::npos);

    opts.perturb_w_s = 1.0;
    std::ostringstream bad;
    print_report(bad, run_verification(s, opts));
    CHECK(bad.str().find("[FAIL] welfare/strategic_loss_full") != std::string::npos);
    CHECK(bad.str().find("verification FAILED (13/14 checks)") != std::string::npos);
}

TEST_CASE("verification options are validated") {
    const Scenario s = testutil::reference_scenario();
    VerifyOptions opts;
    opts.tol = 0.0;
    CHECK_THROWS_AS(run_verification(s, opts), std::invalid_argument);

    opts = VerifyOptions{};
    opts.random_count = -1;
    CHECK_THROWS_AS(run_verification(s, opts), std::invalid_argument);

    opts = VerifyOptions{};
    opts.n_min = 5;
    opts.n_max = 2;
    CHECK_THROWS_AS(run_verification(s, opts), std::invalid_argument);
}
