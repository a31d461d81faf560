#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "troptev/formula.hpp"
#include "troptev/model.hpp"

using namespace troptev;

namespace {

ContactData fixture(const std::string& name) {
    std::ifstream in(std::string(TROPTEV_DATA_DIR) + "/" + name);
    REQUIRE(in.good());
    return validate(raw_from_json(json::parse(in)));
}

ContactData make(long a, std::vector<long> m1, std::vector<long> m2, std::vector<long> m3,
                 std::vector<long> m4) {
    RawInstance raw;
    raw.a = a;
    long m = static_cast<long>(m1.size() + m2.size() + m3.size() + m4.size());
    raw.n = m / 2 + 1;
    raw.mu = {std::move(m1), std::move(m2), std::move(m3), std::move(m4)};
    return validate(raw);
}

}  // namespace

TEST_CASE("closed formula on the bundled instances") {
    auto g = fixture("example2.json");
    auto r = formula::trop_tev(g);
    CHECK(r.value == 24);
    CHECK(r.zero_reason == formula::ZeroReason::None);
    CHECK(r.binomial == 2);
    CHECK(r.a_exponent == 1);
    CHECK(formula::labelled_degree(g) == 144);

    auto c = fixture("example1_corrected.json");
    auto rc = formula::trop_tev(c);
    CHECK(rc.value == 512);
    CHECK(rc.per_divisor == std::array<Int, 4>{4, 2, 1, 16});
    CHECK(rc.a_power == 2);
    CHECK(rc.binomial == 2);
    CHECK(formula::labelled_degree(c) == 6144);
}

TEST_CASE("zero gates fire in deterministic order") {
    // |mu1| = 4 > n-1 = 3
    auto g1 = make(1, {1, 1, 1, 1}, {}, {4}, {4});
    auto r1 = formula::trop_tev(g1);
    CHECK(r1.value == 0);
    CHECK(r1.zero_reason == formula::ZeroReason::Mu1TooLong);

    auto g3 = make(1, {4}, {}, {1, 1, 1, 1}, {4});
    CHECK(formula::trop_tev(g3).zero_reason == formula::ZeroReason::Mu3TooLong);

    // a=3 all-ones: |mu2| = 0 > n-1-|mu4| = -1
    auto gb = make(3, {1, 1}, {}, {1, 1}, {1, 1, 1, 1, 1, 1});
    auto rb = formula::trop_tev(gb);
    CHECK(rb.value == 0);
    CHECK(rb.zero_reason == formula::ZeroReason::BinomialZero);
}

TEST_CASE("a=2 all-ones boundary case evaluates to one") {
    // The formula gives 1 here, not 0: binom(0,0) with a-exponent 0.
    auto g = make(2, {1}, {}, {1}, {1, 1});
    auto r = formula::trop_tev(g);
    CHECK(r.value == 1);
    CHECK(r.zero_reason == formula::ZeroReason::None);
}

TEST_CASE("p2 evaluation") {
    auto g = fixture("p2_allones_deg2.json");
    CHECK(formula::trop_tev_p2(g).value == 1);
    CHECK(formula::trop_tev(g).value == 1);  // a=1, empty mu2 must agree

    RawInstance bad;
    bad.a = 1;
    bad.n = 3;  // m = 3 cannot equal 2(n-1) for any integer n
    bad.mu = {{std::vector<long>{1}, {}, {1}, {1}}};
    CHECK_FALSE(check_instance(bad).empty());
}

TEST_CASE("p2 agrees with the Hirzebruch formula whenever mu2 is empty") {
    for (const auto& g : grid_instances({1}, 3, 4, 6)) {
        if (g.len(2) != 0) continue;
        CHECK(formula::trop_tev_p2(g).value == formula::trop_tev(g).value);
    }
}

TEST_CASE("formula is invariant under the 1<->3 swap") {
    for (const auto& g : grid_instances({1, 2, 3}, 3, 4, 6))
        CHECK(formula::trop_tev(g).value == formula::trop_tev(g.swapped13()).value);
}

TEST_CASE("formula ignores the input order of profile entries") {
    RawInstance raw;
    raw.a = 2;
    raw.n = 5;
    raw.mu = {{std::vector<long>{2, 1}, {2}, {1, 1, 1}, {4, 4}}};
    auto g = validate(raw);
    CHECK(formula::trop_tev(g).value == 512);  // same as the sorted fixture
}

TEST_CASE("solve_profile") {
    auto g = fixture("example2.json");
    auto p = formula::solve_profile(g, {0, 0, 0, 0}, false, 1);
    REQUIRE(p);
    CHECK(p->beta == 1);
    CHECK(p->gamma == 0);
    CHECK(p->delta == 0);
    CHECK(p->chi == 1);

    auto c = fixture("example1_corrected.json");
    auto pc = formula::solve_profile(c, {0, 0, 0, 0}, false, 0);
    REQUIRE(pc);
    CHECK(pc->beta == 1);
    CHECK(pc->gamma == 1);
    CHECK(pc->delta == 1);
    CHECK(pc->chi == 1);

    // negative component: infeasible
    CHECK_FALSE(formula::solve_profile(c, {0, 0, 0, 0}, false, 5).has_value());
    CHECK_THROWS_AS(formula::solve_profile(g, {1, 1, 0, 0}, false, 0), std::invalid_argument);
}

TEST_CASE("baseline profile") {
    auto g = fixture("example2.json");
    auto bar = formula::baseline_profile(g);
    CHECK(bar.alpha == 1);
    CHECK_FALSE(formula::long_mu34(g));

    auto c = fixture("example1_corrected.json");
    auto barc = formula::baseline_profile(c);
    CHECK(barc.alpha == 0);
    CHECK(formula::long_mu34(c));

    // |mu3| = n-1 forces chi_bar = 0
    auto ge = make(1, {2}, {}, {1, 1}, {2});
    CHECK(formula::baseline_profile(ge).chi == 0);
}

TEST_CASE("predicted counts") {
    auto g = fixture("example2.json");
    auto pc = formula::predicted_counts(g);
    CHECK(pc.type_a_labelled == 6);
    CHECK(pc.type_b_labelled == 6);
    CHECK(pc.total_labelled == 12);
    CHECK(pc.total_unlabelled == 2);
    CHECK(formula::per_curve_multiplicity(g) == 12);

    auto c = fixture("example1_corrected.json");
    auto pcc = formula::predicted_counts(c);
    CHECK(pcc.type_b_labelled == 0);
    CHECK(pcc.total_unlabelled == 4);
    CHECK(formula::per_curve_multiplicity(c) == 128);

    auto gz = make(3, {1, 1}, {}, {1, 1}, {1, 1, 1, 1, 1, 1});
    auto pz = formula::predicted_counts(gz);
    CHECK(pz.total_labelled == 0);
    CHECK(pz.type_a_labelled == 0);
    CHECK(pz.type_b_labelled == 0);
    CHECK(formula::per_curve_multiplicity(gz) == 0);
}

TEST_CASE("count times multiplicity refactors the formula on the grid") {
    for (const auto& g : grid_instances({1, 2, 3}, 3, 4, 6)) {
        auto pc = formula::predicted_counts(g);
        Int lhs = pc.total_unlabelled * formula::per_curve_multiplicity(g);
        CHECK(lhs == formula::trop_tev(g).value);
    }
}

TEST_CASE("all-ones a=1 instances have unit multiplicity") {
    auto g = fixture("p2_allones_deg2.json");
    CHECK(formula::per_curve_multiplicity(g) == 1);
}

TEST_CASE("pbundle conjecture reduces to the closed formula at r=1") {
    int tested = 0;
    for (const auto& g : grid_instances({1, 2, 3}, 3, 4, 6)) {
        auto r = formula::trop_tev(g);
        if (r.zero_reason == formula::ZeroReason::Mu1TooLong ||
            r.zero_reason == formula::ZeroReason::Mu3TooLong)
            continue;
        // fibers are mu1, mu3; zero section pairs with mu4, infinity with mu2
        std::vector<std::vector<long>> mu{g.profile(1).sorted, g.profile(3).sorted,
                                          g.profile(4).sorted, g.profile(2).sorted};
        auto c = formula::conjecture_pbundle(1, g.a(), mu, g.n);
        CHECK(c.conjectural);
        CHECK(c.value == r.value);
        ++tested;
        if (tested >= 40) break;
    }
    CHECK(tested >= 5);
}

TEST_CASE("blowup conjecture matches a=1 instances with the exceptional slot on mu2") {
    int tested = 0;
    for (const auto& g : grid_instances({1}, 3, 4, 6)) {
        auto r = formula::trop_tev(g);
        if (r.zero_reason == formula::ZeroReason::Mu1TooLong ||
            r.zero_reason == formula::ZeroReason::Mu3TooLong)
            continue;
        std::vector<std::vector<long>> mu{g.profile(2).sorted, {}, g.profile(1).sorted,
                                          g.profile(4).sorted, g.profile(3).sorted};
        auto c = formula::conjecture_blowup(2, mu, g.n);
        CHECK(c.value == r.value);
        ++tested;
        if (tested >= 40) break;
    }
    CHECK(tested >= 5);
}

TEST_CASE("conjecture evaluators enforce their dimension gates") {
    CHECK_THROWS_AS(formula::conjecture_pbundle(1, 2, {{1}, {1}, {1}, {1}}, 4),
                    std::invalid_argument);
    CHECK_THROWS_AS(formula::conjecture_blowup(1, {{1}, {1}, {1}}, 10), std::invalid_argument);
}

TEST_CASE("comparison report: even cases") {
    // j >= 2: the class pairs negatively with D2, count 0 vs reference 1
    auto rep = formula::comparison_report("even", 2, 1, 0, 3);
    CHECK(rep.infeasible_class);
    CHECK(rep.lhs == 0);
    CHECK(rep.rhs == 1);
    CHECK(rep.distinct);
    CHECK(rep.flag == formula::CompareFlag::Separation);

    // j = 1: the count is 1, equal to the reference; flagged, never asserted
    auto rep1 = formula::comparison_report("even", 1, 2, 0, 5);
    CHECK(rep1.lhs == 1);
    CHECK(rep1.rhs == 1);
    CHECK_FALSE(rep1.distinct);
    CHECK(rep1.flag == formula::CompareFlag::KnownDiscrepancy);
}

TEST_CASE("comparison report: odd cases") {
    auto rep = formula::comparison_report("odd", 1, 2, 2, 3);
    CHECK(rep.lhs == 0);
    CHECK(rep.rhs == 0);
    CHECK_FALSE(rep.distinct);
    CHECK_FALSE(rep.constraints_ok);  // k <= n-1-d fails, noted not fatal
    CHECK(rep.flag == formula::CompareFlag::NoSeparation);

    auto sep = formula::find_odd_separation(1, 6);
    REQUIRE(sep);
    CHECK(sep->lhs == 0);
    CHECK(sep->rhs > 0);

    CHECK_THROWS_AS(formula::comparison_report("odd", 1, 2, 1, 3), std::invalid_argument);
}
