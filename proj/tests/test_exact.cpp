#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "troptev/exact.hpp"

using namespace troptev;

TEST_CASE("det2 on fan vectors") {
    // rays of the a=2 fan
    CHECK(det2({-1, 2}, {1, 0}) == -2);
    CHECK(abs(det2({-1, 2}, {1, 0})) == 2);
    Vec2Z v{3, -5};
    CHECK(det2(v, v) == 0);
    CHECK(det2({0, 1}, {0, -1}) == 0);
}

TEST_CASE("det2 is bilinear and antisymmetric") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<long> d(-9, 9);
    for (int t = 0; t < 200; ++t) {
        Vec2Z u{d(rng), d(rng)}, v{d(rng), d(rng)}, w{d(rng), d(rng)};
        Int s{d(rng)};
        CHECK(det2(u, v) == -det2(v, u));
        CHECK(det2(u + w, v) == det2(u, v) + det2(w, v));
        CHECK(det2(u * s, v) == s * det2(u, v));
    }
}

TEST_CASE("primitive_and_length") {
    auto [p, l] = primitive_and_length({2, -8});
    CHECK(p == Vec2Z{1, -4});
    CHECK(l == 2);
    auto [p2, l2] = primitive_and_length({-1, 2});
    CHECK(p2 == Vec2Z{-1, 2});
    CHECK(l2 == 1);
    CHECK_THROWS_AS(primitive_and_length({0, 0}), zero_vector_error);
}

TEST_CASE("primitive_and_length round trip") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> d(-40, 40);
    for (int t = 0; t < 200; ++t) {
        Vec2Z v{d(rng), d(rng)};
        if (v.is_zero()) continue;
        auto [p, l] = primitive_and_length(v);
        CHECK(p * l == v);
        CHECK(l >= 1);
        CHECK(gcd(abs(p.x), abs(p.y)) == 1);
    }
}

TEST_CASE("binomial_comb counting convention") {
    CHECK(binomial_comb(2, 1) == 2);
    CHECK(binomial_comb(0, 0) == 1);
    CHECK(binomial_comb(-1, 0) == 0);
    CHECK(binomial_comb(3, 5) == 0);
    CHECK(binomial_comb(10, 4) == 210);
}

TEST_CASE("binomial_gen polynomial extension") {
    CHECK(binomial_gen(-3, 2) == 6);  // (-3)(-4)/2
    CHECK(binomial_gen(4, 2) == 6);
    CHECK(binomial_gen(-3, 2) == binomial_gen(2 - (-3) - 1, 2));  // reflection at even y
    CHECK(binomial_gen(5, 0) == 1);
    CHECK(binomial_gen(0, 3) == 0);
}

TEST_CASE("binomial_gen Pascal and agreement with binomial_comb") {
    for (long x = -12; x <= 12; ++x)
        for (long k = 1; k <= 8; ++k)
            CHECK(binomial_gen(x, k) == binomial_gen(x - 1, k - 1) + binomial_gen(x - 1, k));
    for (long n = 0; n <= 12; ++n)
        for (long k = 0; k <= n; ++k) CHECK(binomial_comb(n, k) == binomial_gen(n, k));
}

TEST_CASE("symmetry_factor") {
    CHECK(symmetry_factor({1, 1, 1}) == 6);
    CHECK(symmetry_factor({1, 2}) == 1);
    CHECK(symmetry_factor({4, 4}) == 2);
    CHECK(symmetry_factor({}) == 1);
    CHECK(symmetry_factor({2, 1, 2, 1, 1}) == 12);  // 3! * 2!
}

TEST_CASE("symmetry_factor is order independent") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> d(1, 4);
    for (int t = 0; t < 100; ++t) {
        std::vector<long> mu;
        for (int i = 0; i < 6; ++i) mu.push_back(d(rng));
        auto shuffled = mu;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(symmetry_factor(mu) == symmetry_factor(shuffled));
    }
}

TEST_CASE("factorial") {
    CHECK(factorial(0) == 1);
    CHECK(factorial(3) == 6);
    CHECK(factorial(10) == 3628800);
}

TEST_CASE("rationals stay canonical") {
    Rat r = make_rat(6, -4);
    CHECK(r.get_num() == -3);
    CHECK(r.get_den() == 2);
    CHECK_THROWS(make_rat(1, 0));
    auto s = solve2({2, 0}, {0, 3}, Vec2Q{Rat(1), Rat(1)});
    REQUIRE(s.solvable);
    CHECK(s.c1 == make_rat(1, 2));
    CHECK(s.c2 == make_rat(1, 3));
    CHECK(!solve2({1, 2}, {2, 4}, Vec2Q{Rat(1), Rat(1)}).solvable);
}
