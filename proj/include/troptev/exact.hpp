/**
 * @file exact.hpp
 * @brief Exact arithmetic substrate: big integers/rationals, 2D lattice
 *        vectors, determinants and combinatorial coefficients.
 *
 * Everything downstream is exact; no floating point is used anywhere in
 * the library (SVG serialization converts to decimal at the very end).
 * Integers are GMP mpz_class, rationals GMP mpq_class kept in canonical
 * form (positive denominator, lowest terms).
 */
#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace troptev {

using Int = mpz_class;
using Rat = mpq_class;

struct zero_vector_error : std::domain_error {
    zero_vector_error() : std::domain_error("primitive_and_length: zero vector") {}
};

// Canonical rational from an integer pair; mpq_class does not
// canonicalize on construction.
inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw std::domain_error("make_rat: zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat make_rat(long num, long den) { return make_rat(Int(num), Int(den)); }

inline std::string to_string(const Int& v) { return v.get_str(); }

inline int sign(const Rat& v) { return sgn(v); }
inline int sign(const Int& v) { return sgn(v); }

// ---------------------------------------------------------------------------
// 2D vectors: Vec2Z for weighted lattice directions, Vec2Q for positions.

struct Vec2Z {
    Int x, y;

    Vec2Z() : x(0), y(0) {}
    Vec2Z(Int xx, Int yy) : x(std::move(xx)), y(std::move(yy)) {}
    Vec2Z(long xx, long yy) : x(xx), y(yy) {}

    bool is_zero() const { return x == 0 && y == 0; }
    Vec2Z operator+(const Vec2Z& o) const { return {x + o.x, y + o.y}; }
    Vec2Z operator-(const Vec2Z& o) const { return {x - o.x, y - o.y}; }
    Vec2Z operator-() const { return {-x, -y}; }
    Vec2Z operator*(const Int& s) const { return {x * s, y * s}; }
    bool operator==(const Vec2Z& o) const { return x == o.x && y == o.y; }
    bool operator!=(const Vec2Z& o) const { return !(*this == o); }
};

struct Vec2Q {
    Rat x, y;

    Vec2Q() : x(0), y(0) {}
    Vec2Q(Rat xx, Rat yy) : x(std::move(xx)), y(std::move(yy)) {}
    explicit Vec2Q(const Vec2Z& v) : x(v.x), y(v.y) {}

    bool is_zero() const { return x == 0 && y == 0; }
    Vec2Q operator+(const Vec2Q& o) const { return {x + o.x, y + o.y}; }
    Vec2Q operator-(const Vec2Q& o) const { return {x - o.x, y - o.y}; }
    Vec2Q operator*(const Rat& s) const { return {x * s, y * s}; }
    bool operator==(const Vec2Q& o) const { return x == o.x && y == o.y; }
    bool operator!=(const Vec2Q& o) const { return !(*this == o); }
};

inline Vec2Q operator+(const Vec2Q& p, const Vec2Z& v) { return {p.x + v.x, p.y + v.y}; }

/// 2x2 lattice determinant u.x*v.y - u.y*v.x.
inline Int det2(const Vec2Z& u, const Vec2Z& v) { return u.x * v.y - u.y * v.x; }

inline Rat det2q(const Vec2Q& u, const Vec2Q& v) { return u.x * v.y - u.y * v.x; }
inline Rat det2q(const Vec2Q& u, const Vec2Z& v) { return u.x * v.y - u.y * v.x; }
inline Rat det2q(const Vec2Z& u, const Vec2Q& v) { return u.x * v.y - u.y * v.x; }

/// Splits v = length * primitive with gcd(|p.x|,|p.y|) = 1, length >= 1.
inline std::pair<Vec2Z, Int> primitive_and_length(const Vec2Z& v) {
    if (v.is_zero()) throw zero_vector_error{};
    Int g = gcd(abs(v.x), abs(v.y));
    return {Vec2Z{v.x / g, v.y / g}, g};
}

// ---------------------------------------------------------------------------
// Combinatorial coefficients.

inline Int factorial(long n) {
    if (n < 0) throw std::domain_error("factorial of negative argument");
    Int r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

/// Counting binomial: 0 whenever N < 0 or K < 0 or K > N.
inline Int binomial_comb(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n),
                 static_cast<unsigned long>(k));
    return r;
}

/// Polynomial binomial x(x-1)...(x-k+1)/k!, any integer x, k >= 0
/// (0 for k < 0). Agrees with binomial_comb on 0 <= k <= x.
inline Int binomial_gen(long x, long k) {
    if (k < 0) return 0;
    Int num = 1;
    for (long i = 0; i < k; ++i) num *= Int(x - i);
    return num / factorial(k);  // exact: k! divides any product of k consecutive integers
}

/// binomial_gen with rational upper index (Vandermonde checks).
inline Rat binomial_gen_q(const Rat& x, long k) {
    if (k < 0) return Rat(0);
    Rat num = 1;
    for (long i = 0; i < k; ++i) num *= (x - i);
    return num / Rat(factorial(k));
}

/// Number of orderings of interchangeable markings: prod over distinct
/// entry values u of (#{v : mu_v = u})!.
inline Int symmetry_factor(const std::vector<long>& mu) {
    std::vector<long> sorted = mu;
    std::sort(sorted.begin(), sorted.end());
    Int r = 1;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        r *= factorial(static_cast<long>(j - i));
        i = j;
    }
    return r;
}

inline Int pow_int(const Int& base, long exp) {
    if (exp < 0) throw std::domain_error("pow_int: negative exponent");
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(exp));
    return r;
}

// ---------------------------------------------------------------------------
// 2x2 rational solve: z = c1*u + c2*v. Used for cone membership and the
// per-leaf incidence systems; anything larger lives in the oracle module.

struct Solve2Result {
    bool solvable = false;  // det(u,v) != 0
    Rat c1, c2;
};

inline Solve2Result solve2(const Vec2Z& u, const Vec2Z& v, const Vec2Q& z) {
    Int d = det2(u, v);
    if (d == 0) return {};
    Solve2Result r;
    r.solvable = true;
    r.c1 = det2q(z, v) / Rat(d);
    r.c2 = det2q(u, z) / Rat(d);
    return r;
}

}  // namespace troptev
