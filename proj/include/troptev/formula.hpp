/**
 * @file formula.hpp
 * @brief Closed-form evaluation: the tropical Tevelev degree of H_a and P2,
 *        leaf-profile systems, predicted curve counts, the conjectural
 *        higher-dimensional evaluators and the virtual-class comparison
 *        report.
 */
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "troptev/exact.hpp"
#include "troptev/model.hpp"

namespace troptev::formula {

// ---------------------------------------------------------------------------
// Leaf profiles (alpha..chi, eps) and the linear system they satisfy.
//
// A contributing curve has a central vertex V; its leaves are tallied by the
// ray pair of their ends: alpha ~ {n1,n2}, beta ~ {n1,n3}, gamma ~ {n2,n3},
// delta ~ {n3,n4}, chi ~ {n4,n1}; eps_i counts single-end leaves on ray n_i.

struct LeafProfile {
    long alpha = 0, beta = 0, gamma = 0, delta = 0, chi = 0;
    std::array<int, 4> eps{0, 0, 0, 0};
    bool type_b = false;

    int eps_sum() const { return eps[0] + eps[1] + eps[2] + eps[3]; }
    bool feasible() const {
        return alpha >= 0 && beta >= 0 && gamma >= 0 && delta >= 0 && chi >= 0;
    }
    long pair_total() const { return alpha + beta + gamma + delta + chi; }
};

/// Checks the per-divisor incidence system
///   alpha + beta + chi = |mu1| - eps1      alpha + gamma      = |mu2| - eps2
///   beta + gamma + delta = |mu3| - eps3    chi + delta        = |mu4| - eps4
inline bool profile_system_holds(const ContactData& g, const LeafProfile& p) {
    return p.alpha + p.beta + p.chi == g.len(1) - p.eps[0] &&
           p.alpha + p.gamma == g.len(2) - p.eps[1] &&
           p.beta + p.gamma + p.delta == g.len(3) - p.eps[2] &&
           p.chi + p.delta == g.len(4) - p.eps[3];
}

/// Solves the system for (beta, gamma, delta, chi) given eps, the type flag
/// and alpha. Returns nothing when some component is negative.
inline std::optional<LeafProfile> solve_profile(const ContactData& g,
                                                const std::array<int, 4>& eps, bool type_b,
                                                long alpha) {
    int es = eps[0] + eps[1] + eps[2] + eps[3];
    if (es != (type_b ? 2 : 0))
        throw std::invalid_argument("solve_profile: eps sum inconsistent with type");
    long db = type_b ? 1 : 0;
    LeafProfile p;
    p.eps = eps;
    p.type_b = type_b;
    p.alpha = alpha;
    p.beta = g.n - 1 - db - g.len(4) - g.len(2) + eps[1] + eps[3];
    p.gamma = g.len(2) - eps[1] - alpha;
    p.delta = g.len(3) + g.len(4) - (g.n - 1 - db) - eps[2] - eps[3] + alpha;
    p.chi = g.n - 1 - db - g.len(3) + eps[2] - alpha;
    if (!p.feasible()) return std::nullopt;
    if (!profile_system_holds(g, p))
        throw std::logic_error("solve_profile: incidence system violated; balance bug");
    if (p.pair_total() != g.n - 1 - db)
        throw std::logic_error("solve_profile: leaf total mismatch");
    return p;
}

inline bool long_mu34(const ContactData& g) { return g.len(3) + g.len(4) >= g.n - 1; }

/// Baseline solution: eps = 0, type A, minimal alpha. Components may be
/// negative for instances whose count is zero; callers inspect feasible().
inline LeafProfile baseline_profile(const ContactData& g) {
    LeafProfile p;
    if (long_mu34(g)) {
        p.alpha = 0;
        p.beta = g.n - 1 - g.len(2) - g.len(4);
        p.gamma = g.len(2);
        p.delta = g.len(3) + g.len(4) - (g.n - 1);
        p.chi = g.n - 1 - g.len(3);
    } else {
        p.alpha = g.n - 1 - g.len(3) - g.len(4);
        p.beta = g.n - 1 - g.len(4) - g.len(2);
        p.gamma = g.n - 1 - g.len(1);
        p.delta = 0;
        p.chi = g.len(4);
    }
    return p;
}

// ---------------------------------------------------------------------------
// The closed formula.

enum class ZeroReason { None, Mu1TooLong, Mu3TooLong, BinomialZero };

inline const char* zero_reason_name(ZeroReason r) {
    switch (r) {
        case ZeroReason::None: return "none";
        case ZeroReason::Mu1TooLong: return "mu1_too_long";
        case ZeroReason::Mu3TooLong: return "mu3_too_long";
        case ZeroReason::BinomialZero: return "binomial_zero";
    }
    return "?";
}

struct FormulaResult {
    Int value = 0;
    ZeroReason zero_reason = ZeroReason::None;
    std::array<Int, 4> per_divisor{Int(0), Int(0), Int(0), Int(0)};
    long a_exponent = 0;
    Int a_power = 1;         // meaningful only when the binomial is nonzero
    long binomial_top = 0;   // n-1-|mu4|
    long binomial_bottom = 0;  // |mu2|
    Int binomial = 0;
};

/// Per-divisor factor |mu_i|! * prod_j mu_{i,j} / sym(mu_i); the quotient
/// |mu_i|!/sym is a multinomial coefficient, asserted integral.
inline Int divisor_factor(const TangencyProfile& mu) {
    Int fact = factorial(mu.size());
    Int s = mu.sym();
    if (fact % s != 0) throw std::logic_error("divisor factor not integral");
    return (fact / s) * mu.entry_product();
}

/// Tropical Tevelev degree of H_a for the instance g (exact).
inline FormulaResult trop_tev(const ContactData& g) {
    FormulaResult r;
    for (int i = 1; i <= 4; ++i) r.per_divisor[i - 1] = divisor_factor(g.profile(i));
    r.binomial_top = g.n - 1 - g.len(4);
    r.binomial_bottom = g.len(2);
    r.a_exponent = g.n - 1 - g.len(2) - g.len(4);
    // Zero gates, checked in this order so zero_reason is deterministic.
    if (g.len(1) > g.n - 1) {
        r.zero_reason = ZeroReason::Mu1TooLong;
        return r;
    }
    if (g.len(3) > g.n - 1) {
        r.zero_reason = ZeroReason::Mu3TooLong;
        return r;
    }
    r.binomial = binomial_comb(r.binomial_top, r.binomial_bottom);
    if (r.binomial == 0) {
        r.zero_reason = ZeroReason::BinomialZero;
        return r;
    }
    // |mu2| <= n-1-|mu4| here, so the exponent is forced nonnegative; a
    // failure indicates a validation bug upstream.
    if (r.a_exponent < 0)
        throw std::logic_error("trop_tev: negative a-exponent with nonzero binomial");
    r.a_power = pow_int(Int(g.a()), r.a_exponent);
    r.value = r.per_divisor[0] * r.per_divisor[1] * r.per_divisor[2] * r.per_divisor[3] *
              r.a_power * r.binomial;
    return r;
}

/// Degenerate-fan count for P2 (a = 1, mu2 empty): the product runs over
/// the three surviving divisors only.
inline FormulaResult trop_tev_p2(const ContactData& g) {
    if (g.a() != 1 || g.len(2) != 0)
        throw std::invalid_argument("trop_tev_p2: requires a = 1 and empty mu2");
    FormulaResult r;
    for (int i = 1; i <= 4; ++i) r.per_divisor[i - 1] = divisor_factor(g.profile(i));
    r.binomial_top = g.n - 1 - g.len(4);
    r.binomial_bottom = 0;
    r.a_exponent = 0;
    if (g.len(1) > g.n - 1) {
        r.zero_reason = ZeroReason::Mu1TooLong;
        return r;
    }
    if (g.len(3) > g.n - 1) {
        r.zero_reason = ZeroReason::Mu3TooLong;
        return r;
    }
    r.binomial = 1;
    r.value = r.per_divisor[0] * r.per_divisor[2] * r.per_divisor[3];
    return r;
}

/// Labelled count: trop_tev times the full symmetry factor.
inline Int labelled_degree(const ContactData& g) { return trop_tev(g).value * g.sym_product(); }

// ---------------------------------------------------------------------------
// Predicted curve counts (labelled and unlabelled) and the per-curve
// multiplicity, refactoring the closed formula as count x multiplicity.

struct PredictedCounts {
    Int type_a_labelled = 0;
    Int type_b_labelled = 0;
    Int total_labelled = 0;
    Int total_unlabelled = 0;
};

inline PredictedCounts predicted_counts(const ContactData& g) {
    PredictedCounts pc;
    if (g.len(1) > g.n - 1 || g.len(3) > g.n - 1) return pc;
    Int len_fact = 1;
    for (int i = 1; i <= 4; ++i) len_fact *= factorial(g.len(i));
    pc.total_labelled = len_fact * binomial_comb(g.n - 1 - g.len(4), g.len(2));
    LeafProfile bar = baseline_profile(g);
    if (long_mu34(g)) {
        pc.type_a_labelled = pc.total_labelled;
    } else {
        pc.type_a_labelled = len_fact * binomial_comb(bar.beta + bar.gamma, bar.beta);
        Int sum = 0;
        for (long k = 1; k <= bar.beta; ++k)
            sum += binomial_comb(bar.alpha + k - 1, bar.alpha - 1) *
                   binomial_comb(bar.beta + bar.gamma - k, bar.beta - k);
        pc.type_b_labelled = len_fact * sum;
    }
    if (pc.type_a_labelled + pc.type_b_labelled != pc.total_labelled)
        throw std::logic_error("predicted_counts: type split does not telescope to the total");
    Int sym = g.sym_product();
    if (pc.total_labelled % sym != 0)
        throw std::logic_error("predicted_counts: labelled total not divisible by symmetry");
    pc.total_unlabelled = pc.total_labelled / sym;
    return pc;
}

/// Every contributing curve has the same multiplicity
/// prod mu_{i,j} * a^{n-1-|mu2|-|mu4|}. Returns 0 when no curve exists.
inline Int per_curve_multiplicity(const ContactData& g) {
    if (predicted_counts(g).total_labelled == 0) return 0;
    long e = g.n - 1 - g.len(2) - g.len(4);
    if (e < 0) throw std::logic_error("per_curve_multiplicity: negative exponent with curves");
    return g.product_of_weights() * pow_int(Int(g.a()), e);
}

// ---------------------------------------------------------------------------
// Conjectural higher-dimensional evaluators. No enumeration backs these;
// they are quarantined behind the `conjectural` flag.

struct ConjectureResult {
    Int value = 0;
    bool conjectural = true;
    std::vector<std::string> notes;
};

inline Int generic_divisor_factor(const std::vector<long>& mu) {
    Int fact = factorial(static_cast<long>(mu.size()));
    Int s = symmetry_factor(mu);
    Int p = 1;
    for (long w : mu) {
        if (w < 1) throw std::invalid_argument("conjecture profile entries must be >= 1");
        p *= w;
    }
    if (fact % s != 0) throw std::logic_error("divisor factor not integral");
    return (fact / s) * p;
}

/// P1-bundle P(O + O(a)) over P^r: r+1 fiber divisors, then the zero and
/// infinity sections. dim X = r+1, so the dimension gate is m = (r+1)(n-1).
inline ConjectureResult conjecture_pbundle(long r, long a,
                                           const std::vector<std::vector<long>>& mu, long n) {
    if (r < 1 || a < 1) throw std::invalid_argument("conjecture_pbundle: need r >= 1, a >= 1");
    if (static_cast<long>(mu.size()) != r + 3)
        throw std::invalid_argument("conjecture_pbundle: expected r+3 profiles");
    long m = 0;
    for (const auto& p : mu) m += static_cast<long>(p.size());
    if (m != (r + 1) * (n - 1))
        throw std::invalid_argument("conjecture_pbundle: dimension gate m = (r+1)(n-1) failed");
    ConjectureResult res;
    res.notes.push_back("dimension gate uses dim X = r+1");
    Int prod = 1;
    for (const auto& p : mu) prod *= generic_divisor_factor(p);
    long zero_len = static_cast<long>(mu[static_cast<std::size_t>(r + 1)].size());
    long inf_len = static_cast<long>(mu[static_cast<std::size_t>(r + 2)].size());
    Int binom = binomial_comb(n - 1 - zero_len, inf_len);
    if (binom == 0) return res;
    long e = n - 1 - zero_len - inf_len;
    if (e < 0) throw std::logic_error("conjecture_pbundle: negative exponent with nonzero binomial");
    res.value = prod * pow_int(Int(a), e) * binom;
    return res;
}

/// Blowup of P^r at r torus-fixed points: exceptional divisors D_1..D_r,
/// strict transforms D_{r+1}..D_{2r+1}. dim X = r, gate m = r(n-1).
inline ConjectureResult conjecture_blowup(long r, const std::vector<std::vector<long>>& mu,
                                          long n) {
    if (r < 1) throw std::invalid_argument("conjecture_blowup: need r >= 1");
    if (static_cast<long>(mu.size()) != 2 * r + 1)
        throw std::invalid_argument("conjecture_blowup: expected 2r+1 profiles");
    long m = 0;
    for (const auto& p : mu) m += static_cast<long>(p.size());
    if (m != r * (n - 1))
        throw std::invalid_argument("conjecture_blowup: dimension gate m = r(n-1) failed");
    ConjectureResult res;
    res.notes.push_back("product index runs i=1..2r+1; there is no mu_0 slot");
    Int prod = 1;
    for (const auto& p : mu) prod *= generic_divisor_factor(p);
    Int binoms = 1;
    for (long i = 1; i <= r; ++i) {
        long exc_len = static_cast<long>(mu[static_cast<std::size_t>(i - 1)].size());
        long strict_len = static_cast<long>(mu[static_cast<std::size_t>(i + r)].size());
        binoms *= binomial_comb(n - 1 - strict_len, exc_len);
    }
    res.value = prod * binoms;
    return res;
}

// ---------------------------------------------------------------------------
// Virtual-class comparison: all-ones counts transported from P1xP1 / Bl_p P2
// against the Hirzebruch formula.

enum class CompareFlag { Separation, NoSeparation, KnownDiscrepancy };

struct ComparisonReport {
    std::string parity;
    long j = 0, d = 0, k = 0, n = 0, a = 0;
    CurveClass beta;
    std::array<long, 4> pairings{0, 0, 0, 0};
    bool constraints_ok = true;
    std::vector<std::string> constraint_notes;
    bool infeasible_class = false;
    Int lhs = 0;  // Hirzebruch tangency-count side
    Int rhs = 0;  // deformation reference value
    bool distinct = false;
    CompareFlag flag = CompareFlag::NoSeparation;
};

inline ComparisonReport comparison_report(const std::string& parity, long j, long d, long k,
                                          long n) {
    if (j < 1) throw std::invalid_argument("comparison_report: need j >= 1");
    ComparisonReport rep;
    rep.parity = parity;
    rep.j = j;
    rep.d = d;
    rep.n = n;
    if (parity == "even") {
        rep.a = 2 * j;
        rep.k = 0;
        if (2 * d != n - 1)
            throw std::invalid_argument("comparison_report even: requires 2d = n-1");
        rep.beta = CurveClass{d * (j + 1), d};
        rep.rhs = 1;
    } else if (parity == "odd") {
        rep.a = 2 * j + 1;
        rep.k = k;
        if (3 * d - k != 2 * (n - 1))
            throw std::invalid_argument("comparison_report odd: requires 3d-k = 2(n-1)");
        if (k < 0 || k > d) {
            rep.constraints_ok = false;
            rep.constraint_notes.push_back("0 <= k <= d violated");
        }
        if (k > n - 1 - d) {
            rep.constraints_ok = false;
            rep.constraint_notes.push_back("k <= n-1-d violated");
        }
        rep.beta = CurveClass{j * (d - k) + d, d - k};
        rep.rhs = binomial_comb(n - 1 - d, k);
    } else {
        throw std::invalid_argument("comparison_report: parity must be even or odd");
    }
    FanSpec fan{rep.a, Target::Hirzebruch};
    rep.pairings = rep.beta.pairings(rep.a);
    try {
        ContactData g = profile_of_class(rep.beta, fan);
        if (g.n != n) throw std::logic_error("comparison_report: n mismatch after transport");
        rep.lhs = trop_tev(g).value;
    } catch (const infeasible_class_error&) {
        // Contact orders cannot be negative: empty moduli problem, count 0.
        rep.infeasible_class = true;
        rep.lhs = 0;
    }
    rep.distinct = rep.lhs != rep.rhs;
    if (parity == "even" && j == 1)
        rep.flag = CompareFlag::KnownDiscrepancy;
    else
        rep.flag = rep.distinct ? CompareFlag::Separation : CompareFlag::NoSeparation;
    return rep;
}

/// Scans the odd-case constraint polytope for a parameter choice whose
/// tangency-side count is 0 while the reference value is positive.
inline std::optional<ComparisonReport> find_odd_separation(long j, long d_max) {
    for (long d = 1; d <= d_max; ++d)
        for (long k = 0; k <= d; ++k) {
            if ((3 * d - k) % 2 != 0) continue;
            long n = (3 * d - k) / 2 + 1;
            if (k > n - 1 - d) continue;
            auto rep = comparison_report("odd", j, d, k, n);
            if (rep.lhs == 0 && rep.rhs > 0) return rep;
        }
    return std::nullopt;
}

}  // namespace troptev::formula
