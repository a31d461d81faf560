/**
 * @file model.hpp
 * @brief Problem instances: the Hirzebruch fan, tangency profiles, contact
 *        data, the weighted end degree and curve-class bookkeeping.
 */
#pragma once

#include <nlohmann/json.hpp>

#include <array>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "troptev/exact.hpp"

namespace troptev {

using json = nlohmann::json;

enum class Target { Hirzebruch, P2 };

/// Fan of the Hirzebruch surface H_a: four rays
/// n1 = (-1,a), n2 = (0,1), n3 = (1,0), n4 = (0,-1).
/// P2 mode is modeled as a = 1 with the n2 profile forced empty.
struct FanSpec {
    long a = 1;
    Target target = Target::Hirzebruch;

    Vec2Z ray(int i) const {
        switch (i) {
            case 1: return {-1, a};
            case 2: return {0, 1};
            case 3: return {1, 0};
            case 4: return {0, -1};
        }
        throw std::out_of_range("FanSpec::ray: index must be 1..4");
    }
};

/// Contact orders with one toric divisor, canonically sorted ascending.
/// The original input order is kept for reproducible end labelling.
struct TangencyProfile {
    std::vector<long> sorted;
    std::vector<long> input_order;

    TangencyProfile() = default;
    explicit TangencyProfile(std::vector<long> entries)
        : sorted(entries), input_order(std::move(entries)) {
        std::sort(sorted.begin(), sorted.end());
    }

    long size() const { return static_cast<long>(sorted.size()); }
    long sum() const { return std::accumulate(sorted.begin(), sorted.end(), 0L); }
    Int entry_product() const {
        Int p = 1;
        for (long w : sorted) p *= w;
        return p;
    }
    Int sym() const { return symmetry_factor(sorted); }
    bool operator==(const TangencyProfile& o) const { return sorted == o.sorted; }
};

enum class ViolationKind {
    DimensionViolation,
    BalanceViolation,
    NonPositiveWeight,
    TooFewMarkings,
    P2ModeViolation,
    NonPositiveA,
};

struct Violation {
    ViolationKind kind;
    std::string message;
    long excess = 0;  // signed amount by which the constraint is missed
};

struct validation_error : std::runtime_error {
    std::vector<Violation> violations;
    explicit validation_error(std::vector<Violation> v)
        : std::runtime_error(format(v)), violations(std::move(v)) {}

    static std::string format(const std::vector<Violation>& v) {
        std::ostringstream os;
        os << "invalid instance:";
        for (const auto& x : v) os << " [" << x.message << "]";
        return os.str();
    }
};

struct infeasible_class_error : std::runtime_error {
    explicit infeasible_class_error(const std::string& m) : std::runtime_error(m) {}
};

struct RawInstance {
    long a = 1;
    long n = 0;
    std::array<std::vector<long>, 4> mu;
    Target target = Target::Hirzebruch;
};

/// Validated instance Gamma = (fan; n; mu1..mu4).
struct ContactData {
    FanSpec fan;
    long n = 0;
    std::array<TangencyProfile, 4> mu;

    long a() const { return fan.a; }
    const TangencyProfile& profile(int i) const { return mu.at(i - 1); }
    long len(int i) const { return profile(i).size(); }
    long weight_sum(int i) const { return profile(i).sum(); }
    long m() const { return len(1) + len(2) + len(3) + len(4); }

    Int product_of_weights() const {
        Int p = 1;
        for (const auto& pr : mu) p *= pr.entry_product();
        return p;
    }
    Int sym_product() const {
        Int p = 1;
        for (const auto& pr : mu) p *= pr.sym();
        return p;
    }

    /// Same data with the n1 and n3 profiles exchanged (fan symmetry).
    ContactData swapped13() const {
        ContactData g = *this;
        std::swap(g.mu[0], g.mu[2]);
        return g;
    }
};

inline std::vector<Violation> check_instance(const RawInstance& raw) {
    std::vector<Violation> out;
    if (raw.a < 1)
        out.push_back({ViolationKind::NonPositiveA, "fan parameter a must be >= 1", raw.a - 1});
    if (raw.n < 3)
        out.push_back({ViolationKind::TooFewMarkings,
                       "need n >= 3 markings, got n = " + std::to_string(raw.n), raw.n - 3});
    for (int i = 0; i < 4; ++i)
        for (long w : raw.mu[i])
            if (w < 1) {
                out.push_back({ViolationKind::NonPositiveWeight,
                               "mu" + std::to_string(i + 1) + " has a non-positive entry", w});
                break;
            }
    if (raw.target == Target::P2) {
        if (raw.a != 1)
            out.push_back({ViolationKind::P2ModeViolation, "p2 target requires a = 1", raw.a - 1});
        if (!raw.mu[1].empty())
            out.push_back({ViolationKind::P2ModeViolation, "p2 target requires empty mu2",
                           static_cast<long>(raw.mu[1].size())});
    }

    auto sum = [&](int i) { return std::accumulate(raw.mu[i].begin(), raw.mu[i].end(), 0L); };
    long m = 0;
    for (int i = 0; i < 4; ++i) m += static_cast<long>(raw.mu[i].size());
    if (m != 2 * (raw.n - 1))
        out.push_back({ViolationKind::DimensionViolation,
                       "dimension: m = " + std::to_string(m) + " but 2(n-1) = " +
                           std::to_string(2 * (raw.n - 1)),
                       m - 2 * (raw.n - 1)});
    long ex_x = sum(0) - sum(2);
    if (ex_x != 0)
        out.push_back({ViolationKind::BalanceViolation,
                       "x-balance: S1 - S3 = " + std::to_string(ex_x), ex_x});
    long ex_y = raw.a * sum(0) + sum(1) - sum(3);
    if (ex_y != 0)
        out.push_back({ViolationKind::BalanceViolation,
                       "y-balance: a*S1 + S2 - S4 = " + std::to_string(ex_y), ex_y});
    return out;
}

/// Validates and freezes an instance; reports every violated invariant at
/// once rather than failing fast.
inline ContactData validate(const RawInstance& raw) {
    auto violations = check_instance(raw);
    if (!violations.empty()) throw validation_error(std::move(violations));
    ContactData g;
    g.fan = FanSpec{raw.a, raw.target};
    g.n = raw.n;
    for (int i = 0; i < 4; ++i) g.mu[i] = TangencyProfile(raw.mu[i]);
    return g;
}

// ---------------------------------------------------------------------------
// Degree: the ordered list of weighted end vectors.

struct DegreeEntry {
    int label = 0;      // q_1..q_m, 1-based
    int ray = 0;        // 1..4
    long weight = 0;    // contact order
    Vec2Z vec;          // weight * ray vector
};

struct Degree {
    std::vector<DegreeEntry> entries;

    Vec2Z total() const {
        Vec2Z s;
        for (const auto& e : entries) s = s + e.vec;
        return s;
    }
};

/// Labelled weighted end vectors, ray by ray in the original input order.
inline Degree degree_of(const ContactData& g) {
    Degree d;
    int label = 1;
    for (int i = 1; i <= 4; ++i)
        for (long w : g.profile(i).input_order)
            d.entries.push_back({label++, i, w, g.fan.ray(i) * Int(w)});
    return d;
}

// ---------------------------------------------------------------------------
// Curve classes beta = x*D1 + y*D2 and the all-ones transport.
// Intersection table (from D1 ~ D3, D4 ~ a*D1 + D2):
//   beta.D1 = beta.D3 = y,  beta.D2 = x - a*y,  beta.D4 = x.

struct CurveClass {
    long x = 0, y = 0;

    std::array<long, 4> pairings(long a) const { return {y, x - a * y, y, x}; }
};

inline CurveClass class_of(const ContactData& g) {
    CurveClass b{g.weight_sum(4), g.weight_sum(1)};
    if (b.x - g.a() * b.y != g.weight_sum(2))
        throw std::logic_error("class_of: intersection table inconsistent with balance");
    return b;
}

/// All-ones instance with mu_i = (1,...,1) beta.D_i times; n recovered
/// from m = 2(n-1).
inline ContactData profile_of_class(const CurveClass& beta, const FanSpec& fan) {
    auto dot = beta.pairings(fan.a);
    long m = 0;
    for (int i = 0; i < 4; ++i) {
        if (dot[i] < 0)
            throw infeasible_class_error("profile_of_class: beta.D" + std::to_string(i + 1) +
                                         " = " + std::to_string(dot[i]) + " < 0");
        m += dot[i];
    }
    if (m % 2 != 0)
        throw infeasible_class_error("profile_of_class: m = " + std::to_string(m) +
                                     " is odd, no integer n satisfies m = 2(n-1)");
    RawInstance raw;
    raw.a = fan.a;
    raw.target = fan.target;
    raw.n = m / 2 + 1;
    for (int i = 0; i < 4; ++i) raw.mu[i].assign(static_cast<std::size_t>(dot[i]), 1L);
    return validate(raw);
}

// ---------------------------------------------------------------------------
// Instance grids for sweeps and consistency tests.

/// Sorted multisets with entries in [1, wmax] summing to exactly `sum`.
inline std::vector<std::vector<long>> partitions(long sum, long wmax) {
    std::vector<std::vector<long>> out;
    std::vector<long> cur;
    auto rec = [&](auto&& self, long left, long min_part) -> void {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (long p = min_part; p <= std::min(left, wmax); ++p) {
            cur.push_back(p);
            self(self, left - p, p);
            cur.pop_back();
        }
    };
    rec(rec, sum, 1);
    return out;
}

/// Every valid instance with a in a_values, S1 <= s1_max, all entries
/// <= wmax and n <= n_max.
inline std::vector<ContactData> grid_instances(const std::vector<long>& a_values, long s1_max,
                                               long wmax, long n_max) {
    std::vector<ContactData> out;
    long m_max = 2 * (n_max - 1);
    for (long a : a_values)
        for (long s1 = 0; s1 <= s1_max; ++s1) {
            auto p13 = partitions(s1, wmax);
            for (long s2 = 0; s2 + a * s1 <= wmax * m_max; ++s2) {
                long s4 = a * s1 + s2;
                // cheapest-size prefilter on the total number of ends
                if ((s2 + wmax - 1) / wmax + (s4 + wmax - 1) / wmax > m_max) continue;
                auto p2s = partitions(s2, wmax);
                auto p4s = partitions(s4, wmax);
                for (const auto& mu1 : p13)
                    for (const auto& mu3 : p13)
                        for (const auto& mu2 : p2s)
                            for (const auto& mu4 : p4s) {
                                long m = static_cast<long>(mu1.size() + mu2.size() + mu3.size() +
                                                           mu4.size());
                                if (m % 2 != 0 || m < 4 || m > m_max) continue;
                                RawInstance raw;
                                raw.a = a;
                                raw.n = m / 2 + 1;
                                raw.mu = {mu1, mu2, mu3, mu4};
                                out.push_back(validate(raw));
                            }
            }
        }
    return out;
}

// ---------------------------------------------------------------------------
// JSON instance format (integers only, bit-exact):
// {"a": 1, "n": 4, "mu": [[1,1,1],[1],[3],[4]], "target": "hirzebruch"|"p2"}

inline RawInstance raw_from_json(const json& j) {
    RawInstance raw;
    raw.a = j.at("a").get<long>();
    raw.n = j.at("n").get<long>();
    const auto& mu = j.at("mu");
    if (!mu.is_array() || mu.size() != 4)
        throw std::runtime_error("instance json: \"mu\" must be an array of 4 lists");
    for (int i = 0; i < 4; ++i) raw.mu[i] = mu.at(i).get<std::vector<long>>();
    std::string t = j.value("target", "hirzebruch");
    if (t == "hirzebruch") raw.target = Target::Hirzebruch;
    else if (t == "p2") raw.target = Target::P2;
    else throw std::runtime_error("instance json: unknown target \"" + t + "\"");
    return raw;
}

inline json to_json(const ContactData& g) {
    json mu = json::array();
    for (int i = 1; i <= 4; ++i) mu.push_back(g.profile(i).input_order);
    return json{{"a", g.a()},
                {"n", g.n},
                {"mu", mu},
                {"target", g.fan.target == Target::P2 ? "p2" : "hirzebruch"}};
}

inline json violations_to_json(const std::vector<Violation>& vs) {
    json arr = json::array();
    for (const auto& v : vs) {
        const char* kind = nullptr;
        switch (v.kind) {
            case ViolationKind::DimensionViolation: kind = "dimension_violation"; break;
            case ViolationKind::BalanceViolation: kind = "balance_violation"; break;
            case ViolationKind::NonPositiveWeight: kind = "non_positive_weight"; break;
            case ViolationKind::TooFewMarkings: kind = "too_few_markings"; break;
            case ViolationKind::P2ModeViolation: kind = "p2_mode_violation"; break;
            case ViolationKind::NonPositiveA: kind = "non_positive_a"; break;
        }
        arr.push_back({{"kind", kind}, {"message", v.message}, {"excess", v.excess}});
    }
    return arr;
}

}  // namespace troptev
