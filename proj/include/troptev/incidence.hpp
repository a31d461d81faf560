/**
 * @file incidence.hpp
 * @brief Shared incidence geometry for central-vertex curves: exact cone
 *        membership, per-leaf length solves, the type-B vertex solve, the
 *        ray-pair pattern DP and the genericity predicates.
 *
 * A two-vertex leaf hanging off V with ends u (inner vertex) and v (outer,
 * marked) reaches x iff x - V = l1*(u+v) + l2*v with l1, l2 > 0; the union
 * over the two end arrangements is the open cone spanned by u and v minus
 * the ray through u+v. All tests here are exact; landing on a boundary is
 * reported as non-genericity, never silently rounded.
 */
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "troptev/exact.hpp"
#include "troptev/model.hpp"

namespace troptev::incidence {

struct non_generic_error : std::runtime_error {
    explicit non_generic_error(const std::string& m)
        : std::runtime_error("non-generic configuration: " + m) {}
};

/// Ray pairs that can carry a two-vertex leaf; {2,4} is excluded because
/// opposite vertical rays have determinant zero.
struct RayPair {
    int p, q;
};
inline constexpr std::array<RayPair, 5> kLeafPairs{{{1, 2}, {1, 3}, {1, 4}, {2, 3}, {3, 4}}};

inline Int pair_det(const FanSpec& fan, const RayPair& pr) {
    return abs(det2(fan.ray(pr.p), fan.ray(pr.q)));
}

enum class ConeTest { Inside, Boundary, Outside };

/// Is z strictly inside the open convex cone spanned by the primitive rays?
inline ConeTest cone_test(const FanSpec& fan, const RayPair& pr, const Vec2Q& z) {
    Vec2Z u = fan.ray(pr.p), v = fan.ray(pr.q);
    Int d = det2(u, v);
    // z = c1 u + c2 v, c1 = det(z,v)/d, c2 = det(u,z)/d
    Rat c1 = det2q(z, v) / Rat(d);
    Rat c2 = det2q(u, z) / Rat(d);
    if (sgn(c1) > 0 && sgn(c2) > 0) return ConeTest::Inside;
    if (sgn(c1) == 0 || sgn(c2) == 0) return ConeTest::Boundary;
    return ConeTest::Outside;
}

/// Exact lengths for one arrangement of a two-vertex leaf:
/// x = V + l1*(inner+outer) + l2*outer.
struct LeafLengths {
    Rat stem, outer;
};

inline std::optional<LeafLengths> solve_leaf_arrangement(const Vec2Q& V, const Vec2Q& x,
                                                         const Vec2Z& inner_vec,
                                                         const Vec2Z& outer_vec) {
    Vec2Z stem_dir = inner_vec + outer_vec;
    auto s = solve2(stem_dir, outer_vec, x - V);
    if (!s.solvable) return std::nullopt;
    if (sgn(s.c1) == 0 || sgn(s.c2) == 0)
        throw non_generic_error("marked point on a leaf-cone boundary");
    if (sgn(s.c1) > 0 && sgn(s.c2) > 0) return LeafLengths{s.c1, s.c2};
    return std::nullopt;
}

/// Resolves which of the two ends sits at the unmarked inner vertex; at
/// most one arrangement admits positive lengths.
struct LeafSolution {
    DegreeEntry inner, outer;
    LeafLengths lengths;
};

inline std::optional<LeafSolution> solve_leaf(const Vec2Q& V, const Vec2Q& x,
                                              const DegreeEntry& e1, const DegreeEntry& e2) {
    auto a = solve_leaf_arrangement(V, x, e1.vec, e2.vec);
    auto b = solve_leaf_arrangement(V, x, e2.vec, e1.vec);
    if (a && b) throw std::logic_error("solve_leaf: both arrangements feasible");
    if (a) return LeafSolution{e1, e2, *a};
    if (b) return LeafSolution{e2, e1, *b};
    return std::nullopt;
}

/// Type-B central vertex: V = x1 - s1*n_p = x2 - s2*n_q with s1, s2 > 0.
struct TypeBVertex {
    Vec2Q V;
    Rat s1, s2;  // lattice-length parameters along the primitive rays
};

inline std::optional<TypeBVertex> solve_type_b_vertex(const FanSpec& fan, const Vec2Q& x1,
                                                      int ray1, const Vec2Q& x2, int ray2) {
    auto s = solve2(fan.ray(ray1), -fan.ray(ray2), x1 - x2);
    if (!s.solvable) return std::nullopt;  // parallel single ends never meet generically
    if (sgn(s.c1) == 0 || sgn(s.c2) == 0)
        throw non_generic_error("marked point on another point's ray line");
    if (sgn(s.c1) < 0 || sgn(s.c2) < 0) return std::nullopt;
    // x1 - s1 n_p = x2 - s2 n_q  with  s1 n_p - s2 n_q = x1 - x2
    TypeBVertex v;
    v.s1 = s.c1;
    v.s2 = s.c2;
    v.V = x1 - Vec2Q(fan.ray(ray1)) * v.s1;
    return v;
}

// ---------------------------------------------------------------------------
// Pattern DP: assign an admissible ray pair to every remaining marking so
// that exactly |mu_i| ends of each ray are consumed. Counts assignments
// and sums the product of leaf determinants in one pass.

struct PatternTally {
    Int weighted = 0;  // sum over patterns of prod |det|
    Int count = 0;     // number of patterns
};

/// options[i] lists (pair index into kLeafPairs, det factor) admissible for
/// the i-th remaining marking; counts[] are the ray budgets to consume.
inline PatternTally pattern_dp(const std::vector<std::vector<std::pair<int, Int>>>& options,
                               std::array<long, 4> counts) {
    for (long c : counts)
        if (c < 0) return {};
    long dims[4];
    for (int i = 0; i < 4; ++i) dims[i] = counts[i] + 1;
    auto index = [&](const std::array<long, 4>& c) {
        return ((c[0] * dims[1] + c[1]) * dims[2] + c[2]) * dims[3] + c[3];
    };
    std::size_t states = static_cast<std::size_t>(dims[0] * dims[1] * dims[2] * dims[3]);
    std::vector<PatternTally> dp(states), next(states);
    dp[static_cast<std::size_t>(index(counts))] = {1, 1};
    std::array<long, 4> c{};
    for (const auto& opts : options) {
        for (auto& t : next) t = {};
        for (c[0] = 0; c[0] <= counts[0]; ++c[0])
            for (c[1] = 0; c[1] <= counts[1]; ++c[1])
                for (c[2] = 0; c[2] <= counts[2]; ++c[2])
                    for (c[3] = 0; c[3] <= counts[3]; ++c[3]) {
                        const auto& cur = dp[static_cast<std::size_t>(index(c))];
                        if (cur.count == 0) continue;
                        for (const auto& [pi, det] : opts) {
                            const RayPair& pr = kLeafPairs[static_cast<std::size_t>(pi)];
                            if (c[pr.p - 1] == 0 || c[pr.q - 1] == 0) continue;
                            auto nc = c;
                            --nc[pr.p - 1];
                            --nc[pr.q - 1];
                            auto& slot = next[static_cast<std::size_t>(index(nc))];
                            slot.weighted += cur.weighted * det;
                            slot.count += cur.count;
                        }
                    }
        dp.swap(next);
    }
    return dp[static_cast<std::size_t>(index({0, 0, 0, 0}))];
}

// ---------------------------------------------------------------------------
// Genericity: every finite predicate the counting relies on, checked
// exactly. Candidate central-vertex positions are all marked points plus
// every feasible type-B intersection vertex.

struct CentralCandidate {
    Vec2Q V;
    // points that define this vertex and legitimately sit on rays through it
    int skip1 = -1, skip2 = -1;
};

inline std::vector<CentralCandidate> central_candidates(const FanSpec& fan,
                                                        const std::vector<Vec2Q>& points) {
    std::vector<CentralCandidate> vs;
    for (std::size_t j = 0; j < points.size(); ++j)
        vs.push_back({points[j], static_cast<int>(j), -1});
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (i == j) continue;
            for (int p = 1; p <= 4; ++p)
                for (int q = 1; q <= 4; ++q) {
                    if (p == q || det2(fan.ray(p), fan.ray(q)) == 0) continue;
                    if (auto v = solve_type_b_vertex(fan, points[i], p, points[j], q))
                        vs.push_back({v->V, static_cast<int>(i), static_cast<int>(j)});
                }
        }
    return vs;
}

/// Returns a failure description, or nothing when the configuration is
/// generic for this instance's weights.
inline std::optional<std::string> genericity_failure(const ContactData& g,
                                                     const std::vector<Vec2Q>& points) {
    const FanSpec& fan = g.fan;
    std::vector<CentralCandidate> vs;
    try {
        vs = central_candidates(fan, points);
    } catch (const non_generic_error& e) {
        return std::string(e.what());
    }
    // distinct weight values per ray
    std::array<std::vector<long>, 4> values;
    for (int i = 1; i <= 4; ++i) {
        const auto& s = g.profile(i).sorted;
        for (long w : s)
            if (values[i - 1].empty() || values[i - 1].back() != w) values[i - 1].push_back(w);
    }
    for (const auto& cand : vs)
        for (std::size_t xi = 0; xi < points.size(); ++xi) {
            if (static_cast<int>(xi) == cand.skip1 || static_cast<int>(xi) == cand.skip2)
                continue;
            const Vec2Q& V = cand.V;
            const Vec2Q& x = points[xi];
            Vec2Q z = x - V;
            if (z.is_zero()) return "a marked point coincides with a candidate vertex";
            for (int p = 1; p <= 4; ++p)
                if (det2q(z, fan.ray(p)) == 0)
                    return "a marked point lies on a ray line through a candidate vertex";
            for (const auto& pr : kLeafPairs) {
                if (pair_det(fan, pr) == 0) continue;
                for (long wa : values[pr.p - 1])
                    for (long wb : values[pr.q - 1]) {
                        Vec2Z mid = fan.ray(pr.p) * Int(wa) + fan.ray(pr.q) * Int(wb);
                        if (!mid.is_zero() && det2q(z, mid) == 0)
                            return "a marked point lies on a weighted middle ray";
                    }
            }
        }
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i] == points[j]) return "coincident marked points";
    return std::nullopt;
}

}  // namespace troptev::incidence
