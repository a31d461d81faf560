/**
 * @file curves.hpp
 * @brief Tropical-curve data model: marked combinatorial trees, balancing
 *        propagation, plane realizations, shape classification, leaf
 *        profiles and exact multiplicities.
 */
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "troptev/exact.hpp"
#include "troptev/formula.hpp"
#include "troptev/model.hpp"

namespace troptev::curves {

using formula::LeafProfile;

/// Abstract marked tree. Marking legs are contracted ends (weighted vector
/// zero); end legs carry their Degree entry.
struct CombTree {
    int vertex_count = 0;
    std::vector<std::pair<int, int>> edges;     // bounded edges (u, v)
    std::vector<std::pair<int, int>> markings;  // (marking index 1..n, vertex)
    struct End {
        DegreeEntry entry;
        int vertex = 0;
    };
    std::vector<End> ends;

    long n_markings() const { return static_cast<long>(markings.size()); }
};

namespace detail {

struct Adjacency {
    // per vertex: list of (edge index, other vertex)
    std::vector<std::vector<std::pair<int, int>>> at;

    explicit Adjacency(const CombTree& t) : at(t.vertex_count) {
        for (int e = 0; e < static_cast<int>(t.edges.size()); ++e) {
            at[t.edges[e].first].push_back({e, t.edges[e].second});
            at[t.edges[e].second].push_back({e, t.edges[e].first});
        }
    }
};

}  // namespace detail

/// Weighted direction of each bounded edge, oriented away from `root`:
/// the sum of the weighted end vectors beyond the edge (markings are
/// contracted and contribute zero). Returns nothing when some edge that
/// separates ends receives the zero vector: such a tree cannot contribute
/// and callers discard it.
inline std::optional<std::vector<Vec2Z>> balance_propagate(const CombTree& t, int root) {
    detail::Adjacency adj(t);
    std::vector<Vec2Z> dir(t.edges.size());
    std::vector<int> end_count_at(t.vertex_count, 0);
    std::vector<Vec2Z> end_sum_at(t.vertex_count);
    for (const auto& e : t.ends) {
        end_sum_at[e.vertex] = end_sum_at[e.vertex] + e.entry.vec;
        ++end_count_at[e.vertex];
    }
    // Iterative post-order from root; each edge gets the subtree sum below it.
    std::vector<int> order, parent_edge(t.vertex_count, -1), parent(t.vertex_count, -1);
    std::vector<int> stack{root};
    std::vector<bool> seen(t.vertex_count, false);
    seen[root] = true;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        order.push_back(v);
        for (auto [e, w] : adj.at[v])
            if (!seen[w]) {
                seen[w] = true;
                parent[w] = v;
                parent_edge[w] = e;
                stack.push_back(w);
            }
    }
    std::vector<Vec2Z> below(t.vertex_count);
    std::vector<int> ends_below(t.vertex_count, 0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        below[v] = end_sum_at[v];
        ends_below[v] = end_count_at[v];
        for (auto [e, w] : adj.at[v])
            if (parent[w] == v) {
                below[v] = below[v] + below[w];
                ends_below[v] += ends_below[w];
            }
        if (v != root) {
            if (below[v].is_zero() && ends_below[v] > 0) return std::nullopt;  // ZeroEdgeDirection
            int e = parent_edge[v];
            // orient stored direction from the root side outward
            dir[static_cast<std::size_t>(e)] = below[v];
        }
    }
    return dir;
}

/// Plane realization: root position plus exact lengths and away-oriented
/// weighted directions per bounded edge.
struct PlaneMap {
    CombTree tree;
    int root = 0;
    Vec2Q root_pos;
    std::vector<Rat> lengths;
    std::vector<Vec2Z> directions;  // oriented away from root; edges stored (towards-root, away)
};

/// Exact balancing at every vertex: bounded-edge directions (signed by
/// orientation) plus end vectors sum to zero.
inline bool is_balanced(const PlaneMap& m) {
    std::vector<Vec2Z> sum(m.tree.vertex_count);
    detail::Adjacency adj(m.tree);
    // Re-derive orientation from the root: edge direction points away.
    std::vector<int> parent(m.tree.vertex_count, -1);
    std::vector<int> stack{m.root};
    std::vector<bool> seen(m.tree.vertex_count, false);
    seen[m.root] = true;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (auto [e, w] : adj.at[v])
            if (!seen[w]) {
                seen[w] = true;
                parent[w] = v;
                sum[v] = sum[v] + m.directions[static_cast<std::size_t>(e)];
                sum[w] = sum[w] - m.directions[static_cast<std::size_t>(e)];
                stack.push_back(w);
            }
    }
    for (const auto& e : m.tree.ends) sum[e.vertex] = sum[e.vertex] + e.entry.vec;
    for (const auto& s : sum)
        if (!s.is_zero()) return false;
    return true;
}

/// Positions of all vertices (root + path sums), then of the markings in
/// marking-index order.
inline std::vector<Vec2Q> vertex_positions(const PlaneMap& m) {
    detail::Adjacency adj(m.tree);
    std::vector<Vec2Q> pos(m.tree.vertex_count);
    std::vector<bool> seen(m.tree.vertex_count, false);
    pos[m.root] = m.root_pos;
    seen[m.root] = true;
    std::vector<int> stack{m.root};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (auto [e, w] : adj.at[v])
            if (!seen[w]) {
                seen[w] = true;
                pos[w] = pos[v] + Vec2Q(m.directions[static_cast<std::size_t>(e)]) *
                                      m.lengths[static_cast<std::size_t>(e)];
                stack.push_back(w);
            }
    }
    return pos;
}

inline std::map<int, Vec2Q> positions_of(const PlaneMap& m) {
    auto pos = vertex_positions(m);
    std::map<int, Vec2Q> out;
    for (auto [marking, v] : m.tree.markings) out[marking] = pos[v];
    return out;
}

// ---------------------------------------------------------------------------
// Shape classification (central vertex + leaves of at most two vertices).

enum class Shape { A, B, NotContributingShape };

struct LeafDecomp {
    int marking = 0;
    int vertices = 0;                   // 0, 1 or 2
    std::vector<DegreeEntry> leaf_ends;  // inner end first for two-vertex leaves
};

struct Classified {
    Shape shape = Shape::NotContributingShape;
    int central = -1;
    std::vector<LeafDecomp> leaves;  // sorted by marking index
};

namespace detail {

inline std::optional<Classified> decompose_at(const CombTree& t, int central,
                                              const Adjacency& adj) {
    long n = t.n_markings();
    Classified out;
    out.central = central;

    long l0 = 0, l1 = 0, l2 = 0;
    // Bare markings at the central vertex are zero-vertex leaves.
    for (const auto& [mk, v] : t.markings)
        if (v == central) {
            out.leaves.push_back({mk, 0, {}});
            ++l0;
        }
    for (const auto& e : t.ends)
        if (e.vertex == central) return std::nullopt;  // ends directly at V do not occur

    // Walk each neighbour subtree.
    std::vector<bool> seen(t.vertex_count, false);
    seen[central] = true;
    for (auto [e0, w0] : adj.at[central]) {
        if (seen[w0]) continue;
        std::vector<int> comp;
        std::vector<int> stack{w0};
        seen[w0] = true;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (auto [e, w] : adj.at[v])
                if (!seen[w]) seen[w] = true, stack.push_back(w);
        }
        LeafDecomp leaf;
        int marking_count = 0;
        for (const auto& [mk, v] : t.markings)
            for (int c : comp)
                if (v == c) leaf.marking = mk, ++marking_count;
        if (marking_count != 1) return std::nullopt;
        leaf.vertices = static_cast<int>(comp.size());
        if (leaf.vertices == 1) {
            for (const auto& en : t.ends)
                if (en.vertex == comp[0]) leaf.leaf_ends.push_back(en.entry);
            if (leaf.leaf_ends.size() != 1) return std::nullopt;
            ++l1;
        } else if (leaf.vertices == 2) {
            int inner = w0;
            int outer = (comp[0] == inner) ? comp[1] : comp[0];
            // the unmarked vertex must sit between V and the marking
            for (const auto& [mk, v] : t.markings)
                if (v == inner) return std::nullopt;
            std::vector<DegreeEntry> inner_ends, outer_ends;
            for (const auto& en : t.ends) {
                if (en.vertex == inner) inner_ends.push_back(en.entry);
                if (en.vertex == outer) outer_ends.push_back(en.entry);
            }
            if (inner_ends.size() != 1 || outer_ends.size() != 1) return std::nullopt;
            leaf.leaf_ends = {inner_ends[0], outer_ends[0]};
            ++l2;
        } else {
            return std::nullopt;  // a leaf with 3+ vertices contains a string
        }
        out.leaves.push_back(leaf);
    }
    std::sort(out.leaves.begin(), out.leaves.end(),
              [](const LeafDecomp& x, const LeafDecomp& y) { return x.marking < y.marking; });

    if (l0 == 1 && l1 == 0 && l2 == n - 1) out.shape = Shape::A;
    else if (l0 == 0 && l1 == 2 && l2 == n - 2) out.shape = Shape::B;
    else return std::nullopt;
    return out;
}

}  // namespace detail

/// Classifies a tree against the two contributing shapes: a central
/// n-valent vertex whose leaves have <= 2 vertices, one marking each, any
/// unmarked vertex sitting between the central vertex and the marking.
/// Census (L0,L1,L2) = (1,0,n-1) is type A, (0,2,n-2) is type B.
inline Classified classify(const CombTree& t) {
    Classified bad;
    long n = t.n_markings();
    detail::Adjacency adj(t);
    std::vector<int> valence(t.vertex_count, 0);
    for (const auto& [u, v] : t.edges) ++valence[u], ++valence[v];
    for (const auto& [mk, v] : t.markings) ++valence[v];
    for (const auto& e : t.ends) ++valence[e.vertex];

    std::vector<int> candidates;
    if (n != 3) {
        int central = -1;
        for (int v = 0; v < t.vertex_count; ++v)
            if (valence[v] == n) central = central < 0 ? v : -2;
        if (central < 0) return bad;
        for (int v = 0; v < t.vertex_count; ++v)
            if (v != central && valence[v] != 3) return bad;
        candidates.push_back(central);
    } else {
        // everything is trivalent; try each vertex as the central one
        for (int v = 0; v < t.vertex_count; ++v)
            if (valence[v] != 3) return bad;
        for (int v = 0; v < t.vertex_count; ++v) candidates.push_back(v);
    }
    for (int c : candidates)
        if (auto d = detail::decompose_at(t, c, adj)) return *d;
    return bad;
}

// ---------------------------------------------------------------------------
// Multiplicity and leaf profile.

/// Product over unmarked leaf vertices of lambda*eta*|det(d1,d2)| on the
/// primitive end directions, times the central factor
/// lambda1*lambda2*|det| for type B. Zero signals a non-contributing
/// configuration.
inline Int curve_multiplicity(const FanSpec& fan, const Classified& c) {
    if (c.shape == Shape::NotContributingShape) return 0;
    Int mult = 1;
    std::vector<const LeafDecomp*> singles;
    for (const auto& leaf : c.leaves) {
        if (leaf.vertices == 2) {
            const auto& e1 = leaf.leaf_ends[0];
            const auto& e2 = leaf.leaf_ends[1];
            mult *= Int(e1.weight) * Int(e2.weight) * abs(det2(fan.ray(e1.ray), fan.ray(e2.ray)));
        } else if (leaf.vertices == 1) {
            singles.push_back(&leaf);
        }
    }
    if (c.shape == Shape::B) {
        const auto& e1 = singles.at(0)->leaf_ends[0];
        const auto& e2 = singles.at(1)->leaf_ends[0];
        mult *= Int(e1.weight) * Int(e2.weight) * abs(det2(fan.ray(e1.ray), fan.ray(e2.ray)));
    }
    return mult;
}

/// Tallies alpha..chi and eps from the leaf end pairs and checks the
/// incidence system against the instance.
inline LeafProfile profile_of(const ContactData& g, const Classified& c) {
    LeafProfile p;
    p.type_b = (c.shape == Shape::B);
    auto pair_slot = [&](int r1, int r2) -> long* {
        if (r1 > r2) std::swap(r1, r2);
        if (r1 == 1 && r2 == 2) return &p.alpha;
        if (r1 == 1 && r2 == 3) return &p.beta;
        if (r1 == 2 && r2 == 3) return &p.gamma;
        if (r1 == 3 && r2 == 4) return &p.delta;
        if (r1 == 1 && r2 == 4) return &p.chi;
        return nullptr;  // {2,4} never contributes
    };
    for (const auto& leaf : c.leaves) {
        if (leaf.vertices == 2) {
            long* slot = pair_slot(leaf.leaf_ends[0].ray, leaf.leaf_ends[1].ray);
            if (!slot) throw std::logic_error("profile_of: leaf with opposite parallel ends");
            ++*slot;
        } else if (leaf.vertices == 1) {
            ++p.eps[static_cast<std::size_t>(leaf.leaf_ends[0].ray - 1)];
        }
    }
    if (!formula::profile_system_holds(g, p))
        throw std::logic_error("profile_of: incidence system violated");
    return p;
}

// ---------------------------------------------------------------------------
// A realized contributing curve.

struct ContributingCurve {
    PlaneMap map;
    Classified classified;
    LeafProfile profile;
    Int multiplicity = 0;
};

inline json rat_to_json(const Rat& r) {
    return json::array({r.get_num().get_str(), r.get_den().get_str()});
}

inline json vec2q_to_json(const Vec2Q& v) {
    return json::array({rat_to_json(v.x), rat_to_json(v.y)});
}

/// Canonical serialization; identical geometry and labels give identical
/// text. Consumed by the renderer and stored in verification artifacts.
inline json to_json(const ContributingCurve& c) {
    json j;
    j["type"] = c.classified.shape == Shape::A ? "A" : "B";
    j["multiplicity"] = c.multiplicity.get_str();
    j["profile"] = {{"alpha", c.profile.alpha}, {"beta", c.profile.beta},
                    {"gamma", c.profile.gamma}, {"delta", c.profile.delta},
                    {"chi", c.profile.chi},     {"eps", c.profile.eps}};
    auto pos = vertex_positions(c.map);
    json verts = json::array();
    for (int v = 0; v < c.map.tree.vertex_count; ++v)
        verts.push_back({{"id", v}, {"pos", vec2q_to_json(pos[static_cast<std::size_t>(v)])}});
    j["vertices"] = verts;
    json edges = json::array();
    for (std::size_t e = 0; e < c.map.tree.edges.size(); ++e)
        edges.push_back({{"from", c.map.tree.edges[e].first},
                         {"to", c.map.tree.edges[e].second},
                         {"direction", {c.map.directions[e].x.get_str(), c.map.directions[e].y.get_str()}},
                         {"length", rat_to_json(c.map.lengths[e])}});
    j["edges"] = edges;
    json markings = json::array();
    for (auto [mk, v] : c.map.tree.markings) markings.push_back({{"index", mk}, {"vertex", v}});
    j["markings"] = markings;
    json ends = json::array();
    for (const auto& e : c.map.tree.ends)
        ends.push_back({{"label", e.entry.label},
                        {"ray", e.entry.ray},
                        {"weight", e.entry.weight},
                        {"vertex", e.vertex}});
    j["ends"] = ends;
    return j;
}

/// Serialization key with the end labels erased: labelled curves in the
/// same relabelling orbit share it.
inline std::string unlabelled_key(const ContributingCurve& c) {
    json j = to_json(c);
    for (auto& e : j["ends"]) e.erase("label");
    return j.dump();
}

}  // namespace troptev::curves
