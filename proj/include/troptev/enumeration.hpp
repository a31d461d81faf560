/**
 * @file enumeration.hpp
 * @brief Constructive enumeration of every contributing curve for the
 *        structured point configurations, plus the exclusion audit that
 *        re-derives the "no further contributions" analysis by exact solving
 *        instead of trusting it.
 */
#pragma once

#include <array>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "troptev/curves.hpp"
#include "troptev/exact.hpp"
#include "troptev/formula.hpp"
#include "troptev/incidence.hpp"
#include "troptev/model.hpp"

namespace troptev::enumeration {

using incidence::non_generic_error;

// ---------------------------------------------------------------------------
// Point configurations.

struct PointConfig {
    unsigned long seed = 0;
    int attempts = 1;
    std::vector<Vec2Q> points;        // points[0] is x1 = (0,0)
    std::vector<std::string> regions; // parallel to points
};

namespace detail {

// Random rational with |value| <= 2^20 and denominator <= 2^16.
inline Rat sample_rat(std::mt19937_64& rng, bool negative) {
    std::uniform_int_distribution<long> num(1, 1L << 20);
    std::uniform_int_distribution<long> den(1, 1L << 16);
    Rat r = make_rat(num(rng), den(rng));
    return negative ? -r : r;
}

inline Vec2Q sample_region(std::mt19937_64& rng, const std::string& region, long a) {
    for (int tries = 0; tries < 4096; ++tries) {
        Rat x, y;
        if (region == "sigma1") {  // x < 0, a x + y > 0
            x = sample_rat(rng, true);
            y = sample_rat(rng, false);
        } else if (region == "sigma2") {  // x > 0, y > 0
            x = sample_rat(rng, false);
            y = sample_rat(rng, false);
        } else if (region == "sigma3_lower") {  // a x + y > 0, y < 0
            x = sample_rat(rng, false);
            y = sample_rat(rng, true);
        } else if (region == "sigma4_lower") {  // x < 0, y < 0
            x = sample_rat(rng, true);
            y = sample_rat(rng, true);
        } else {
            throw std::invalid_argument("unknown region " + region);
        }
        Rat side = Rat(a) * x + y;
        if (region == "sigma1" && sgn(side) <= 0) continue;
        if (region == "sigma3_lower" && sgn(side) <= 0) continue;
        return {x, y};
    }
    throw non_generic_error("region sampler exhausted");
}

}  // namespace detail

/// Region tallies of the structured configuration; all entries are
/// nonnegative exactly when the closed formula is nonzero.
inline std::vector<std::pair<std::string, long>> config_tallies(const ContactData& g) {
    if (formula::long_mu34(g))
        return {{"sigma2", g.n - 1 - g.len(4)},
                {"sigma3_lower", g.len(3) + g.len(4) - (g.n - 1)},
                {"sigma4_lower", g.n - 1 - g.len(3)}};
    return {{"sigma1", g.n - 1 - g.len(3) - g.len(4)},
            {"sigma2", g.len(3)},
            {"sigma4_lower", g.len(4)}};
}

inline std::optional<std::string> config_conforms(const ContactData& g,
                                                  const std::vector<Vec2Q>& points) {
    if (points.size() != static_cast<std::size_t>(g.n)) return "wrong number of points";
    if (!points[0].is_zero()) return "x1 must be the origin";
    std::map<std::string, long> found;
    Rat a(g.a());
    for (std::size_t i = 1; i < points.size(); ++i) {
        const auto& p = points[i];
        Rat side = a * p.x + p.y;
        if (sgn(p.x) < 0 && sgn(side) > 0) ++found["sigma1"];
        else if (sgn(p.x) > 0 && sgn(p.y) > 0) ++found["sigma2"];
        else if (sgn(side) > 0 && sgn(p.y) < 0) ++found["sigma3_lower"];
        else if (sgn(p.x) < 0 && sgn(p.y) < 0) ++found["sigma4_lower"];
        else return "point " + std::to_string(i + 1) + " is on a region boundary";
    }
    for (const auto& [region, want] : config_tallies(g))
        if (found[region] != want)
            return "region " + region + " holds " + std::to_string(found[region]) +
                   " points, expected " + std::to_string(want);
    return std::nullopt;
}

/// Samples the configuration prescribed for this instance: x1 at the
/// origin and the stated number of points in each open region, re-sampled
/// until every genericity predicate holds.
inline PointConfig structured_point_config(const ContactData& g, unsigned long seed,
                                      int max_attempts = 64) {
    if (formula::trop_tev(g).value == 0)
        throw std::invalid_argument("structured_point_config: the count is zero, no configuration");
    auto tallies = config_tallies(g);
    for (const auto& [region, count] : tallies)
        if (count < 0)
            throw std::logic_error("structured_point_config: negative tally on a nonzero instance");
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<unsigned long>(attempt));
        PointConfig cfg;
        cfg.seed = seed;
        cfg.attempts = attempt + 1;
        cfg.points.push_back({Rat(0), Rat(0)});
        cfg.regions.push_back("origin");
        for (const auto& [region, count] : tallies)
            for (long k = 0; k < count; ++k) {
                cfg.points.push_back(detail::sample_region(rng, region, g.a()));
                cfg.regions.push_back(region);
            }
        if (!incidence::genericity_failure(g, cfg.points)) return cfg;
    }
    throw non_generic_error("structured_point_config: attempts exhausted (pathological seed)");
}

// ---------------------------------------------------------------------------
// Building realized curves from solved incidence data.

struct SolvedTwoLeaf {
    int marking = 0;
    incidence::LeafSolution sol;
};

struct SolvedOneLeaf {
    int marking = 0;
    DegreeEntry end;
    Rat length;
};

inline curves::ContributingCurve build_curve(const ContactData& g, const Vec2Q& V,
                                             std::optional<int> bare_marking,
                                             std::vector<SolvedTwoLeaf> two_leaves,
                                             std::vector<SolvedOneLeaf> one_leaves,
                                             const std::vector<Vec2Q>& points) {
    curves::CombTree tree;
    curves::PlaneMap map;
    tree.vertex_count = 1;  // vertex 0 is the central vertex
    if (bare_marking) tree.markings.push_back({*bare_marking, 0});

    struct Item {
        int marking;
        const SolvedTwoLeaf* two = nullptr;
        const SolvedOneLeaf* one = nullptr;
    };
    std::vector<Item> items;
    for (const auto& l : two_leaves) items.push_back({l.marking, &l, nullptr});
    for (const auto& l : one_leaves) items.push_back({l.marking, nullptr, &l});
    std::sort(items.begin(), items.end(),
              [](const Item& a, const Item& b) { return a.marking < b.marking; });

    for (const auto& it : items) {
        if (it.two) {
            const auto& sol = it.two->sol;
            int inner = tree.vertex_count++;
            int outer = tree.vertex_count++;
            tree.edges.push_back({0, inner});
            map.directions.push_back(sol.inner.vec + sol.outer.vec);
            map.lengths.push_back(sol.lengths.stem);
            tree.edges.push_back({inner, outer});
            map.directions.push_back(sol.outer.vec);
            map.lengths.push_back(sol.lengths.outer);
            tree.ends.push_back({sol.inner, inner});
            tree.ends.push_back({sol.outer, outer});
            tree.markings.push_back({it.marking, outer});
        } else {
            int w = tree.vertex_count++;
            tree.edges.push_back({0, w});
            map.directions.push_back(it.one->end.vec);
            map.lengths.push_back(it.one->length);
            tree.ends.push_back({it.one->end, w});
            tree.markings.push_back({it.marking, w});
        }
    }
    std::sort(tree.markings.begin(), tree.markings.end());

    map.tree = tree;
    map.root = 0;
    map.root_pos = V;

    auto propagated = curves::balance_propagate(map.tree, 0);
    if (!propagated || *propagated != map.directions)
        throw std::logic_error("build_curve: directions disagree with balancing");
    if (!curves::is_balanced(map)) throw std::logic_error("build_curve: unbalanced map");
    for (auto [mk, pos] : curves::positions_of(map))
        if (pos != points[static_cast<std::size_t>(mk - 1)])
            throw std::logic_error("build_curve: marking position mismatch");

    curves::ContributingCurve c;
    c.map = std::move(map);
    c.classified = curves::classify(c.map.tree);
    if (c.classified.shape == curves::Shape::NotContributingShape)
        throw std::logic_error("build_curve: built a non-contributing shape");
    c.profile = curves::profile_of(g, c.classified);
    c.multiplicity = curves::curve_multiplicity(g.fan, c.classified);
    if (c.multiplicity == 0) throw std::logic_error("build_curve: zero multiplicity");
    return c;
}

// ---------------------------------------------------------------------------
// Case machinery shared by the constructive enumeration and the audit.
// A case fixes the tree type and where the central vertex sits: type A at a
// marked point, type B at the intersection vertex of two single-end rays.

struct CaseSpec {
    bool type_b = false;
    int bare = 0;           // type A: marking at the central vertex
    int j1 = 0, ray1 = 0;   // type B: marking/ray of the first single leaf
    int j2 = 0, ray2 = 0;   //         and of the second
    std::string name() const {
        if (!type_b) return "A:V=x" + std::to_string(bare);
        return "B:x" + std::to_string(j1) + "~n" + std::to_string(ray1) + ",x" +
               std::to_string(j2) + "~n" + std::to_string(ray2);
    }
};

namespace detail {

struct CaseGeometry {
    bool feasible = false;
    Vec2Q V;
    Rat s1, s2;                      // type B only: primitive-ray parameters
    std::vector<int> other_markings; // markings that carry two-vertex leaves
    std::array<long, 4> budget{};    // ray counts left for the leaf pairs
    std::vector<std::vector<std::pair<int, Int>>> options;  // per other marking
};

inline CaseGeometry case_geometry(const ContactData& g, const std::vector<Vec2Q>& points,
                                  const CaseSpec& cs) {
    CaseGeometry geo;
    for (int i = 0; i < 4; ++i) geo.budget[i] = g.len(i + 1);
    if (!cs.type_b) {
        geo.V = points[static_cast<std::size_t>(cs.bare - 1)];
        geo.feasible = true;
        for (int mk = 1; mk <= g.n; ++mk)
            if (mk != cs.bare) geo.other_markings.push_back(mk);
    } else {
        if (geo.budget[cs.ray1 - 1] < 1 || geo.budget[cs.ray2 - 1] < 1) return geo;
        auto v = incidence::solve_type_b_vertex(g.fan, points[static_cast<std::size_t>(cs.j1 - 1)],
                                                cs.ray1, points[static_cast<std::size_t>(cs.j2 - 1)],
                                                cs.ray2);
        if (!v) return geo;
        geo.V = v->V;
        geo.s1 = v->s1;
        geo.s2 = v->s2;
        geo.feasible = true;
        --geo.budget[cs.ray1 - 1];
        --geo.budget[cs.ray2 - 1];
        for (int mk = 1; mk <= g.n; ++mk)
            if (mk != cs.j1 && mk != cs.j2) geo.other_markings.push_back(mk);
    }
    for (int mk : geo.other_markings) {
        std::vector<std::pair<int, Int>> opts;
        for (int pi = 0; pi < static_cast<int>(incidence::kLeafPairs.size()); ++pi) {
            const auto& pr = incidence::kLeafPairs[static_cast<std::size_t>(pi)];
            Int det = incidence::pair_det(g.fan, pr);
            if (det == 0) continue;
            auto t = incidence::cone_test(g.fan, pr,
                                          points[static_cast<std::size_t>(mk - 1)] - geo.V);
            if (t == incidence::ConeTest::Boundary)
                throw non_generic_error("marked point on a cone boundary ray");
            if (t == incidence::ConeTest::Inside) opts.push_back({pi, det});
        }
        geo.options.push_back(std::move(opts));
    }
    return geo;
}

// All ray-pair patterns for a case, by backtracking (audit counterexamples
// and the constructive enumeration both need them materialized).
inline std::vector<std::vector<int>> case_patterns(const CaseGeometry& geo) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::array<long, 4> budget = geo.budget;
    auto rec = [&](auto&& self, std::size_t idx) -> void {
        if (idx == geo.options.size()) {
            if (budget == std::array<long, 4>{0, 0, 0, 0}) out.push_back(cur);
            return;
        }
        for (const auto& [pi, det] : geo.options[idx]) {
            const auto& pr = incidence::kLeafPairs[static_cast<std::size_t>(pi)];
            if (budget[pr.p - 1] == 0 || budget[pr.q - 1] == 0) continue;
            --budget[pr.p - 1];
            --budget[pr.q - 1];
            cur.push_back(pi);
            self(self, idx + 1);
            cur.pop_back();
            ++budget[pr.p - 1];
            ++budget[pr.q - 1];
        }
    };
    rec(rec, 0);
    return out;
}

}  // namespace detail

/// Labelled-curve count of a case without materializing curves:
/// (number of admissible ray-pair patterns) x prod |mu_i|!.
inline Int case_labelled_count(const ContactData& g, const std::vector<Vec2Q>& points,
                               const CaseSpec& cs) {
    auto geo = detail::case_geometry(g, points, cs);
    if (!geo.feasible) return 0;
    auto tally = incidence::pattern_dp(geo.options, geo.budget);
    Int labels = 1;
    for (int i = 1; i <= 4; ++i) labels *= factorial(g.len(i));
    return tally.count * labels;
}

/// Sum over the case's labelled curves of their multiplicity.
inline Int case_multiplicity_sum(const ContactData& g, const std::vector<Vec2Q>& points,
                                 const CaseSpec& cs) {
    auto geo = detail::case_geometry(g, points, cs);
    if (!geo.feasible) return 0;
    auto tally = incidence::pattern_dp(geo.options, geo.budget);
    Int labels = 1;
    for (int i = 1; i <= 4; ++i) labels *= factorial(g.len(i));
    Int central = 1;
    if (cs.type_b) central = abs(det2(g.fan.ray(cs.ray1), g.fan.ray(cs.ray2)));
    return tally.weighted * central * g.product_of_weights() * labels;
}

/// Materializes every labelled curve of one case.
inline std::vector<curves::ContributingCurve> enumerate_case(const ContactData& g,
                                                             const std::vector<Vec2Q>& points,
                                                             const CaseSpec& cs) {
    std::vector<curves::ContributingCurve> out;
    auto geo = detail::case_geometry(g, points, cs);
    if (!geo.feasible) return out;
    auto patterns = detail::case_patterns(geo);
    if (patterns.empty()) return out;

    Degree deg = degree_of(g);
    std::array<std::vector<DegreeEntry>, 4> by_ray;
    for (const auto& e : deg.entries) by_ray[static_cast<std::size_t>(e.ray - 1)].push_back(e);

    for (const auto& pattern : patterns) {
        // Slots per ray: type-B single legs first, then the pattern pairs in
        // marking order. Each slot receives one labelled end of its ray.
        struct Slot {
            int kind;  // 0: single leaf 1, 1: single leaf 2, 2+: leaf index*2 + (0 first ray,1 second)
        };
        std::array<std::vector<Slot>, 4> slots;
        if (cs.type_b) {
            slots[static_cast<std::size_t>(cs.ray1 - 1)].push_back({0});
            slots[static_cast<std::size_t>(cs.ray2 - 1)].push_back({1});
        }
        for (std::size_t li = 0; li < pattern.size(); ++li) {
            const auto& pr = incidence::kLeafPairs[static_cast<std::size_t>(pattern[li])];
            slots[static_cast<std::size_t>(pr.p - 1)].push_back({2 + static_cast<int>(li) * 2});
            slots[static_cast<std::size_t>(pr.q - 1)].push_back({2 + static_cast<int>(li) * 2 + 1});
        }
        for (int r = 0; r < 4; ++r)
            if (slots[static_cast<std::size_t>(r)].size() != by_ray[static_cast<std::size_t>(r)].size())
                throw std::logic_error("enumerate_case: slot/label count mismatch");

        // Iterate over all per-ray permutations of labelled ends.
        std::array<std::vector<int>, 4> perm;
        for (int r = 0; r < 4; ++r) {
            perm[static_cast<std::size_t>(r)].resize(by_ray[static_cast<std::size_t>(r)].size());
            for (std::size_t k = 0; k < perm[static_cast<std::size_t>(r)].size(); ++k)
                perm[static_cast<std::size_t>(r)][k] = static_cast<int>(k);
        }
        auto emit = [&]() {
            // collect the labelled end for every slot
            DegreeEntry single1, single2;
            std::vector<std::array<DegreeEntry, 2>> leaf_ends(pattern.size());
            for (int r = 0; r < 4; ++r)
                for (std::size_t k = 0; k < slots[static_cast<std::size_t>(r)].size(); ++k) {
                    const DegreeEntry& label =
                        by_ray[static_cast<std::size_t>(r)]
                              [static_cast<std::size_t>(perm[static_cast<std::size_t>(r)][k])];
                    int kind = slots[static_cast<std::size_t>(r)][k].kind;
                    if (kind == 0) single1 = label;
                    else if (kind == 1) single2 = label;
                    else leaf_ends[static_cast<std::size_t>((kind - 2) / 2)]
                                  [static_cast<std::size_t>((kind - 2) % 2)] = label;
                }
            std::vector<SolvedTwoLeaf> twos;
            for (std::size_t li = 0; li < pattern.size(); ++li) {
                int mk = geo.other_markings[li];
                auto sol = incidence::solve_leaf(geo.V, points[static_cast<std::size_t>(mk - 1)],
                                                 leaf_ends[li][0], leaf_ends[li][1]);
                if (!sol) throw std::logic_error("enumerate_case: admissible leaf failed to solve");
                twos.push_back({mk, *sol});
            }
            std::vector<SolvedOneLeaf> ones;
            std::optional<int> bare;
            if (cs.type_b) {
                ones.push_back({cs.j1, single1, geo.s1 / Rat(single1.weight)});
                ones.push_back({cs.j2, single2, geo.s2 / Rat(single2.weight)});
            } else {
                bare = cs.bare;
            }
            out.push_back(build_curve(g, geo.V, bare, std::move(twos), std::move(ones), points));
        };
        // nested permutation loop over the four rays
        auto loop = [&](auto&& self, int r) -> void {
            if (r == 4) {
                emit();
                return;
            }
            auto& p = perm[static_cast<std::size_t>(r)];
            std::sort(p.begin(), p.end());
            do {
                self(self, r + 1);
            } while (std::next_permutation(p.begin(), p.end()));
        };
        loop(loop, 0);
    }
    return out;
}

// ---------------------------------------------------------------------------
// The constructive list: type A rooted at x1, and (only when
// |mu3|+|mu4| < n-1) type B with x1 on a single n1 end and the partner
// marking on a single n2 end, the central vertex landing on {x>0, ax+y=0}.

inline std::vector<CaseSpec> constructive_cases(const ContactData& g) {
    std::vector<CaseSpec> cases;
    CaseSpec a;
    a.bare = 1;
    cases.push_back(a);
    if (!formula::long_mu34(g) && g.len(1) >= 1 && g.len(2) >= 1)
        for (int j2 = 2; j2 <= g.n; ++j2) {
            CaseSpec b;
            b.type_b = true;
            b.j1 = 1;
            b.ray1 = 1;
            b.j2 = j2;
            b.ray2 = 2;
            cases.push_back(b);
        }
    return cases;
}

inline std::vector<curves::ContributingCurve> enumerate_contributing(
    const ContactData& g, const PointConfig& cfg) {
    std::vector<curves::ContributingCurve> all;
    for (const auto& cs : constructive_cases(g)) {
        auto part = enumerate_case(g, cfg.points, cs);
        all.insert(all.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
    }
    std::sort(all.begin(), all.end(),
              [](const curves::ContributingCurve& x, const curves::ContributingCurve& y) {
                  return curves::to_json(x).dump() < curves::to_json(y).dump();
              });
    return all;
}

// ---------------------------------------------------------------------------
// Count report.

struct CountReport {
    Int labelled_sum = 0;
    Int trop_tev = 0;
    long labelled_count = 0;
    long unlabelled_count = 0;
    long type_a_labelled = 0;
    long type_b_labelled = 0;
    std::vector<curves::ContributingCurve> curves;
};

/// Enumerates, totals and cross-checks against the closed formula and the
/// predicted counts. Any mismatch is a hard error: it falsifies the count.
inline CountReport total(const ContactData& g, const PointConfig& cfg) {
    CountReport rep;
    rep.curves = enumerate_contributing(g, cfg);
    Int percurve = formula::per_curve_multiplicity(g);
    std::map<std::string, long> orbits;
    for (const auto& c : rep.curves) {
        rep.labelled_sum += c.multiplicity;
        ++rep.labelled_count;
        if (c.classified.shape == curves::Shape::A) ++rep.type_a_labelled;
        else ++rep.type_b_labelled;
        if (c.multiplicity != percurve)
            throw std::logic_error("total: curve multiplicity differs from the common value");
        ++orbits[curves::unlabelled_key(c)];
    }
    rep.unlabelled_count = static_cast<long>(orbits.size());
    Int sym = g.sym_product();
    if (rep.labelled_sum % sym != 0)
        throw std::logic_error("total: labelled sum not divisible by the symmetry factor");
    rep.trop_tev = rep.labelled_sum / sym;

    auto fr = formula::trop_tev(g);
    if (rep.trop_tev != fr.value)
        throw std::logic_error("total: enumeration disagrees with the closed formula");
    auto pc = formula::predicted_counts(g);
    if (Int(rep.labelled_count) != pc.total_labelled ||
        Int(rep.type_a_labelled) != pc.type_a_labelled ||
        Int(rep.type_b_labelled) != pc.type_b_labelled ||
        Int(rep.unlabelled_count) != pc.total_unlabelled)
        throw std::logic_error("total: curve counts disagree with the predicted counts");
    return rep;
}

/// Formula-gated convenience entry: zero instances yield an empty report
/// without building a configuration.
inline CountReport run(const ContactData& g, unsigned long seed, long* attempts = nullptr) {
    if (formula::trop_tev(g).value == 0) return {};
    auto cfg = structured_point_config(g, seed);
    if (attempts) *attempts = cfg.attempts;
    return total(g, cfg);
}

// ---------------------------------------------------------------------------
// Exclusion audit: sweep every (type, placement) case over the structured
// configuration; cases outside the constructive list must have no solution
// with positive lengths.

struct AuditCase {
    std::string name;
    bool constructive = false;
    Int labelled_count = 0;
};

struct AuditReport {
    std::vector<AuditCase> cases;
    bool ok = false;
    std::optional<json> counterexample;  // a curve from an excluded case
};

/// Every central-vertex placement: type A at each marked point, type B at
/// each intersection vertex of two single-end rays.
inline std::vector<CaseSpec> all_cases(const ContactData& g) {
    std::vector<CaseSpec> sweep;
    for (int j = 1; j <= g.n; ++j) {
        CaseSpec cs;
        cs.bare = j;
        sweep.push_back(cs);
    }
    for (int j1 = 1; j1 <= g.n; ++j1)
        for (int j2 = j1 + 1; j2 <= g.n; ++j2)  // the pair of single leaves is unordered
            for (int r1 = 1; r1 <= 4; ++r1)
                for (int r2 = 1; r2 <= 4; ++r2) {
                    if (det2(g.fan.ray(r1), g.fan.ray(r2)) == 0) continue;
                    CaseSpec cs;
                    cs.type_b = true;
                    cs.j1 = j1;
                    cs.ray1 = r1;
                    cs.j2 = j2;
                    cs.ray2 = r2;
                    sweep.push_back(cs);
                }
    return sweep;
}

inline AuditReport exclusion_audit(const ContactData& g, const PointConfig& cfg) {
    AuditReport rep;
    auto constructive = constructive_cases(g);
    auto is_constructive = [&](const CaseSpec& cs) {
        for (const auto& c : constructive)
            if (c.type_b == cs.type_b && c.bare == cs.bare && c.j1 == cs.j1 &&
                c.ray1 == cs.ray1 && c.j2 == cs.j2 && c.ray2 == cs.ray2)
                return true;
        return false;
    };

    std::vector<CaseSpec> sweep = all_cases(g);
    Int constructive_total = 0;
    bool ok = true;
    for (const auto& cs : sweep) {
        AuditCase ac;
        ac.name = cs.name();
        ac.constructive = is_constructive(cs);
        ac.labelled_count = case_labelled_count(g, cfg.points, cs);
        if (ac.constructive) constructive_total += ac.labelled_count;
        else if (ac.labelled_count != 0) {
            ok = false;
            auto extra = enumerate_case(g, cfg.points, cs);
            if (!extra.empty()) rep.counterexample = curves::to_json(extra.front());
        }
        rep.cases.push_back(std::move(ac));
    }
    auto pc = formula::predicted_counts(g);
    if (constructive_total != pc.total_labelled) ok = false;
    rep.ok = ok;
    return rep;
}

// ---------------------------------------------------------------------------
// JSON serialization.

inline json config_to_json(const PointConfig& cfg) {
    json pts = json::array();
    for (const auto& p : cfg.points) pts.push_back(curves::vec2q_to_json(p));
    return json{{"seed", cfg.seed}, {"attempts", cfg.attempts}, {"points", pts},
                {"regions", cfg.regions}};
}

inline PointConfig config_from_json(const json& j) {
    PointConfig cfg;
    cfg.seed = j.value("seed", 0UL);
    cfg.attempts = j.value("attempts", 1);
    for (const auto& p : j.at("points")) {
        auto coord = [&](int i) {
            return make_rat(Int(p.at(i).at(0).get<std::string>()),
                            Int(p.at(i).at(1).get<std::string>()));
        };
        cfg.points.push_back({coord(0), coord(1)});
    }
    if (j.contains("regions")) cfg.regions = j.at("regions").get<std::vector<std::string>>();
    return cfg;
}

inline json report_to_json(const CountReport& rep, bool include_curves = true) {
    json j;
    j["labelled_sum"] = rep.labelled_sum.get_str();
    j["trop_tev"] = rep.trop_tev.get_str();
    j["labelled_count"] = rep.labelled_count;
    j["unlabelled_count"] = rep.unlabelled_count;
    j["type_a_labelled"] = rep.type_a_labelled;
    j["type_b_labelled"] = rep.type_b_labelled;
    if (include_curves) {
        json cs = json::array();
        for (const auto& c : rep.curves) cs.push_back(curves::to_json(c));
        j["curves"] = cs;
    }
    return j;
}

inline json audit_to_json(const AuditReport& rep) {
    json cases = json::array();
    for (const auto& c : rep.cases)
        cases.push_back({{"case", c.name},
                         {"constructive", c.constructive},
                         {"labelled_count", c.labelled_count.get_str()}});
    json j{{"ok", rep.ok}, {"cases", cases}};
    if (rep.counterexample) j["counterexample"] = *rep.counterexample;
    return j;
}

}  // namespace troptev::enumeration
