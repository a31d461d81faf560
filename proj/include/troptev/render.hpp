/**
 * @file render.hpp
 * @brief Deterministic SVG emission of plane tropical curves with the fan
 *        backdrop: dashed rays from the origin, solid curve edges, weight
 *        labels on the ends, red point markers.
 *
 * Geometry stays rational until serialization; numbers are printed with a
 * fixed six-decimal format, so identical input gives byte-identical output.
 */
#pragma once

#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "troptev/curves.hpp"
#include "troptev/model.hpp"

namespace troptev::render {

struct empty_scene_error : std::runtime_error {
    empty_scene_error() : std::runtime_error("render: empty curve list") {}
};

struct RenderOptions {
    bool label_all = false;  // label every end, not just weights > 1
};

namespace detail {

inline std::string fmt(const Rat& v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v.get_d());
    return buf;
}

// y flips at serialization so the plane's orientation matches the screen
inline std::string pt(const Vec2Q& p) { return fmt(p.x) + "," + fmt(-p.y); }

struct Box {
    Rat xmin, xmax, ymin, ymax;

    void grow(const Vec2Q& p) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    Rat extent() const { return std::max(xmax - xmin, ymax - ymin); }
};

/// Largest t with origin + t*dir still inside the box (assumes the origin
/// of the ray is strictly inside).
inline Rat clip_t(const Box& b, const Vec2Q& from, const Vec2Z& dir) {
    Rat t(-1);
    auto bound = [&](const Rat& limit, const Rat& at, const Int& d) {
        if (d == 0) return;
        Rat cand = (limit - at) / Rat(d);
        if (sgn(cand) > 0 && (sgn(t) < 0 || cand < t)) t = cand;
    };
    if (dir.x > 0) bound(b.xmax, from.x, dir.x);
    if (dir.x < 0) bound(b.xmin, from.x, dir.x);
    if (dir.y > 0) bound(b.ymax, from.y, dir.y);
    if (dir.y < 0) bound(b.ymin, from.y, dir.y);
    return sgn(t) > 0 ? t : Rat(1);
}

inline void render_one(std::string& svg, const FanSpec& fan,
                       const curves::ContributingCurve& c, const RenderOptions& opt) {
    auto pos = curves::vertex_positions(c.map);
    Box box{Rat(0), Rat(0), Rat(0), Rat(0)};
    for (const auto& p : pos) box.grow(p);
    for (auto [mk, p] : curves::positions_of(c.map)) box.grow(p);
    Rat margin = box.extent() / 4 + 1;
    box.xmin -= margin;
    box.xmax += margin;
    box.ymin -= margin;
    box.ymax += margin;
    Rat w = box.xmax - box.xmin, h = box.ymax - box.ymin;
    Rat stroke = box.extent() / 150 + make_rat(1, 100);
    Rat font = stroke * 6;

    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + fmt(box.xmin) + " " +
           fmt(-box.ymax) + " " + fmt(w) + " " + fmt(h) + "\">\n";
    // fan backdrop: dashed rays from the origin
    Vec2Q origin{Rat(0), Rat(0)};
    for (int r = 1; r <= 4; ++r) {
        Vec2Z d = fan.ray(r);
        Rat t = clip_t(box, origin, d);
        Vec2Q tip = origin + Vec2Q(d) * t;
        svg += "  <line x1=\"" + fmt(origin.x) + "\" y1=\"" + fmt(-origin.y) + "\" x2=\"" +
               fmt(tip.x) + "\" y2=\"" + fmt(-tip.y) + "\" stroke=\"gray\" stroke-width=\"" +
               fmt(stroke) + "\" stroke-dasharray=\"" + fmt(stroke * 4) + "\"/>\n";
    }
    // bounded edges
    for (std::size_t e = 0; e < c.map.tree.edges.size(); ++e) {
        const auto& [u, v] = c.map.tree.edges[e];
        svg += "  <line x1=\"" + fmt(pos[static_cast<std::size_t>(u)].x) + "\" y1=\"" +
               fmt(-pos[static_cast<std::size_t>(u)].y) + "\" x2=\"" +
               fmt(pos[static_cast<std::size_t>(v)].x) + "\" y2=\"" +
               fmt(-pos[static_cast<std::size_t>(v)].y) + "\" stroke=\"black\" stroke-width=\"" +
               fmt(stroke * 2) + "\"/>\n";
    }
    // unbounded ends, clipped at the viewport
    for (const auto& en : c.map.tree.ends) {
        const Vec2Q& from = pos[static_cast<std::size_t>(en.vertex)];
        Rat t = clip_t(box, from, en.entry.vec);
        Vec2Q tip = from + Vec2Q(en.entry.vec) * t;
        svg += "  <line x1=\"" + fmt(from.x) + "\" y1=\"" + fmt(-from.y) + "\" x2=\"" +
               fmt(tip.x) + "\" y2=\"" + fmt(-tip.y) + "\" stroke=\"black\" stroke-width=\"" +
               fmt(stroke * 2) + "\"/>\n";
        if (opt.label_all || en.entry.weight > 1) {
            Vec2Q at = from + Vec2Q(en.entry.vec) * (t * make_rat(7, 10));
            svg += "  <text x=\"" + fmt(at.x + stroke * 3) + "\" y=\"" + fmt(-(at.y + stroke * 3)) +
                   "\" font-size=\"" + fmt(font) + "\">" + std::to_string(en.entry.weight) +
                   "</text>\n";
        }
    }
    // marked points
    for (auto [mk, p] : curves::positions_of(c.map)) {
        svg += "  <circle cx=\"" + fmt(p.x) + "\" cy=\"" + fmt(-p.y) + "\" r=\"" +
               fmt(stroke * 3) + "\" fill=\"red\"/>\n";
        svg += "  <text x=\"" + fmt(p.x + stroke * 4) + "\" y=\"" + fmt(-(p.y - stroke * 4)) +
               "\" font-size=\"" + fmt(font) + "\" fill=\"red\">x" + std::to_string(mk) +
               "</text>\n";
    }
    svg += "</svg>\n";
}

}  // namespace detail

/// One SVG per unlabelled curve (file name `curve_<index>_<type>.svg`) plus
/// a contact sheet with all of them side by side.
inline std::map<std::string, std::string> render_svg(
    const FanSpec& fan, const std::vector<curves::ContributingCurve>& all,
    const RenderOptions& opt = {}) {
    if (all.empty()) throw empty_scene_error{};
    // one representative per unlabelled class, in canonical order
    std::vector<const curves::ContributingCurve*> reps;
    std::set<std::string> seen;
    for (const auto& c : all)
        if (seen.insert(curves::unlabelled_key(c)).second) reps.push_back(&c);

    std::map<std::string, std::string> out;
    std::string sheet =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(reps.size() * 320) +
        "\" height=\"320\">\n";
    for (std::size_t i = 0; i < reps.size(); ++i) {
        std::string one;
        detail::render_one(one, fan, *reps[i], opt);
        std::string name = "curve_" + std::to_string(i) + "_" +
                           (reps[i]->classified.shape == curves::Shape::A ? "A" : "B") + ".svg";
        out[name] = one;
        // nest the same document into the sheet cell
        std::string cell = one;
        cell.insert(cell.find("<svg ") + 5, "x=\"" + std::to_string(i * 320) +
                                               "\" width=\"320\" height=\"320\" ");
        sheet += cell;
    }
    sheet += "</svg>\n";
    out["contact_sheet.svg"] = sheet;
    return out;
}

}  // namespace troptev::render
