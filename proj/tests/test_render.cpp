#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "troptev/enumeration.hpp"
#include "troptev/render.hpp"

using namespace troptev;

namespace {

ContactData fixture(const std::string& name) {
    std::ifstream in(std::string(TROPTEV_DATA_DIR) + "/" + name);
    REQUIRE(in.good());
    return validate(raw_from_json(json::parse(in)));
}

}  // namespace

TEST_CASE("svg output for the two bundled instances") {
    auto g = fixture("example2.json");
    auto rep = enumeration::total(g, enumeration::structured_point_config(g, 0));
    auto files = render::render_svg(g.fan, rep.curves);
    // 2 unlabelled curves, one of each type, plus the sheet
    REQUIRE(files.size() == 3);
    CHECK(files.count("curve_0_A.svg") + files.count("curve_0_B.svg") == 1);
    CHECK(files.count("contact_sheet.svg") == 1);
    bool saw_a = false, saw_b = false;
    for (const auto& [name, text] : files) {
        saw_a |= name.find("_A.svg") != std::string::npos;
        saw_b |= name.find("_B.svg") != std::string::npos;
        CHECK(text.find("<svg") != std::string::npos);
    }
    CHECK(saw_a);
    CHECK(saw_b);

    auto c = fixture("example1_corrected.json");
    auto repc = enumeration::total(c, enumeration::structured_point_config(c, 0));
    auto filesc = render::render_svg(c.fan, repc.curves);
    REQUIRE(filesc.size() == 5);  // 4 type-A curves + sheet
    for (const auto& [name, text] : filesc) CHECK(name.find("_B") == std::string::npos);
}

TEST_CASE("svg is deterministic and carries the expected elements") {
    auto g = fixture("example2.json");
    auto rep = enumeration::total(g, enumeration::structured_point_config(g, 0));
    auto f1 = render::render_svg(g.fan, rep.curves);
    auto f2 = render::render_svg(g.fan, rep.curves);
    CHECK(f1 == f2);  // byte identical

    std::string one_name;
    for (const auto& [name, text] : f1)
        if (name.rfind("curve_", 0) == 0) one_name = name;
    const auto& any = f1.at(one_name);
    // four dashed fan rays and four red markers
    std::size_t dashes = 0, markers = 0, pos = 0;
    while ((pos = any.find("stroke-dasharray", pos)) != std::string::npos) ++dashes, ++pos;
    pos = 0;
    while ((pos = any.find("<circle", pos)) != std::string::npos) ++markers, ++pos;
    CHECK(dashes == 4);
    CHECK(markers == 4);

    // the weight-4 end is labelled even without label_all
    CHECK(any.find(">4</text>") != std::string::npos);

    render::RenderOptions opt;
    opt.label_all = true;
    auto f3 = render::render_svg(g.fan, rep.curves, opt);
    CHECK(f3.at(one_name).find(">1</text>") != std::string::npos);
}

TEST_CASE("empty scenes are rejected") {
    auto g = fixture("example2.json");
    CHECK_THROWS_AS(render::render_svg(g.fan, {}), render::empty_scene_error);
}
