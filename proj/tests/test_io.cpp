#include "matmax/io.hpp"

#include "matmax/harness.hpp"
#include "matmax/rng.hpp"

#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <string>

using namespace matmax;
using nlohmann::json;

TEST_CASE("field documents round-trip through JSON")
{
    Rng rng(81);
    const Grid g = make_grid(2, 1);
    FieldDoc doc;
    doc.grid = g;
    doc.d = 2;
    doc.weight = random_weight_field(g, 2, rng);
    doc.f = random_vector_field(g, 2, rng);
    doc.bodies = random_set_field(g, 2, rng);

    const json j = field_doc_json(doc);
    CHECK(j.at("levels1") == 2);
    CHECK(j.at("weight").size() == static_cast<std::size_t>(g.cell_count()));

    const FieldDoc back = parse_field_doc(j);
    REQUIRE(back.weight.has_value());
    REQUIRE(back.f.has_value());
    REQUIRE(back.bodies.has_value());
    for (long c = 0; c < g.cell_count(); ++c) {
        CHECK(op_norm(back.weight->at(c) - doc.weight->at(c)) == 0.0);
        CHECK((back.f->at(c) - doc.f->at(c)).norm() == 0.0);
        CHECK(body_equal(back.bodies->at(c), doc.bodies->at(c), 1e-12));
    }
}

TEST_CASE("body serialization preserves support functions")
{
    Rng rng(82);
    for (int t = 0; t < 60; ++t) {
        SymBody b;
        const int d = t % 2 == 0 ? 2 : 3;
        if (rng.coin()) {
            std::vector<Vec> gens;
            for (int k = 0; k < 1 + rng.uniform_int(4); ++k) {
                Vec v(d);
                for (int i = 0; i < d; ++i)
                    v[i] = rng.normal();
                gens.push_back(v);
            }
            b = SymBody::zonotope(d, gens);
        } else if (d == 2) {
            b = SymBody::polygon({Vec{rng.normal(), rng.normal()}, Vec{rng.normal(), rng.normal()}});
        } else {
            Vec v(3);
            v[0] = rng.normal();
            v[1] = rng.normal();
            v[2] = rng.normal();
            b = SymBody::segment(v);
        }
        const SymBody back = body_from_json(body_json(b), d);
        CHECK(back.rep() == b.rep());
        for (const Vec& u : sphere_directions(d)) {
            CHECK(std::abs(support(back, u) - support(b, u)) <= 1e-12);
            if (t > 40)
                break; // a few spot directions suffice for the later trials
        }
    }
}

TEST_CASE("schema violations raise IoError")
{
    CHECK_THROWS_AS(parse_field_doc(json::array()), IoError);
    CHECK_THROWS_AS(parse_field_doc(json{{"levels1", 1}}), IoError);
    CHECK_THROWS_AS(parse_field_doc(json{{"levels1", 1}, {"levels2", 0}, {"d", 99}}), IoError);

    json doc{{"levels1", 0}, {"levels2", 0}, {"d", 2}};
    doc["f"] = json::array({json::array({1.0})}); // wrong arity
    CHECK_THROWS_AS(parse_field_doc(doc), IoError);

    json wdoc{{"levels1", 0}, {"levels2", 0}, {"d", 1}};
    wdoc["weight"] = json::array({json::array({-1.0})}); // not positive definite
    CHECK_THROWS_AS(parse_field_doc(wdoc), IoError);

    json bdoc{{"levels1", 0}, {"levels2", 0}, {"d", 2}};
    bdoc["F"] = json::array({json{{"rep", "sphere"}, {"data", json::array()}}});
    CHECK_THROWS_AS(parse_field_doc(bdoc), IoError);

    CHECK_THROWS_AS(read_field_doc("/nonexistent/path.json"), IoError);
}

TEST_CASE("format_float prints 17 significant digits")
{
    CHECK(format_float(1.0 / 3.0) == "0.33333333333333331");
    CHECK(format_float(1.0) == "1");
    CHECK(format_float(0.1) == "0.10000000000000001");
}

TEST_CASE("report writers emit headers")
{
    const Grid g = make_grid(1, 1);
    Rng rng(83);
    const WeightField w = random_weight_field(g, 2, rng);
    const ApReport rep = ap_constant(w, 2.0, RegionFamilyKind::dyadic_rectangles);
    const std::string csv = ap_report_csv(rep);
    CHECK(csv.rfind("p,family,constant,i0,i1,j0,j1\n", 0) == 0);
    CHECK(ap_report_json(rep).contains("argmax"));

    const SliceApReport slice = slice_ap_report(w, 2.0);
    CHECK(slice_report_csv(slice).find("biparameter") != std::string::npos);
    CHECK(slice_report_json(slice).contains("ratio"));

    // Scalar fields serialize in the d = 1 field format.
    ScalarField s(g, 0.5);
    const json sj = scalar_field_json(s);
    CHECK(sj.at("d") == 1);
    CHECK(sj.at("f").size() == 4);
    const FieldDoc parsed = parse_field_doc(sj);
    REQUIRE(parsed.f.has_value());
    CHECK(parsed.f->at(0L)[0] == 0.5);

    // Set fields carry the approximation flag array.
    SetField bodies(g, 2);
    const json bj = set_field_json(bodies);
    CHECK(bj.at("approx").size() == 4);
}
