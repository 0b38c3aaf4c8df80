#include "matmax/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace matmax {

using nlohmann::json;

std::string format_float(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

nlohmann::json body_json(const SymBody& b)
{
    json data = json::array();
    for (const Vec& p : b.points()) {
        json row = json::array();
        for (int k = 0; k < p.dim(); ++k)
            row.push_back(p[k]);
        data.push_back(std::move(row));
    }
    return json{{"rep", b.rep() == BodyRep::polygon ? "polygon" : "zonotope"}, {"data", std::move(data)}};
}

SymBody body_from_json(const nlohmann::json& j, int d)
{
    if (!j.is_object() || !j.contains("rep") || !j.contains("data"))
        throw IoError("body: expected {rep, data}");
    const std::string rep = j.at("rep").get<std::string>();
    std::vector<Vec> pts;
    for (const auto& row : j.at("data")) {
        if (!row.is_array() || static_cast<int>(row.size()) != d)
            throw IoError("body: point arity does not match d");
        Vec v(d);
        for (int k = 0; k < d; ++k)
            v[k] = row.at(static_cast<std::size_t>(k)).get<double>();
        pts.push_back(v);
    }
    try {
        if (rep == "zonotope")
            return SymBody::zonotope(d, std::move(pts));
        if (rep == "polygon")
            return d == 2 ? SymBody::polygon(std::move(pts)) : SymBody::vertex_hull(d, std::move(pts));
    } catch (const std::invalid_argument& e) {
        throw IoError(std::string("body: ") + e.what());
    }
    throw IoError("body: rep must be 'polygon' or 'zonotope'");
}

nlohmann::json field_doc_json(const FieldDoc& doc)
{
    json out{{"levels1", doc.grid.levels1}, {"levels2", doc.grid.levels2}, {"d", doc.d}};
    const long n = doc.grid.cell_count();
    if (doc.weight) {
        json w = json::array();
        for (long c = 0; c < n; ++c) {
            const Matrix m = doc.weight->at(c);
            json flat = json::array();
            for (int i = 0; i < doc.d; ++i)
                for (int j = 0; j < doc.d; ++j)
                    flat.push_back(m(i, j));
            w.push_back(std::move(flat));
        }
        out["weight"] = std::move(w);
    }
    if (doc.f) {
        json f = json::array();
        for (long c = 0; c < n; ++c) {
            const Vec v = doc.f->at(c);
            json row = json::array();
            for (int k = 0; k < doc.d; ++k)
                row.push_back(v[k]);
            f.push_back(std::move(row));
        }
        out["f"] = std::move(f);
    }
    if (doc.bodies) {
        json bodies = json::array();
        for (long c = 0; c < n; ++c)
            bodies.push_back(body_json(doc.bodies->at(c)));
        out["F"] = std::move(bodies);
    }
    return out;
}

FieldDoc parse_field_doc(const nlohmann::json& j)
{
    if (!j.is_object())
        throw IoError("field doc: expected a JSON object");
    FieldDoc doc;
    try {
        doc.grid = make_grid(j.at("levels1").get<int>(), j.at("levels2").get<int>());
        doc.d = j.at("d").get<int>();
        if (doc.d < 1 || doc.d > kMaxDim)
            throw IoError("field doc: d out of range");
    } catch (const json::exception& e) {
        throw IoError(std::string("field doc: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw IoError(std::string("field doc: ") + e.what());
    }
    const long n = doc.grid.cell_count();
    const int d = doc.d;

    try {
        if (j.contains("weight")) {
            const auto& w = j.at("weight");
            if (!w.is_array() || static_cast<long>(w.size()) != n)
                throw IoError("field doc: weight must hold one matrix per cell");
            std::vector<Matrix> cells;
            cells.reserve(static_cast<std::size_t>(n));
            for (const auto& flat : w) {
                if (!flat.is_array() || static_cast<int>(flat.size()) != d * d)
                    throw IoError("field doc: weight matrix arity mismatch");
                Matrix m(d);
                for (int i = 0; i < d; ++i)
                    for (int k = 0; k < d; ++k)
                        m(i, k) = flat.at(static_cast<std::size_t>(i * d + k)).get<double>();
                cells.push_back(m);
            }
            try {
                doc.weight = WeightField(doc.grid, d, cells);
            } catch (const std::exception& e) {
                throw IoError(std::string("field doc: invalid weight: ") + e.what());
            }
        }
        if (j.contains("f")) {
            const auto& f = j.at("f");
            if (!f.is_array() || static_cast<long>(f.size()) != n)
                throw IoError("field doc: f must hold one vector per cell");
            VectorField vf(doc.grid, d);
            long c = 0;
            for (const auto& row : f) {
                if (!row.is_array() || static_cast<int>(row.size()) != d)
                    throw IoError("field doc: f vector arity mismatch");
                Vec v(d);
                for (int k = 0; k < d; ++k)
                    v[k] = row.at(static_cast<std::size_t>(k)).get<double>();
                if (!v.all_finite())
                    throw IoError("field doc: f holds a non-finite entry");
                vf.set(c++, v);
            }
            doc.f = std::move(vf);
        }
        if (j.contains("F")) {
            const auto& bodies = j.at("F");
            if (!bodies.is_array() || static_cast<long>(bodies.size()) != n)
                throw IoError("field doc: F must hold one body per cell");
            SetField sf(doc.grid, d);
            long c = 0;
            for (const auto& bj : bodies)
                sf.set(c++, body_from_json(bj, d));
            doc.bodies = std::move(sf);
        }
    } catch (const json::exception& e) {
        throw IoError(std::string("field doc: ") + e.what());
    }
    return doc;
}

FieldDoc read_field_doc(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError(path + ": " + e.what());
    }
    return parse_field_doc(j);
}

void write_field_doc(const std::string& path, const FieldDoc& doc)
{
    write_text_file(path, field_doc_json(doc).dump(2) + "\n");
}

nlohmann::json scalar_field_json(const ScalarField& s)
{
    json f = json::array();
    for (double x : s.values())
        f.push_back(json::array({x}));
    return json{{"levels1", s.grid().levels1}, {"levels2", s.grid().levels2}, {"d", 1}, {"f", std::move(f)}};
}

nlohmann::json set_field_json(const SetField& f)
{
    json bodies = json::array();
    for (long c = 0; c < f.grid().cell_count(); ++c)
        bodies.push_back(body_json(f.at(c)));
    return json{{"levels1", f.grid().levels1},
                {"levels2", f.grid().levels2},
                {"d", f.dim()},
                {"F", std::move(bodies)},
                {"approx", f.approx_flags()}};
}

std::string ap_report_csv(const ApReport& rep)
{
    std::ostringstream out;
    out << "p,family,constant,i0,i1,j0,j1\n";
    out << format_float(rep.p) << ',' << family_name(rep.family) << ','
        << (rep.infinite ? "inf" : format_float(rep.value)) << ',' << rep.argmax.i0 << ','
        << rep.argmax.i1 << ',' << rep.argmax.j0 << ',' << rep.argmax.j1 << '\n';
    return out.str();
}

nlohmann::json ap_report_json(const ApReport& rep)
{
    json j{{"p", rep.p},
           {"family", family_name(rep.family)},
           {"constant", rep.infinite ? json("inf") : json(rep.value)},
           {"argmax", {{"i0", rep.argmax.i0}, {"i1", rep.argmax.i1}, {"j0", rep.argmax.j0}, {"j1", rep.argmax.j1}}}};
    if (!rep.table.empty()) {
        json table = json::array();
        for (const auto& [r, v] : rep.table)
            table.push_back(json{{"i0", r.i0}, {"i1", r.i1}, {"j0", r.j0}, {"j1", r.j1}, {"value", v}});
        j["table"] = std::move(table);
    }
    return j;
}

nlohmann::json slice_report_json(const SliceApReport& rep)
{
    return json{{"p", rep.p},
                {"along_axis1", rep.along_axis1},
                {"along_axis2", rep.along_axis2},
                {"biparameter", rep.biparameter},
                {"max_slice", rep.max_slice},
                {"ratio", rep.ratio},
                {"any_infinite", rep.any_infinite}};
}

std::string slice_report_csv(const SliceApReport& rep)
{
    std::ostringstream out;
    out << "slice,index,constant\n";
    for (std::size_t k = 0; k < rep.along_axis1.size(); ++k)
        out << "along-axis1," << k << ',' << format_float(rep.along_axis1[k]) << '\n';
    for (std::size_t k = 0; k < rep.along_axis2.size(); ++k)
        out << "along-axis2," << k << ',' << format_float(rep.along_axis2[k]) << '\n';
    out << "biparameter,," << format_float(rep.biparameter) << '\n';
    out << "max-slice,," << format_float(rep.max_slice) << '\n';
    out << "ratio,," << format_float(rep.ratio) << '\n';
    return out.str();
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path);
    out << text;
    if (!out)
        throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace matmax
