#pragma once

#include "matmax/convexgeom.hpp"
#include "matmax/grid.hpp"
#include "matmax/weights.hpp"

#include "json.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace matmax {

/// File and schema problems; the CLI maps these to exit code 3.
class IoError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One grid-aligned data bundle: weight and/or vector field and/or set field.
struct FieldDoc {
    Grid grid;
    int d = 2;
    std::optional<WeightField> weight;
    std::optional<VectorField> f;
    std::optional<SetField> bodies;
};

nlohmann::json body_json(const SymBody& b);
SymBody body_from_json(const nlohmann::json& j, int d);

nlohmann::json field_doc_json(const FieldDoc& doc);
FieldDoc parse_field_doc(const nlohmann::json& j);

FieldDoc read_field_doc(const std::string& path);
void write_field_doc(const std::string& path, const FieldDoc& doc);

/// Scalar fields reuse the field schema with d = 1.
nlohmann::json scalar_field_json(const ScalarField& s);

/// Set-field output document: bodies plus the per-cell approximation flags.
nlohmann::json set_field_json(const SetField& f);

/// Shortest 17-significant-digit decimal form used by every CSV writer.
std::string format_float(double x);

std::string ap_report_csv(const ApReport& rep);
nlohmann::json ap_report_json(const ApReport& rep);

nlohmann::json slice_report_json(const SliceApReport& rep);
std::string slice_report_csv(const SliceApReport& rep);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

} // namespace matmax
