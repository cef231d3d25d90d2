#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "geom/cone_lift.hpp"
#include "geom/metric_compat.hpp"

namespace geomtool {

using geom::DenseTensor;
using geom::Mat;
using geom::Vec;

enum class OutputMode { text, json, csv };

// Flat key -> value document; keys are kept sorted, indices in keys are 1-based.
struct Record {
    std::map<std::string, std::variant<double, std::string>> values;

    void set(const std::string& key, double v) { values[key] = v; }
    void set(const std::string& key, const std::string& v) { values[key] = v; }
    void set(const std::string& key, const Vec& v);
    void set(const std::string& key, const Mat& m);
    void set(const std::string& key, const DenseTensor& t);
    // Keys that gate the exit code: names ending in "_defect" or "_residual".
    std::vector<std::string> exceeded(double tol) const;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

// 17 significant digits; non-finite values print as nan/inf (null in JSON).
std::string format_number(double v);
std::string emit_report(const Record& r, OutputMode mode);
std::string emit_table(const Table& t);

// Input documents. All throw geom::Error with ParseError or ValidationError.
nlohmann::json load_json(const std::string& path);
DenseTensor tensor_from_json(const nlohmann::json& j, int rank, const std::string& what);
Mat matrix_from_json(const nlohmann::json& j, const std::string& what);
geom::FrameAlgebra frame_from_json(const nlohmann::json& j);
geom::InvariantConnection connection_from_json(const nlohmann::json& j);
geom::BaseData base_from_json(const nlohmann::json& j);
Mat metric_from_json(const nlohmann::json& j);

} // namespace geomtool
