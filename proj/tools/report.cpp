#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace geomtool {

using geom::Error;
using geom::ErrorKind;
using nlohmann::json;

namespace {

std::string idx(int i) { return "[" + std::to_string(i + 1) + "]"; }

bool gated(const std::string& key) {
    auto ends = [&](const std::string& s) {
        return key.size() >= s.size() && key.compare(key.size() - s.size(), s.size(), s) == 0;
    };
    return ends("_defect") || ends("_residual");
}

std::string value_text(const std::variant<double, std::string>& v) {
    if (auto d = std::get_if<double>(&v)) return format_number(*d);
    return std::get<std::string>(v);
}

std::string value_json(const std::variant<double, std::string>& v) {
    if (auto d = std::get_if<double>(&v)) return std::isfinite(*d) ? format_number(*d) : "null";
    return json(std::get<std::string>(v)).dump();
}

void parse_error(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

} // namespace

void Record::set(const std::string& key, const Vec& v) {
    for (int i = 0; i < v.size(); ++i) set(key + idx(i), v(i));
}

void Record::set(const std::string& key, const Mat& m) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) set(key + idx(i) + idx(j), m(i, j));
}

void Record::set(const std::string& key, const DenseTensor& t) {
    for (std::size_t p = 0; p < t.size(); ++p) {
        std::string k = key;
        for (int i : t.unravel(p)) k += idx(i);
        set(k, t.data()[p]);
    }
}

std::vector<std::string> Record::exceeded(double tol) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values) {
        if (!gated(k)) continue;
        auto d = std::get_if<double>(&v);
        if (d && !(std::abs(*d) <= tol)) out.push_back(k);
    }
    return out;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0) v = 0; // drop the sign of negative zero
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string emit_report(const Record& r, OutputMode mode) {
    std::ostringstream os;
    if (mode == OutputMode::json) {
        if (r.values.empty()) return "{}\n";
        os << "{\n";
        std::size_t i = 0;
        for (const auto& [k, v] : r.values)
            os << "  " << json(k).dump() << ": " << value_json(v) << (++i < r.values.size() ? ",\n" : "\n");
        os << "}\n";
        return os.str();
    }
    if (r.values.empty()) return "";
    if (mode == OutputMode::csv) {
        os << "key,value\n";
        for (const auto& [k, v] : r.values) os << k << "," << value_text(v) << "\n";
        return os.str();
    }
    std::size_t w = 0;
    for (const auto& kv : r.values) w = std::max(w, kv.first.size());
    for (const auto& [k, v] : r.values) os << k << std::string(w - k.size(), ' ') << " = " << value_text(v) << "\n";
    return os.str();
}

std::string emit_table(const Table& t) {
    std::ostringstream os;
    for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
        os << "\n";
    }
    return os.str();
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) parse_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        parse_error(path + ": " + e.what());
    }
    return {};
}

namespace {

void fill(const json& j, int depth, int dim, std::vector<double>& out, const std::string& what) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        throw Error(ErrorKind::ValidationError, what + ": expected an array of length " + std::to_string(dim));
    for (const auto& e : j) {
        if (depth == 1) {
            if (!e.is_number()) throw Error(ErrorKind::ValidationError, what + ": non-numeric entry");
            out.push_back(e.get<double>());
        } else {
            fill(e, depth - 1, dim, out, what);
        }
    }
}

} // namespace

DenseTensor tensor_from_json(const json& j, int rank, const std::string& what) {
    if (!j.is_array() || j.empty()) throw Error(ErrorKind::ValidationError, what + ": expected a nested array");
    const int n = static_cast<int>(j.size());
    std::vector<geom::Variance> var(rank, geom::Variance::lower);
    if (rank == 3) var[2] = geom::Variance::upper;
    DenseTensor t(n, var);
    std::vector<double> flat;
    fill(j, rank, n, flat, what);
    t.data() = flat;
    return t;
}

Mat matrix_from_json(const json& j, const std::string& what) { return tensor_from_json(j, 2, what).to_matrix(); }

geom::FrameAlgebra frame_from_json(const json& j) {
    if (j.is_string() || (j.is_object() && j.contains("preset"))) {
        std::string name = j.is_string() ? j.get<std::string>() : j.at("preset").get<std::string>();
        std::vector<double> params;
        if (j.is_object() && j.contains("params")) params = j.at("params").get<std::vector<double>>();
        return geom::preset(name, params);
    }
    if (!j.is_object() || !j.contains("c")) throw Error(ErrorKind::ValidationError, "frame needs \"c\" or a preset name");
    DenseTensor c = tensor_from_json(j.at("c"), 3, "c");
    if (j.contains("dim") && j.at("dim").get<int>() != c.dim())
        throw Error(ErrorKind::ValidationError, "dim does not match the shape of c");
    for (int a = 0; a < c.dim(); ++a)
        for (int b = 0; b < c.dim(); ++b)
            for (int k = 0; k < c.dim(); ++k)
                if (c(a, b, k) != -c(b, a, k))
                    throw Error(ErrorKind::ValidationError, "c not antisymmetric at (" + std::to_string(a + 1) + "," +
                                                                std::to_string(b + 1) + "," + std::to_string(k + 1) +
                                                                ")");
    auto f = geom::make_frame(std::move(c), j.value("name", std::string{}));
    const double jac = geom::jacobi_defect(f);
    if (jac > 1e-10) throw Error(ErrorKind::ValidationError, "Jacobi defect " + format_number(jac));
    return f;
}

geom::InvariantConnection connection_from_json(const json& j) {
    if (!j.is_object() || !j.contains("frame") || !j.contains("pi"))
        throw Error(ErrorKind::ValidationError, "connection needs \"frame\" and \"pi\"");
    auto f = frame_from_json(j.at("frame"));
    DenseTensor pi = tensor_from_json(j.at("pi"), 3, "pi");
    if (pi.dim() != f.dim) throw Error(ErrorKind::ValidationError, "pi and frame dimensions differ");
    for (int a = 0; a < f.dim; ++a)
        for (int b = 0; b < f.dim; ++b)
            for (int k = 0; k < f.dim; ++k)
                if (std::abs(pi(a, b, k) - pi(b, a, k)) > 1e-12 * std::max(1.0, pi.max_abs()))
                    throw Error(ErrorKind::ValidationError, "pi not symmetric at (" + std::to_string(a + 1) + "," +
                                                                std::to_string(b + 1) + "," + std::to_string(k + 1) +
                                                                ")");
    return geom::make_connection(std::move(f), std::move(pi));
}

geom::BaseData base_from_json(const json& j) {
    auto conn = connection_from_json(j);
    if (!j.contains("omega")) throw Error(ErrorKind::ValidationError, "base needs \"omega\"");
    Mat omega = matrix_from_json(j.at("omega"), "omega");
    if (omega.rows() != conn.dim()) throw Error(ErrorKind::ValidationError, "omega and frame dimensions differ");
    const double skew_def = (omega + omega.transpose()).cwiseAbs().maxCoeff();
    if (skew_def > 1e-12) throw Error(ErrorKind::ValidationError, "omega not antisymmetric, defect " + format_number(skew_def));
    auto base = geom::make_base(conn.frame, conn.pi, omega);
    const double closed = geom::omega_closedness_defect(base);
    if (closed > 1e-10) throw Error(ErrorKind::ValidationError, "omega not closed, defect " + format_number(closed));
    return base;
}

Mat metric_from_json(const json& j) {
    if (!j.is_object() || !j.contains("h")) throw Error(ErrorKind::ValidationError, "metric needs \"h\"");
    Mat h = matrix_from_json(j.at("h"), "h");
    const double asym = (h - h.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12) throw Error(ErrorKind::ValidationError, "h not symmetric, defect " + format_number(asym));
    geom::sym2_inverse(h);
    return h;
}

} // namespace geomtool
