#include "geom/tensor.hpp"

#include <cmath>
#include <string>

namespace geom {

const char* kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::SingularMetric: return "SingularMetric";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::UnknownPreset: return "UnknownPreset";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::ParamMismatch: return "ParamMismatch";
    case ErrorKind::NotImaginary: return "NotImaginary";
    case ErrorKind::NullNorm: return "NullNorm";
    case ErrorKind::NotRadiant: return "NotRadiant";
    case ErrorKind::NotConelike: return "NotConelike";
    case ErrorKind::NotInvariant: return "NotInvariant";
    case ErrorKind::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorKind::RhoNonzero: return "RhoNonzero";
    case ErrorKind::NullDirection: return "NullDirection";
    case ErrorKind::ConstraintViolated: return "ConstraintViolated";
    case ErrorKind::NotAH: return "NotAH";
    case ErrorKind::NotStatistical: return "NotStatistical";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::IncompatibleQ: return "IncompatibleQ";
    case ErrorKind::DegenerateT: return "DegenerateT";
    case ErrorKind::ForbiddenDegree: return "ForbiddenDegree";
    case ErrorKind::NotThomas: return "NotThomas";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::MissingField: return "MissingField";
    case ErrorKind::VanishingDivergence: return "VanishingDivergence";
    case ErrorKind::CriticalPoint: return "CriticalPoint";
    case ErrorKind::NotAGeodesicPath: return "NotAGeodesicPath";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    }
    return "Error";
}

DenseTensor::DenseTensor(int dim, std::vector<Variance> variance) : dim_(dim), var_(std::move(variance)) {
    if (dim <= 0) throw Error(ErrorKind::ShapeMismatch, "tensor dimension must be positive");
    std::size_t n = 1;
    for (std::size_t r = 0; r < var_.size(); ++r) n *= static_cast<std::size_t>(dim);
    data_.assign(n, 0.0);
}

DenseTensor DenseTensor::from_matrix(const Mat& m, Variance a, Variance b) {
    if (m.rows() != m.cols()) throw Error(ErrorKind::ShapeMismatch, "matrix must be square");
    DenseTensor t(static_cast<int>(m.rows()), {a, b});
    for (int i = 0; i < t.dim_; ++i)
        for (int j = 0; j < t.dim_; ++j) t(i, j) = m(i, j);
    return t;
}

DenseTensor DenseTensor::from_vector(const Vec& v, Variance a) {
    DenseTensor t(static_cast<int>(v.size()), {a});
    for (int i = 0; i < t.dim_; ++i) t(i) = v(i);
    return t;
}

std::size_t DenseTensor::offset_of(const std::vector<int>& idx) const {
    if (idx.size() != var_.size()) throw Error(ErrorKind::ShapeMismatch, "index count differs from rank");
    std::size_t off = 0;
    for (int i : idx) off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
    return off;
}

std::vector<int> DenseTensor::unravel(std::size_t p) const {
    std::vector<int> idx(var_.size());
    for (int r = rank() - 1; r >= 0; --r) {
        idx[r] = static_cast<int>(p % static_cast<std::size_t>(dim_));
        p /= static_cast<std::size_t>(dim_);
    }
    return idx;
}

Mat DenseTensor::to_matrix() const {
    if (rank() != 2) throw Error(ErrorKind::ShapeMismatch, "to_matrix needs rank 2");
    Mat m(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
    return m;
}

Vec DenseTensor::to_vector() const {
    if (rank() != 1) throw Error(ErrorKind::ShapeMismatch, "to_vector needs rank 1");
    return Eigen::Map<const Vec>(data_.data(), dim_);
}

bool DenseTensor::all_finite() const {
    for (double x : data_)
        if (!std::isfinite(x)) return false;
    return true;
}

double DenseTensor::max_abs() const {
    double m = 0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
}

static void require_same(const DenseTensor& a, const DenseTensor& b) {
    if (a.dim() != b.dim() || a.rank() != b.rank())
        throw Error(ErrorKind::ShapeMismatch, "tensor shapes differ");
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& o) {
    require_same(*this, o);
    for (std::size_t p = 0; p < data_.size(); ++p) data_[p] += o.data_[p];
    return *this;
}

DenseTensor& DenseTensor::operator-=(const DenseTensor& o) {
    require_same(*this, o);
    for (std::size_t p = 0; p < data_.size(); ++p) data_[p] -= o.data_[p];
    return *this;
}

DenseTensor& DenseTensor::operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
}

DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }
DenseTensor operator*(double s, DenseTensor a) { return a *= s; }

DenseTensor contract(const DenseTensor& t, int up_pos, int down_pos) {
    const int r = t.rank();
    if (up_pos < 0 || down_pos < 0 || up_pos >= r || down_pos >= r || up_pos == down_pos)
        throw Error(ErrorKind::ShapeMismatch, "invalid contraction positions");
    if (t.variance()[up_pos] != Variance::upper || t.variance()[down_pos] != Variance::lower)
        throw Error(ErrorKind::ShapeMismatch, "contraction needs an (upper, lower) pair");
    std::vector<Variance> var;
    for (int k = 0; k < r; ++k)
        if (k != up_pos && k != down_pos) var.push_back(t.variance()[k]);
    DenseTensor out(t.dim(), var);
    for (std::size_t p = 0; p < t.size(); ++p) {
        auto idx = t.unravel(p);
        if (idx[up_pos] != idx[down_pos]) continue;
        std::vector<int> rest;
        for (int k = 0; k < r; ++k)
            if (k != up_pos && k != down_pos) rest.push_back(idx[k]);
        if (rest.empty())
            out.data()[0] += t.data()[p];
        else
            out.at(rest) += t.data()[p];
    }
    return out;
}

static DenseTensor pair_average(const DenseTensor& t, int a, int b, double sign) {
    if (a < 0 || b < 0 || a >= t.rank() || b >= t.rank() || a == b)
        throw Error(ErrorKind::ShapeMismatch, "invalid index pair");
    if (t.variance()[a] != t.variance()[b])
        throw Error(ErrorKind::ShapeMismatch, "index pair has mixed variance");
    DenseTensor out = DenseTensor::zeros_like(t);
    for (std::size_t p = 0; p < t.size(); ++p) {
        auto idx = t.unravel(p);
        std::swap(idx[a], idx[b]);
        out.data()[p] = 0.5 * (t.data()[p] + sign * t.at(idx));
    }
    return out;
}

DenseTensor symmetrize2(const DenseTensor& t, int a, int b) { return pair_average(t, a, b, 1.0); }
DenseTensor alternate2(const DenseTensor& t, int a, int b) { return pair_average(t, a, b, -1.0); }

double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
    require_same(a, b);
    double m = 0;
    for (std::size_t p = 0; p < a.size(); ++p) m = std::max(m, std::abs(a.data()[p] - b.data()[p]));
    return m;
}

double max_abs_diff(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorKind::ShapeMismatch, "matrix shapes differ");
    return a.size() ? (a - b).cwiseAbs().maxCoeff() : 0.0;
}

double max_abs_diff(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw Error(ErrorKind::ShapeMismatch, "vector lengths differ");
    return a.size() ? (a - b).cwiseAbs().maxCoeff() : 0.0;
}

Mat sym2_inverse(const Mat& h) {
    if (h.rows() != h.cols()) throw Error(ErrorKind::ShapeMismatch, "metric must be square");
    const int n = static_cast<int>(h.rows());
    const double scale = h.cwiseAbs().maxCoeff();
    if (scale == 0.0) throw Error(ErrorKind::SingularMetric, "zero metric");
    if (max_abs_diff(h, h.transpose()) > 1e-10 * scale)
        throw Error(ErrorKind::ShapeMismatch, "metric is not symmetric");
    Eigen::FullPivLU<Mat> lu(h);
    const double det = lu.determinant();
    if (std::abs(det) <= 1e-12 * std::pow(scale, n))
        throw Error(ErrorKind::SingularMetric, "determinant " + std::to_string(det) + " below threshold");
    Mat g = lu.inverse();
    return sym(g);
}

DenseTensor change_basis(const DenseTensor& t, const Mat& b) {
    const int n = t.dim();
    if (b.rows() != n || b.cols() != n) throw Error(ErrorKind::ShapeMismatch, "basis matrix size");
    Eigen::FullPivLU<Mat> lu(b);
    if (!lu.isInvertible()) throw Error(ErrorKind::SingularMetric, "basis matrix is singular");
    const Mat binv = lu.inverse();
    DenseTensor out = t;
    // one index at a time
    for (int slot = 0; slot < t.rank(); ++slot) {
        DenseTensor next = DenseTensor::zeros_like(out);
        const bool upper = t.variance()[slot] == Variance::upper;
        for (std::size_t p = 0; p < next.size(); ++p) {
            std::vector<int> idx = next.unravel(p);
            const int a = idx[slot];
            double s = 0;
            for (int i = 0; i < n; ++i) {
                idx[slot] = i;
                s += (upper ? binv(a, i) : b(i, a)) * out.at(idx);
            }
            next.data()[p] = s;
        }
        out = std::move(next);
    }
    return out;
}

} // namespace geom
