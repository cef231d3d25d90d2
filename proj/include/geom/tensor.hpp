#pragma once

#include <Eigen/Dense>
#include <initializer_list>
#include <vector>

#include "geom/error.hpp"

namespace geom {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class Variance : unsigned char { lower, upper };

// Dense tensor over an n-dimensional frame; every index has length n.
// Storage is row-major, so T(i, j, k) is T_ij^k for a (lower, lower, upper) tensor.
class DenseTensor {
public:
    DenseTensor() = default;
    DenseTensor(int dim, std::vector<Variance> variance);

    static DenseTensor zeros_like(const DenseTensor& t) { return DenseTensor(t.dim_, t.var_); }
    // (lower, lower, upper), the shape of connection and structure coefficients
    static DenseTensor rank3(int dim) { return DenseTensor(dim, {Variance::lower, Variance::lower, Variance::upper}); }
    // (lower, lower, lower, upper), the shape of curvature
    static DenseTensor rank4(int dim) {
        return DenseTensor(dim, {Variance::lower, Variance::lower, Variance::lower, Variance::upper});
    }
    static DenseTensor from_matrix(const Mat& m, Variance a = Variance::lower, Variance b = Variance::lower);
    static DenseTensor from_vector(const Vec& v, Variance a);

    int dim() const { return dim_; }
    int rank() const { return static_cast<int>(var_.size()); }
    std::vector<int> shape() const { return std::vector<int>(var_.size(), dim_); }
    const std::vector<Variance>& variance() const { return var_; }
    std::size_t size() const { return data_.size(); }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    template <class... I>
    double& operator()(I... idx) { return data_[offset(idx...)]; }
    template <class... I>
    double operator()(I... idx) const { return data_[offset(idx...)]; }

    double& at(const std::vector<int>& idx) { return data_[offset_of(idx)]; }
    double at(const std::vector<int>& idx) const { return data_[offset_of(idx)]; }

    // Multi-index of the flat position p.
    std::vector<int> unravel(std::size_t p) const;

    Mat to_matrix() const;
    Vec to_vector() const;

    bool all_finite() const;
    double max_abs() const;

    DenseTensor& operator+=(const DenseTensor& o);
    DenseTensor& operator-=(const DenseTensor& o);
    DenseTensor& operator*=(double s);

private:
    template <class... I>
    std::size_t offset(I... idx) const {
        std::size_t off = 0;
        ((off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(idx)), ...);
        return off;
    }
    std::size_t offset_of(const std::vector<int>& idx) const;

    int dim_ = 0;
    std::vector<Variance> var_;
    std::vector<double> data_;
};

DenseTensor operator+(DenseTensor a, const DenseTensor& b);
DenseTensor operator-(DenseTensor a, const DenseTensor& b);
DenseTensor operator*(double s, DenseTensor a);

// Trace over an (upper, lower) index pair.
DenseTensor contract(const DenseTensor& t, int up_pos, int down_pos);

DenseTensor symmetrize2(const DenseTensor& t, int a, int b);
DenseTensor alternate2(const DenseTensor& t, int a, int b);

double max_abs_diff(const DenseTensor& a, const DenseTensor& b);
double max_abs_diff(const Mat& a, const Mat& b);
double max_abs_diff(const Vec& a, const Vec& b);

// Inverse of a symmetric bilinear form; SingularMetric when |det| < 1e-12 * max|entry|^n.
Mat sym2_inverse(const Mat& h);

// Components in the basis whose vectors are the columns of b (given in old components).
DenseTensor change_basis(const DenseTensor& t, const Mat& b);

inline Mat sym(const Mat& m) { return 0.5 * (m + m.transpose()); }
inline Mat skew(const Mat& m) { return 0.5 * (m - m.transpose()); }

} // namespace geom
