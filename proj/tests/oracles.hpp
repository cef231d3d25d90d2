#pragma once

#include <random>

#include <Eigen/Dense>

#include "geom/connection.hpp"

// Independent reference computations used by the tests; none call into the library's own formulas.
namespace oracle {

using geom::DenseTensor;
using geom::Mat;
using geom::Vec;

inline std::mt19937& rng() {
    static std::mt19937 g(20240611);
    return g;
}

inline double uniform(double a = -1, double b = 1) { return std::uniform_real_distribution<double>(a, b)(rng()); }

inline Vec random_vec(int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = uniform();
    return v;
}

inline Mat random_mat(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = uniform();
    return m;
}

// Symmetric positive definite with condition number bounded by about 5.
inline Mat random_spd(int n) {
    Mat a = random_mat(n);
    return a * a.transpose() / n + Mat::Identity(n, n);
}

inline DenseTensor random_sym_pi(int n, double scale = 0.5) {
    DenseTensor pi = DenseTensor::rank3(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double v = scale * uniform();
                pi(i, j, k) = v;
                pi(j, i, k) = v;
            }
    return pi;
}

// exp(M) by a truncated power series.
inline Mat expm_series(const Mat& m, int terms = 40) {
    Mat out = Mat::Identity(m.rows(), m.cols()), term = out;
    for (int k = 1; k < terms; ++k) {
        term = term * m / k;
        out += term;
    }
    return out;
}

// Bracket matrices: column j of ad(e_i) is [e_i, e_j].
inline Mat ad_matrix(const DenseTensor& c, int i) {
    const int n = c.dim();
    Mat a(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) a(k, j) = c(i, j, k);
    return a;
}

// Killing form as trace(ad e_i ad e_j).
inline Mat killing_by_trace(const DenseTensor& c) {
    const int n = c.dim();
    Mat b(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b(i, j) = (ad_matrix(c, i) * ad_matrix(c, j)).trace();
    return b;
}

// Curvature of a left-invariant connection as an operator commutator:
// R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z, returned as R_ijk^l with
// nabla_{e_i} e_j = A_ij^k and R(e_i,e_j)e_k = R_ijk^l e_l.
inline DenseTensor curvature_by_operators(const DenseTensor& A, const DenseTensor& c) {
    const int n = A.dim();
    std::vector<Mat> L(n);
    for (int i = 0; i < n; ++i) {
        L[i] = Mat(n, n);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) L[i](k, j) = A(i, j, k);
    }
    DenseTensor R = DenseTensor::rank4(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Mat Lc = Mat::Zero(n, n);
            for (int p = 0; p < n; ++p) Lc += c(i, j, p) * L[p];
            Mat op = L[i] * L[j] - L[j] * L[i] - Lc;
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) R(i, j, k, l) = op(l, k);
        }
    return R;
}

// Ricci R_jk = R_pjk^p... in the operator convention above, Ric(Y,Z) = tr(X -> R(X,Y)Z).
inline Mat ricci_by_trace(const DenseTensor& R) {
    const int n = R.dim();
    Mat ric = Mat::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int p = 0; p < n; ++p) ric(j, k) += R(p, j, k, p);
    return ric;
}

} // namespace oracle
