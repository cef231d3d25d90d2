#pragma once

#include "geom/connection.hpp"

// Hand-entered structures shared by the unit tests and the acceptance binary.
namespace fixture {

using geom::DenseTensor;
using geom::Mat;
using geom::Vec;

// Basis {t, r, s} with [t, r] = 2r, [t, s] = -2s, [r, s] = t.
inline geom::FrameAlgebra sl2_triple() {
    DenseTensor c = DenseTensor::rank3(3);
    auto br = [&](int i, int j, int k, double v) {
        c(i, j, k) = v;
        c(j, i, k) = -v;
    };
    br(0, 1, 1, 2);
    br(0, 2, 2, -2);
    br(1, 2, 0, 1);
    return geom::make_frame(c, "sl2");
}

// theta (x) theta with theta dual to the center Z = e_{2m+1}.
inline Mat heis_theta(int dim) {
    Mat k = Mat::Zero(dim, dim);
    k(dim - 1, dim - 1) = 1;
    return k;
}

// The aff(1,C) cone connection for t = -e1, entered from its explicit coordinate formula.
inline DenseTensor aff1c_cone_coefficients() {
    DenseTensor A = DenseTensor::rank3(4);
    A(0, 0, 0) = -1;
    A(1, 1, 0) = 0.25;
    A(0, 1, 1) = -1;
    A(1, 0, 1) = -1;
    A(2, 0, 2) = -1;
    A(1, 3, 2) = -0.5;
    A(3, 1, 2) = 0.5;
    A(3, 0, 3) = -1;
    A(1, 2, 3) = 0.5;
    A(2, 1, 3) = -0.5;
    return A;
}

// A + e^4 (x) delta + delta (x) e^4 - (e^4 (x) e^1 + e^1 (x) e^4) (x) e_1
inline DenseTensor aff1c_modified(const DenseTensor& A) {
    DenseTensor B = A;
    for (int i = 0; i < 4; ++i) {
        B(3, i, i) += 1;
        B(i, 3, i) += 1;
    }
    B(3, 0, 0) -= 1;
    B(0, 3, 0) -= 1;
    return B;
}

// Pi(a, b) = h(t, a) b + h(t, b) a - h(t, a) h(t, b) t on an abelian algebra, with h(t, t) = 1.
inline DenseTensor abelian_cone_pi(const Mat& h, const Vec& t) {
    const int n = static_cast<int>(t.size());
    const Vec ht = h * t;
    DenseTensor pi = DenseTensor::rank3(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int k = 0; k < n; ++k)
                pi(a, b, k) = ht(a) * (b == k) + ht(b) * (a == k) - ht(a) * ht(b) * t(k);
    return pi;
}

// Random symmetric Q with Q(t, .) = 0, as used for cone shifts that keep q = 0.
template <class Rand>
Mat horizontal_q(const Vec& t, Rand&& uniform) {
    const int n = static_cast<int>(t.size());
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = uniform();
    Mat proj = Mat::Identity(n, n) - t * t.transpose() / t.squaredNorm();
    return proj * (m + m.transpose()) * proj;
}

} // namespace fixture
