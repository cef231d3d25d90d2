#pragma once

#include <Eigen/Dense>

#include "geom/lie_frame.hpp"

namespace geom {

// The algebra with e1^2 = a1, e2^2 = a2, e1 e2 = -e2 e1 = e3.
struct CliffordParams {
    double a1 = -1;
    double a2 = -1;
    bool operator==(const CliffordParams&) const = default;
};

struct CliffordElement {
    CliffordParams params;
    Eigen::Vector4d q = Eigen::Vector4d::Zero(); // coordinates in {1, e1, e2, e3}

    static CliffordElement unit(CliffordParams p, int k) {
        CliffordElement e{p};
        e.q(k) = 1;
        return e;
    }
    bool is_imaginary(double tol = 0) const { return std::abs(q(0)) <= tol; }
};

Eigen::Matrix4d left_matrix(const CliffordElement& q);
Eigen::Matrix4d right_matrix(const CliffordElement& q);

CliffordElement multiply(const CliffordElement& p, const CliffordElement& q);
CliffordElement conjugate(const CliffordElement& q);
double trace(const CliffordElement& q);
double norm(const CliffordElement& q);

// e^{tw} = C_{n(w)}(t) + S_{n(w)}(t) w for imaginary w.
CliffordElement euler_exp(const CliffordElement& w, double t);

// n(q)^{-1} L(q) R(conj q) restricted to the imaginary part.
Eigen::Matrix3d adjoint_on_im(const CliffordElement& q);
Eigen::Matrix3d rodrigues(const CliffordElement& w, double t);

FrameAlgebra im_frame_algebra(CliffordParams p);

// Diagonal quadratic form -a2 E1E1 - a1 E2E2 + E3E3 on covectors.
Eigen::Matrix3d contact_form_matrix(CliffordParams p);
// Coefficient of e^1 ^ e^2 ^ e^3 in theta ^ d theta.
double contact_value(CliffordParams p, const Eigen::Vector3d& theta);

} // namespace geom
