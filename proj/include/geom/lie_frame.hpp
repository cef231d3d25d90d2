#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geom/tensor.hpp"

namespace geom {

// Constant structure coefficients [e_i, e_j] = c_ij^k e_k of a frame.
struct FrameAlgebra {
    int dim = 0;
    DenseTensor c;
    std::string name;

    Vec bracket(const Vec& a, const Vec& b) const;
    // Matrix of ad(u) acting on column vectors: (ad u)^k_j = u^i c_ij^k.
    Mat ad(const Vec& u) const;
};

// Validates exact antisymmetry; Jacobi is checked separately since lifted frames may carry it approximately.
FrameAlgebra make_frame(DenseTensor c, std::string name = {});
FrameAlgebra abelian(int n);

// Names: "qa-im" (a1, a2), "heis" (dim = 2m+1), "aff1c", "abelian" (n), "unibasis" (eps, B_tt).
FrameAlgebra preset(const std::string& name, const std::vector<double>& params = {});

double jacobi_defect(const FrameAlgebra& f);
Mat killing_form(const FrameAlgebra& f);
Vec trace_form(const FrameAlgebra& f);

struct InvarianceDefect {
    double full = 0;
    double t = 0;
};
InvarianceDefect invariance_defect(const FrameAlgebra& f, const Mat& k, const std::optional<Vec>& t = std::nullopt);

// d(theta)_ij = -theta([e_i, e_j]) for constant components.
Mat frame_d_oneform(const FrameAlgebra& f, const Vec& theta);

// Exterior derivative of a constant two-form, as the cyclic sum (d w)_ijk = -(w([e_i,e_j],e_k) + cyclic).
DenseTensor frame_d_twoform(const FrameAlgebra& f, const Mat& w);

// Lie derivative of constant-component tensor S along the left-invariant field t.
DenseTensor lie_derivative_invariant(const FrameAlgebra& f, const Vec& t, const DenseTensor& S);
Mat lie_derivative_invariant(const FrameAlgebra& f, const Vec& t, const Mat& S);

// Generalized trigonometric functions with C^2 + kappa S^2 = 1.
double C_kappa(double kappa, double t);
double S_kappa(double kappa, double t);
// (1 - C_kappa(t)) / kappa with its kappa -> 0 limit t^2/2.
double one_minus_C_over_kappa(double kappa, double t);

// Id + 1/2 S_n(2r) ad(u) + 1/4 ((1 - C_n(2r))/n) ad(u)^2 with n(u) = -B(u,u)/8.
Mat exp_adjoint_3d(const FrameAlgebra& f, const Vec& u, double r);

} // namespace geom
