#pragma once

#include <optional>

#include "geom/lie_frame.hpp"

namespace geom {

// Left-invariant torsion-free connection with A = Pi + c/2, A(e_i, e_j) = A_ij^k e_k = nabla_{e_i} e_j.
struct InvariantConnection {
    FrameAlgebra frame;
    DenseTensor pi;

    int dim() const { return frame.dim; }
    DenseTensor coeffs() const;
};

// Pi must be symmetric; asymmetry below 1e-12 (relative) is rounded away, larger is a ValidationError.
InvariantConnection make_connection(FrameAlgebra frame, DenseTensor pi);
// Recovers Pi from full coefficients; ValidationError when the torsion A_ij - A_ji - c_ij exceeds tol.
InvariantConnection from_coefficients(FrameAlgebra frame, const DenseTensor& A, double tol = 1e-12);
InvariantConnection flat_connection(FrameAlgebra frame);

// A(x, y) for vectors x, y.
Vec apply(const DenseTensor& A, const Vec& x, const Vec& y);

struct CurvatureData {
    DenseTensor R; // R_ijk^l
    Mat ric;       // R_ij = R_pij^p
    std::optional<Vec> rho;
};

// R_ijk^l = A_ip^l A_jk^p - A_jp^l A_ik^p - c_ij^p A_pk^l for any frame and coefficient tensor.
DenseTensor curvature_tensor(const DenseTensor& A, const DenseTensor& c);
Mat ricci_of(const DenseTensor& R);
double bianchi_defect(const DenseTensor& R);
// t^p R_pij^k
DenseTensor radial_curvature(const DenseTensor& R, const Vec& t);
// R_ijp^k t^p
DenseTensor curvature_on(const DenseTensor& R, const Vec& t);

CurvatureData curvature(const InvariantConnection& conn, const std::optional<Vec>& t = std::nullopt);
// Ricci from Pi, c, the trace form and the Killing form without forming R.
Mat ricci_closed_form(const InvariantConnection& conn);

struct RicciRho {
    Mat ric;
    Vec rho;
};
RicciRho ricci_rho(const InvariantConnection& conn, const Vec& t);

// max_i |A(e_i, t) - e_i|
double radiant_defect(const InvariantConnection& conn, const Vec& t);

struct ConelikeFit {
    Mat Q;
    double residual = 0;   // l-infinity residual of the least-squares fit
    double rho_defect = 0; // |n Q(t, .) - rho|
    double qtt = 0;        // |Q(t, t)|
};
ConelikeFit conelike_solve(const InvariantConnection& conn, const Vec& t, double radiant_tol = 1e-9);

InvariantConnection normalize_antisym_ricci(const InvariantConnection& conn, const Vec& t, double tol = 1e-9);

// Pass std::nullopt for k to use the Killing form.
InvariantConnection build_cone(const FrameAlgebra& f, const std::optional<Mat>& k, const Vec& t,
                               double invariance_tol = 1e-10);

InvariantConnection qacone_preset(double a1, double a2, double kappa);
Vec qacone_radiant(double kappa);

// Pi + Q t - 2 q_(i delta_j)^k with q = Q(t, .)
InvariantConnection apply_cone_shift(const InvariantConnection& conn, const Vec& t, const Mat& Q, double tol = 1e-12);

// Projective change Pi + 2 gamma_(i delta_j)^k
InvariantConnection projective_change(const InvariantConnection& conn, const Vec& gamma);

struct ProjectiveTensors {
    Mat P;         // Schouten
    DenseTensor B; // Weyl, B_ijk^l
    DenseTensor C; // Cotton, C_ijk
};
ProjectiveTensors projective_tensors(const InvariantConnection& conn);

// Covariant derivative of a constant-component tensor; the new lower index is prepended.
DenseTensor covariant_derivative(const DenseTensor& A, const DenseTensor& T);
DenseTensor covariant_derivative(const InvariantConnection& conn, const DenseTensor& T);
// (nabla S)_ijk = -A_ij^p S_pk - A_ik^p S_jp
DenseTensor covariant_derivative(const InvariantConnection& conn, const Mat& S);
// (nabla theta)_ij = -A_ij^p theta_p
Mat covariant_derivative(const InvariantConnection& conn, const Vec& theta);

} // namespace geom
