#pragma once

#include <optional>
#include <vector>

#include "geom/metric_compat.hpp"

namespace geom {

// Base frame, symmetric connection part Pi and the curvature omega of the principal connection.
struct BaseData {
    FrameAlgebra frame;
    DenseTensor pi_base;
    Mat omega;

    int dim() const { return frame.dim; }
};
BaseData make_base(FrameAlgebra frame, DenseTensor pi_base, Mat omega);

// (n+1)-dimensional lift; the vertical direction is the last basis vector.
struct LiftedData {
    FrameAlgebra frame;
    InvariantConnection conn;
    Vec beta;
    Vec t_vec;
    Mat basis; // columns are the lifted basis vectors in the components of the source frame

    int base_dim() const { return frame.dim - 1; }
};

double omega_closedness_defect(const BaseData& base);
FrameAlgebra lift_frame(const BaseData& base);
Mat eta_two_form(const BaseData& base);

LiftedData cone_connection(const BaseData& base);
LiftedData cone_connection_general(const BaseData& base, const Mat& Q);
// Normalized vertical part P_(ij) - omega/2 of the base
Mat normalized_q(const BaseData& base);

LiftedData designate_vertical(const InvariantConnection& conn, const Vec& t, double tol = 1e-9);

struct ExtractedBase {
    BaseData base;
    Mat Q;
};
ExtractedBase extract_base(const LiftedData& L);

// G = nabla_(I beta_J) + (2 + t) beta_I beta_J
FrameMetric lifted_metric(const LiftedData& L, double t_param);
// Metric components in the source frame of L
Mat to_source_frame(const LiftedData& L, const Mat& g);

DenseTensor modification_tensor(const LiftedData& L, double t_param, double s);
InvariantConnection modified_connection(const LiftedData& L, double t_param, double s);

// Basic tensors recovered intrinsically on the lift.
struct LiftPullbacks {
    Mat dbeta;
    Mat g;           // pullback of P_(ij)
    Mat p_skew;      // pullback of P_[ij]
    DenseTensor dg;  // pullback of (nabla g)_ijk
    DenseTensor domega;
    Vec tau, chi, nu, chi_omega;
    Mat omega_omega;
    double omega_norm2 = 0;
    Mat eta; // pullback of eta
};
// Uses the horizontal inverse of G, which does not depend on t_param.
LiftPullbacks lift_pullbacks(const LiftedData& L);

struct ModifiedIdentityDefects {
    double metric_derivative = 0; // D G vs -2s(t+1) beta G - pullback(nabla g)
    double metric_skew = 0;
    double alignment = 0;
    double vertical_derivative = 0; // D E vs (1+t)(dbeta/2 + s delta)
    double determinant_trace = 0;   // G^JK nabla_I G_JK vs -2(n+1) beta + tau
};
ModifiedIdentityDefects modified_identity_defects(const LiftedData& L, double t_param, double s);

struct RicciClosedForm {
    Mat ric;
    double trace = 0;
};
RicciClosedForm ricci_closed_form(const LiftedData& L, double t_param, double s);
Mat ricci_direct(const LiftedData& L, double t_param, double s);

struct AlphaFit {
    double alpha = 0;
    double defect = 0; // relative
};
// Least-squares alpha with omega o omega = alpha g
AlphaFit fit_alpha(const LiftedData& L);
std::vector<double> ew_s_values(double alpha, double t_param, int n);

// Lift of a trace-free base tensor with k lower indices followed by one upper index.
DenseTensor invariant_lift(const LiftedData& L, const DenseTensor& a_base, double eta_tol = 1e-9);
// Divergence nabla_P T_{I...}^P of a lifted tensor
DenseTensor lifted_divergence(const LiftedData& L, const DenseTensor& T);

// Least-squares residual of d sigma = d theta subject to sigma(t) = 0
double exact_shift_residual(const FrameAlgebra& f, const Vec& t, const Vec& theta);

// Vertical curvature defects: E^P R_PIJ^K and R_IJP^K E^P
double vertical_annihilation_defect(const LiftedData& L);

} // namespace geom
