#pragma once

#include <optional>

#include "geom/connection.hpp"

namespace geom {

struct FrameMetric {
    Mat h;
    Mat inv;
};
FrameMetric make_metric(const Mat& h);

DenseTensor covderiv_sym2(const InvariantConnection& conn, const Mat& h);

enum class CompatMode { conjugate, opposite };

// Difference-tensor dual of a connection. The opposite connection is always torsion-free;
// the conjugate one may carry torsion, which is reported.
struct DualConnection {
    FrameAlgebra frame;
    DenseTensor coeffs;
    double torsion_defect = 0;
    InvariantConnection connection(double tol = 1e-9) const;
};
DualConnection conjugate_or_opposite(const InvariantConnection& conn, const Mat& h, CompatMode mode);

struct CompatReport {
    double statistical_defect = 0;        // max |nabla_[i h_j]k|
    double special_defect = 0;            // max |h^pq nabla_i h_pq|
    double self_similar_defect = 0;       // max |L_t h - 2h|
    double radiant_hessian_defect = 0;    // max |nabla_i t_j - h_ij|, t_j = h(t, .)
    double flat_oneform_closed_defect = 0; // max |d t_flat|
    double v = 0;                          // h(t, t)
    double dv_minus_2flat = 0;             // max |dv - 2 t_flat|, dv = 0 for constant components
};
CompatReport structure_report(const InvariantConnection& conn, const Mat& h, const std::optional<Vec>& t = std::nullopt);

struct AHData {
    Vec chi;
    Vec tau;
    double alignment_defect = 0;
    double codazzi_defect = 0;    // max |nabla_[i g_j]k - chi_[i g_j]k|
    DenseTensor cubic;            // L_ijk = nabla_i g_jk - chi_i g_jk
    double cubic_symmetry_defect = 0;
    double cubic_trace_defect = 0;
};
AHData ah_data(const InvariantConnection& conn, const Mat& g);

InvariantConnection ah_conjugate(const InvariantConnection& conn, const Mat& g, double tol = 1e-8);
// max |Rc_ijkl + R_ijlk + dchi_ij g_kl| between a connection and its AH conjugate
double ah_curvature_relation_defect(const InvariantConnection& conn, const Mat& g, double tol = 1e-8);

struct EinsteinAHReport {
    double scalar = 0;
    double naive_defect = 0;
    double conjugate_naive_defect = 0;
    double conservation_defect = 0;
};
EinsteinAHReport einstein_ah_report(const InvariantConnection& conn, const Mat& g, double tol = 1e-8);

double conjugate_curvature_defect(const InvariantConnection& conn, const Mat& h, double tol = 1e-8);

struct ThomasCriterion {
    double statistical = 0;
    double special = 0;
    double self_similar = 0;
    double conjugate_ricci_flat = 0; // max |H^AB R_IAB^P H_PJ|
    double ricci_flat = 0;
    bool passes = false;
};
ThomasCriterion conjugate_thomas_criterion(const InvariantConnection& conn, int t_index, const Mat& H,
                                           double tol = 1e-8);

// The torsion-free connection on the frame of conn0 whose derivative of g is S (S_ijk symmetric in jk).
InvariantConnection connection_with_metric_derivative(const FrameAlgebra& frame, const Mat& g, const DenseTensor& S);

} // namespace geom
