#pragma once

// Jump matrices of the deformation chain behind det(I + V^(n)), from the
// operator-valued jump M(z|s,t) down to the scalar model problem and its
// explicit solution F~.
//
// Operator-level statements (the full jump M(z|s,t) and the lensing
// factorization on Im(I - P)) are checked on weight-symmetrized half-line
// matrices. On the rank-one range Im P everything is scalar, with
// Q(z) = (1 - z)/2 and Q(1/z) = 2/(1 - z) there.

#include <array>
#include <complex>
#include <string>

#include "efpdet/branches.hpp"
#include "efpdet/contour.hpp"
#include "efpdet/matrix.hpp"

namespace efpdet {

/// 2x2 complex matrix [[a11, a12], [a21, a22]].
struct Mat2 {
  cplx a11{1, 0}, a12{0, 0}, a21{0, 0}, a22{1, 0};

  static Mat2 identity() { return {}; }
  static Mat2 diag(cplx d1, cplx d2) { return {d1, 0, 0, d2}; }

  cplx det() const { return a11 * a22 - a12 * a21; }
  cplx trace() const { return a11 + a22; }
  Mat2 inverse() const;
  double max_abs() const;

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
            x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
  }
  friend Mat2 operator+(const Mat2& x, const Mat2& y) {
    return {x.a11 + y.a11, x.a12 + y.a12, x.a21 + y.a21, x.a22 + y.a22};
  }
  friend Mat2 operator-(const Mat2& x, const Mat2& y) {
    return {x.a11 - y.a11, x.a12 - y.a12, x.a21 - y.a21, x.a22 - y.a22};
  }
  friend Mat2 operator*(cplx s, const Mat2& x) { return {s * x.a11, s * x.a12, s * x.a21, s * x.a22}; }
  friend Mat2 operator*(double s, const Mat2& x) { return cplx(s, 0) * x; }
};

enum class EvalSide { plus, minus, off_contour };

struct JumpEvaluation {
  std::string name;
  cplx z;
  EvalSide side = EvalSide::off_contour;
  Mat2 matrix;
};

/// Kernel of block (row, col), 1-based, of M(z|s,t):
///   [ I + gamma P^T            -Q(z) z^{-n} e^{phi}  ]
///   [ Q(1/z) z^n e^{-phi}      I - gamma P           ]
/// The delta part of the identity blocks is reported through has_delta.
struct OperatorEntry {
  cplx non_delta;
  bool has_delta = false;
};
OperatorEntry m_op_entry(cplx z, double s, double t, int row, int col, const ModelParams& params);

/// Max-entry residual of (M_U M_L^{-1} - M|_{Im(I-P)}) after compressing both
/// block components with I - P(z). With compress = false the raw difference
/// is returned (it equals P(z) in the (1,1) block).
double factor_check_im_ip(cplx z, const ModelParams& params, const HalfLineQuadrature& hq,
                          bool compress = true);

/// Largest lensing off-diagonal magnitude over `samples` points z = radius e^{i theta},
/// theta spread over the arc, and over the half-line grid (s, t) including the
/// origin. radius > 1 measures the M_U entry Q(z) z^{-n} e^{phi}; radius < 1 the
/// M_L entry Q(1/z) z^n e^{-phi}.
double decay_check_lensing(const ModelParams& params, double radius, std::size_t samples,
                           const HalfLineQuadrature& hq);

/// Jump on Im P: [[2, -((1-z)/2) z^{-n} e^{phi}], [(2/(1-z)) z^n e^{-phi}, 0]].
Mat2 jump_im_p(double theta, const ModelParams& params);

struct ConjugatedJump {
  Mat2 direct;           ///< [[2 (g+/g-)^n, -((1-z)/2) e^{phi}], [(2/(1-z)) e^{-phi}, 0]]
  Mat2 via_conjugation;  ///< alpha^{n s3/2} g-^{-n s3} M|_{ImP} g+^{n s3} alpha^{-n s3/2}
  double identity_residual = 0;
};
ConjugatedJump conjugated_jump(double theta, const BranchContext& ctx, const ModelParams& params,
                               double eps = kDefaultBoundaryEps);

/// M~ = [[0, -((1-z)/2) e^{phi}], [(2/(1-z)) e^{-phi}, 0]].
Mat2 limit_jump(cplx z, const ModelParams& params);

struct Diagonalization {
  Mat2 s;
  Mat2 d;
  double residual = 0;  ///< max-entry |S D S^{-1} - M~|
};
Diagonalization diagonalize(cplx z, const ModelParams& params);

/// F~ = S B^{-1} S^{-1} for a given value of beta(z).
Mat2 f_tilde_from_beta(cplx z, cplx beta, const ModelParams& params);
/// F~(z) with beta from branches; requires |z - 1| > 1e-8 and z off C.
Mat2 f_tilde(cplx z, const BranchContext& ctx, const ModelParams& params);
/// (beta + 1/beta)/2, regular at z = 1.
cplx f_tilde_22(cplx z, const BranchContext& ctx);

/// Richardson boundary value of F~ at e^{i theta}. beta_fault multiplies beta
/// on the plus side (|z| < 1) only, i.e. selects another sheet there; 1 for the
/// genuine solution.
JumpEvaluation f_tilde_boundary(double theta, Side side, const BranchContext& ctx,
                                const ModelParams& params, double eps = kDefaultBoundaryEps,
                                cplx beta_fault = {1, 0});

/// Max-entry |F~_+ - F~_- M~| at e^{i theta}.
double f_tilde_jump_residual(double theta, const BranchContext& ctx, const ModelParams& params,
                             double eps = kDefaultBoundaryEps, cplx beta_fault = {1, 0});

struct Prediction {
  int n = 0;
  double psi = 0;
  double det_psi22 = 0;      ///< -sin^{2n+1}(psi/2)
  double log_ratio = 0;      ///< (2n+1) log|sin(psi/2)|
  double leading_log_p = 0;  ///< n^2 log|sin(psi/2)|
};
Prediction predictions(int n, double psi);

}  // namespace efpdet
