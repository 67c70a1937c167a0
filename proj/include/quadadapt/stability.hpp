#pragma once

#include <array>
#include <optional>
#include <ostream>

#include "quadadapt/controller.hpp"
#include "quadadapt/types.hpp"

// Gain conditions and Lyapunov diagnostics for the closed loop. Everything
// here is a pure function of its arguments.
namespace quadadapt::stability {

/// Worst-case bounds the stability argument is conditioned on. Subscript 1
/// refers to the position network, 2 to the attitude network.
struct BoundAssumptions {
  double psi1 = 0.01;     // bound on Psi(R(0), R_c(0)), in (0, 1)
  double B1 = 12.0;       // ||-m g e3 + m xdd_d + Delta1_bar|| <= B1
  double B2 = 1.0;        // ||m x^(3)_d + d/dt Delta1_bar|| <= B2
  double B4 = 1.5;        // ||R_c dot|| <= B4
  double e_x_max = 1.0;
  double x_d_max = 1.0;
  double v_d_max = 1.0;
  double E_max = 0.5;     // Euler-angle norm bound
  double delta1 = 1.0, delta2 = 1.0, delta3 = 1.0, delta4 = 1.0;
  double eps1 = 1e-3;     // approximation error of the position network
  double eps2 = 1e-3;     // approximation error of the attitude network
  double W_M1 = 1.0, V_M1 = 1.0;
  double W_M2 = 1.0, V_M2 = 1.0;

  /// Throws ValidationError. psi1 must lie in (0, 1); approximation errors and
  /// weight bounds may be zero, every other bound must be positive.
  void validate() const;
};

/// Constants derived from the bounds at equality with their defining
/// inequalities. Index 0 is the position network, 1 the attitude network.
struct DerivedConstants {
  double beta = 0.0;
  std::array<double, 2> Z_M{}, C1{}, C2{}, C3{}, C4{}, C5{};
  double C5_total = 0.0;
  double k_x_beta = 0.0;
  double k_v_beta = 0.0;
  double k_Omega_beta = 0.0;
  double k_xv = 0.0;
  double k_ROmega = 0.0;
  double lambda_min_J = 0.0;
  double lambda_max_J = 0.0;
};

DerivedConstants derive_constants(const control::ControllerGains& gains, double mass,
                                  const Matrix3& J, const BoundAssumptions& bounds);

struct GainCheck {
  bool pass = false;
  double threshold = 0.0;
  double margin = 0.0;  // threshold - value; positive when passing
};

/// c1 < sqrt(k_x / m)
GainCheck validate_c1(double c1, double k_x, double mass);

/// c2 < min{ sqrt(k_R lm_J) / lM_J, sqrt(2 k_R / (lM_J (2 - psi1))) }
GainCheck validate_c2(double c2, double k_R, const Matrix3& J, double psi1);

struct MatrixVerdict {
  MatrixX matrix;
  VectorX eigenvalues;  // ascending
  bool positive_definite = false;

  double min_eigenvalue() const { return eigenvalues(0); }
  double max_eigenvalue() const { return eigenvalues(eigenvalues.size() - 1); }
};

MatrixVerdict analyze_matrix(const MatrixX& symmetric);

struct LyapunovReport {
  DerivedConstants constants;
  GainCheck c1_check, c2_check;
  MatrixVerdict M11, M12, M21, M22;
  MatrixVerdict N1, N2, N3;
  MatrixVerdict N1p, N2p, N3p;
  std::array<double, 3> ratios{};  // lm(N_i) / lM(N_i')
  double nu = 0.0;
  double radius = 0.0;             // C5 / nu when nu > 0, else +inf
  bool psi2_substituted = true;    // psi2 in N2', N3' read as psi1
  bool all_pass = false;           // c1, c2 and every M and N matrix PD
};

/// Builds M11, M12, M21, M22, N1-N3 and N1'-N3' from the gains and bounds
/// and collects their spectra, PD verdicts, nu and C5 / nu.
LyapunovReport build_pd_matrices(const control::ControllerGains& gains, double mass,
                                 const Matrix3& J, const BoundAssumptions& bounds);

/// Tracking errors entering V.
struct ErrorState {
  Vector3 e_x = Vector3::Zero();
  Vector3 e_v = Vector3::Zero();
  Vector3 e_R = Vector3::Zero();
  Vector3 e_Omega = Vector3::Zero();
  double psi = 0.0;
};

/// Ideal-minus-estimated weights of both networks.
struct WeightErrors {
  MatrixX W1, V1, W2, V2;
};

struct LyapunovValue {
  double V1 = 0.0;
  double V2 = 0.0;
  double V01 = 0.0;
  double V02 = 0.0;
  double V = 0.0;
};

/// V1 = k_x|e_x|^2/2 + m|e_v|^2/2 + m c1 e_x.e_v + V01,
/// V2 = e_O^T J e_O/2 + k_R Psi + c2 e_R^T J e_O + V02.
/// Without weight errors the V0 terms are omitted.
LyapunovValue lyapunov_value(const ErrorState& e, const control::ControllerGains& gains,
                             double mass, const Matrix3& J,
                             const std::optional<WeightErrors>& nn = std::nullopt);

/// tr(W~^T W~)/(2 g_w) + tr(V~^T V~)/(2 g_v). Throws ValidationError if a
/// rate is zero.
double weight_error_energy(const MatrixX& W_err, const MatrixX& V_err,
                           const nn::AdaptationGains& g);

/// |e_x|^2 + |e_v|^2 + |e_R|^2 + |e_O|^2 + |Z~1|^2/g1 + |Z~2|^2/g2 with
/// g_i = max(g_w, g_v); the quantity bounded by C5/nu.
double weighted_error_norm(const ErrorState& e, const control::ControllerGains& gains,
                           const std::optional<WeightErrors>& nn = std::nullopt);

/// C5 / nu. Throws DegenerateNu when nu <= 0.
double ultimate_bound(double C5, double nu);

/// Instantaneous bound on ||d/dt b3c||:
/// 2 (k_x|e_v| + k_v|e_v dot| + B2) / (k_x|e_x| + k_v|e_v| + B1).
double b3_diagnostic(const Vector3& e_x, const Vector3& e_v, const Vector3& e_v_dot,
                     const control::ControllerGains& gains, double B1, double B2);

/// key: value lines, each key prefixed with `prefix`.
void write_report(std::ostream& os, const LyapunovReport& report,
                  const std::string& prefix = "stability.");

}  // namespace quadadapt::stability
