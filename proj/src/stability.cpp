#include "quadadapt/stability.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <string>

#include "quadadapt/errors.hpp"

namespace quadadapt::stability {

void BoundAssumptions::validate() const {
  if (!(psi1 > 0.0 && psi1 < 1.0)) throw ValidationError("bounds.psi1 must lie in (0, 1)");
  const std::pair<double, const char*> positive[] = {
      {B1, "B1"},       {B2, "B2"},           {B4, "B4"},           {e_x_max, "e_x_max"},
      {x_d_max, "x_d_max"}, {v_d_max, "v_d_max"}, {E_max, "E_max"}, {delta1, "delta1"},
      {delta2, "delta2"}, {delta3, "delta3"}, {delta4, "delta4"}};
  for (const auto& [v, name] : positive) {
    if (!(v > 0.0)) throw ValidationError(std::string("bounds.") + name + " must be > 0");
  }
  const std::pair<double, const char*> non_negative[] = {
      {eps1, "eps1"}, {eps2, "eps2"}, {W_M1, "W_M1"}, {V_M1, "V_M1"}, {W_M2, "W_M2"},
      {V_M2, "V_M2"}};
  for (const auto& [v, name] : non_negative) {
    if (!(v >= 0.0)) throw ValidationError(std::string("bounds.") + name + " must be >= 0");
  }
}

namespace {

std::pair<double, double> inertia_extremes(const Matrix3& J) {
  const Eigen::SelfAdjointEigenSolver<Matrix3> es(J, Eigen::EigenvaluesOnly);
  return {es.eigenvalues()(0), es.eigenvalues()(2)};
}

Eigen::Matrix2d sym2(double a, double b, double c) {
  Eigen::Matrix2d m;
  m << a, b, b, c;
  return m;
}

Matrix3 sym3(double a, double b, double c, double d, double e, double f) {
  // [[a b c], [b d e], [c e f]]
  Matrix3 m;
  m << a, b, c, b, d, e, c, e, f;
  return m;
}

}  // namespace

DerivedConstants derive_constants(const control::ControllerGains& g, double m,
                                  const Matrix3& J, const BoundAssumptions& b) {
  DerivedConstants c;
  std::tie(c.lambda_min_J, c.lambda_max_J) = inertia_extremes(J);
  c.beta = std::sqrt(b.psi1 * (2.0 - b.psi1));

  const double W_M[2] = {b.W_M1, b.W_M2};
  const double V_M[2] = {b.V_M1, b.V_M2};
  const double eps[2] = {b.eps1, b.eps2};
  const double input_bound[2] = {1.0 + b.x_d_max + b.v_d_max, 1.0 + b.E_max + b.B4};
  for (int i = 0; i < 2; ++i) {
    c.Z_M[i] = std::hypot(W_M[i], V_M[i]);
    c.C1[i] = 2.0 * W_M[i] + eps[i];
    c.C2[i] = 0.25 * (V_M[i] + W_M[i]);
    c.C3[i] = c.C2[i] * c.Z_M[i];
    c.C4[i] = c.C2[i] * input_bound[i];
  }

  c.k_x_beta = g.k_x * (1.0 - c.beta) - c.C3[0];
  c.k_v_beta = g.k_v * (1.0 - c.beta) - m * g.c1 - c.C3[0];
  c.k_xv = g.c1 * ((1.0 + c.beta) * g.k_v + c.C3[0]) + c.C3[0];
  c.k_Omega_beta = g.k_Omega - g.c2 * c.lambda_max_J - c.C3[1];
  c.k_ROmega = g.c2 * (g.k_Omega + c.C3[1]);

  const double k1 = g.position.kappa;
  const double k2 = g.attitude.kappa;
  c.C5[0] = g.c1 * c.C1[0] * c.C1[0] / (2.0 * c.k_x_beta) +
            c.C1[0] * c.C1[0] / (2.0 * c.k_v_beta) + 0.5 * k1 * c.Z_M[0] * c.Z_M[0];
  // The attitude term deliberately reuses the position network's C2.
  c.C5[1] = g.c2 * c.C2[0] * c.C2[0] / (2.0 * g.k_R) +
            c.C2[0] * c.C2[0] / (2.0 * c.k_Omega_beta) + 0.5 * k2 * c.Z_M[1] * c.Z_M[1];
  c.C5_total = c.C5[0] + c.C5[1];
  return c;
}

GainCheck validate_c1(double c1, double k_x, double mass) {
  GainCheck out;
  out.threshold = std::sqrt(k_x / mass);
  out.margin = out.threshold - c1;
  out.pass = c1 < out.threshold;
  return out;
}

GainCheck validate_c2(double c2, double k_R, const Matrix3& J, double psi1) {
  const auto [lm, lM] = inertia_extremes(J);
  GainCheck out;
  out.threshold = std::min(std::sqrt(k_R * lm) / lM, std::sqrt(2.0 * k_R / (lM * (2.0 - psi1))));
  out.margin = out.threshold - c2;
  out.pass = c2 < out.threshold;
  return out;
}

MatrixVerdict analyze_matrix(const MatrixX& symmetric) {
  MatrixVerdict v;
  v.matrix = symmetric;
  const Eigen::SelfAdjointEigenSolver<MatrixX> es(symmetric, Eigen::EigenvaluesOnly);
  v.eigenvalues = es.eigenvalues();
  v.positive_definite = v.eigenvalues(0) > 0.0;
  return v;
}

LyapunovReport build_pd_matrices(const control::ControllerGains& g, double m,
                                 const Matrix3& J, const BoundAssumptions& b) {
  LyapunovReport r;
  const DerivedConstants c = derive_constants(g, m, J, b);
  r.constants = c;
  r.c1_check = validate_c1(g.c1, g.k_x, m);
  r.c2_check = validate_c2(g.c2, g.k_R, J, b.psi1);

  const double lm = c.lambda_min_J, lM = c.lambda_max_J;
  const double psi2 = b.psi1;

  r.M11 = analyze_matrix(0.5 * sym2(g.k_x, -m * g.c1, m));
  r.M12 = analyze_matrix(0.5 * sym2(g.k_x, m * g.c1, m));
  r.M21 = analyze_matrix(0.5 * sym2(g.k_R, -g.c2 * lM, lm));
  r.M22 = analyze_matrix(0.5 * sym2(2.0 * g.k_R / (2.0 - b.psi1), g.c2 * lM, lM));

  const double c1 = g.c1, c2 = g.c2;
  const double C41 = c.C4[0], C42 = c.C4[1];
  r.N1 = analyze_matrix(sym3(c1 * c.k_x_beta / 2.0, -c.k_xv / 2.0, -c1 * C41,
                             c.k_v_beta / 2.0, -C41, g.position.kappa));
  r.N2 = analyze_matrix(sym3(c2 * g.k_R / 2.0, -c.k_ROmega, -c2 * C42, c.k_Omega_beta, -C42,
                             g.attitude.kappa));
  const double coupling = b.B1 + g.k_x * b.e_x_max;
  r.N3 = analyze_matrix(sym3(c1 * c.k_x_beta / 2.0, -c.k_xv / 2.0, -c1 * b.B1,
                             c1 * c.k_v_beta / 2.0, -coupling, c2 * g.k_R / 2.0));

  const double inv_g1 = 1.0 / std::min(g.position.gamma_w, g.position.gamma_v);
  const double inv_g2 = 1.0 / std::min(g.attitude.gamma_w, g.attitude.gamma_v);
  r.N1p = analyze_matrix(sym3(c2 * g.k_R / 2.0, m * c1, 0.0, m / 2.0, 0.0, inv_g1));
  r.N2p = analyze_matrix(sym3(1.0 / (2.0 - psi2), c2 * lM, 0.0, lM, 0.0, inv_g2));
  r.N3p = analyze_matrix(sym3(g.k_x / 2.0, 0.0, 0.0, m / 2.0, 0.0, 1.0 / (2.0 - psi2)));

  const MatrixVerdict* N[3] = {&r.N1, &r.N2, &r.N3};
  const MatrixVerdict* Np[3] = {&r.N1p, &r.N2p, &r.N3p};
  r.nu = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    r.ratios[i] = N[i]->min_eigenvalue() / Np[i]->max_eigenvalue();
    r.nu = std::min(r.nu, r.ratios[i]);
  }
  r.radius = r.nu > 0.0 ? c.C5_total / r.nu : std::numeric_limits<double>::infinity();

  r.all_pass = r.c1_check.pass && r.c2_check.pass && r.M11.positive_definite &&
               r.M12.positive_definite && r.M21.positive_definite &&
               r.M22.positive_definite && r.N1.positive_definite &&
               r.N2.positive_definite && r.N3.positive_definite;
  return r;
}

double weight_error_energy(const MatrixX& W_err, const MatrixX& V_err,
                           const nn::AdaptationGains& g) {
  if (!(g.gamma_w > 0.0) || !(g.gamma_v > 0.0)) {
    throw ValidationError("weight error energy needs positive adaptation rates");
  }
  return W_err.squaredNorm() / (2.0 * g.gamma_w) + V_err.squaredNorm() / (2.0 * g.gamma_v);
}

LyapunovValue lyapunov_value(const ErrorState& e, const control::ControllerGains& g,
                             double m, const Matrix3& J,
                             const std::optional<WeightErrors>& nn) {
  LyapunovValue out;
  if (nn) {
    out.V01 = weight_error_energy(nn->W1, nn->V1, g.position);
    out.V02 = weight_error_energy(nn->W2, nn->V2, g.attitude);
  }
  out.V1 = 0.5 * g.k_x * e.e_x.squaredNorm() + 0.5 * m * e.e_v.squaredNorm() +
           m * g.c1 * e.e_x.dot(e.e_v) + out.V01;
  out.V2 = 0.5 * e.e_Omega.dot(J * e.e_Omega) + g.k_R * e.psi +
           g.c2 * e.e_R.dot(J * e.e_Omega) + out.V02;
  out.V = out.V1 + out.V2;
  return out;
}

double weighted_error_norm(const ErrorState& e, const control::ControllerGains& g,
                           const std::optional<WeightErrors>& nn) {
  double total = e.e_x.squaredNorm() + e.e_v.squaredNorm() + e.e_R.squaredNorm() +
                 e.e_Omega.squaredNorm();
  if (nn) {
    const double g1 = std::max(g.position.gamma_w, g.position.gamma_v);
    const double g2 = std::max(g.attitude.gamma_w, g.attitude.gamma_v);
    total += (nn->W1.squaredNorm() + nn->V1.squaredNorm()) / g1 +
             (nn->W2.squaredNorm() + nn->V2.squaredNorm()) / g2;
  }
  return total;
}

double ultimate_bound(double C5, double nu) {
  if (!(nu > 0.0)) throw DegenerateNu("nu = " + std::to_string(nu) + " is not positive");
  return C5 / nu;
}

double b3_diagnostic(const Vector3& e_x, const Vector3& e_v, const Vector3& e_v_dot,
                     const control::ControllerGains& g, double B1, double B2) {
  return 2.0 * (g.k_x * e_v.norm() + g.k_v * e_v_dot.norm() + B2) /
         (g.k_x * e_x.norm() + g.k_v * e_v.norm() + B1);
}

namespace {

void write_matrix(std::ostream& os, const std::string& key, const MatrixVerdict& m) {
  os << key << ".eigenvalues: [";
  for (Eigen::Index i = 0; i < m.eigenvalues.size(); ++i) {
    os << (i ? ", " : "") << m.eigenvalues(i);
  }
  os << "]\n" << key << ".positive_definite: " << (m.positive_definite ? "true" : "false")
     << '\n';
}

void write_check(std::ostream& os, const std::string& key, const GainCheck& c) {
  os << key << ".pass: " << (c.pass ? "true" : "false") << '\n'
     << key << ".threshold: " << c.threshold << '\n'
     << key << ".margin: " << c.margin << '\n';
}

}  // namespace

void write_report(std::ostream& os, const LyapunovReport& r, const std::string& p) {
  const auto old_precision = os.precision(12);
  const DerivedConstants& c = r.constants;
  os << p << "all_pass: " << (r.all_pass ? "true" : "false") << '\n';
  write_check(os, p + "c1", r.c1_check);
  write_check(os, p + "c2", r.c2_check);
  os << p << "beta: " << c.beta << '\n';
  for (int i = 0; i < 2; ++i) {
    const std::string k = p + "net" + std::to_string(i + 1) + ".";
    os << k << "Z_M: " << c.Z_M[i] << '\n'
       << k << "C1: " << c.C1[i] << '\n'
       << k << "C2: " << c.C2[i] << '\n'
       << k << "C3: " << c.C3[i] << '\n'
       << k << "C4: " << c.C4[i] << '\n'
       << k << "C5: " << c.C5[i] << '\n';
  }
  os << p << "k_x_beta: " << c.k_x_beta << '\n'
     << p << "k_v_beta: " << c.k_v_beta << '\n'
     << p << "k_xv: " << c.k_xv << '\n'
     << p << "k_Omega_beta: " << c.k_Omega_beta << '\n'
     << p << "k_ROmega: " << c.k_ROmega << '\n';
  write_matrix(os, p + "M11", r.M11);
  write_matrix(os, p + "M12", r.M12);
  write_matrix(os, p + "M21", r.M21);
  write_matrix(os, p + "M22", r.M22);
  write_matrix(os, p + "N1", r.N1);
  write_matrix(os, p + "N2", r.N2);
  write_matrix(os, p + "N3", r.N3);
  write_matrix(os, p + "N1_prime", r.N1p);
  write_matrix(os, p + "N2_prime", r.N2p);
  write_matrix(os, p + "N3_prime", r.N3p);
  os << p << "nu: " << r.nu << '\n'
     << p << "C5: " << c.C5_total << '\n'
     << p << "radius: " << r.radius << '\n'
     << p << "psi2_read_as_psi1: " << (r.psi2_substituted ? "true" : "false") << '\n'
     << p << "net2_C5_uses_net1_C2: true\n";
  os.precision(old_precision);
}

}  // namespace quadadapt::stability
