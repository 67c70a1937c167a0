#include "quadadapt/neural.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "quadadapt/errors.hpp"
#include "quadadapt/se3.hpp"

namespace quadadapt::nn {

NNWeights NNWeights::zeros(int inputs, int hidden, int outputs, double W_max, double V_max) {
  return {MatrixX::Zero(hidden + 1, outputs), MatrixX::Zero(inputs + 1, hidden), W_max, V_max};
}

double NNWeights::Z_max() const { return std::hypot(W_max, V_max); }

SigmoidFeatures sigmoid_features(const VectorX& z) {
  const Eigen::Index n = z.size();
  SigmoidFeatures f{VectorX(n + 1), MatrixX::Zero(n + 1, n)};
  f.value(0) = 1.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double s = 1.0 / (1.0 + std::exp(-z(k)));
    f.value(k + 1) = s;
    f.jacobian(k + 1, k) = s * (1.0 - s);
  }
  return f;
}

namespace {

void check_dims(const NNWeights& w, const VectorX& x_nn) {
  if (w.V.rows() != x_nn.size() || w.W.rows() != w.V.cols() + 1) {
    throw DimensionMismatch("network input of size " + std::to_string(x_nn.size()) +
                            " does not match V " + std::to_string(w.V.rows()) + "x" +
                            std::to_string(w.V.cols()) + " / W " +
                            std::to_string(w.W.rows()) + "x" + std::to_string(w.W.cols()));
  }
}

}  // namespace

VectorX nn_output(const NNWeights& w, const VectorX& x_nn) {
  check_dims(w, x_nn);
  return w.W.transpose() * sigmoid_features(w.V.transpose() * x_nn).value;
}

VectorX build_position_input(const Vector3& x, const Vector3& v) {
  VectorX in(7);
  in << 1.0, x, v;
  return in;
}

VectorX build_attitude_input(const Matrix3& R, const Vector3& Omega,
                             const std::optional<Vector3>& fallback_angles) {
  Vector3 angles;
  try {
    angles = se3::euler_zyx(R);
  } catch (const GimbalLock&) {
    if (!fallback_angles) throw;
    angles = *fallback_angles;
  }
  VectorX in(7);
  in << 1.0, angles, Omega;
  return in;
}

MatrixX project_to_ball(const MatrixX& M, double bound) {
  const double norm = M.norm();
  if (norm <= bound) return M;
  MatrixX out = M * (bound / norm);
  // Rounding can leave the scaled norm a few ulps above the bound.
  double shrink = 1.0;
  while (out.norm() > bound) {
    shrink *= 1.0 - 4.0 * std::numeric_limits<double>::epsilon();
    out = M * (shrink * bound / norm);
  }
  return out;
}

NNWeights update_weights(const NNWeights& w, const VectorX& x_nn, const VectorX& a,
                         const AdaptationGains& g, double dt) {
  check_dims(w, x_nn);
  if (w.W.cols() != a.size()) throw DimensionMismatch("error vector does not match outputs");

  const VectorX z = w.V.transpose() * x_nn;
  const SigmoidFeatures f = sigmoid_features(z);

  const MatrixX W_dot = -g.gamma_w * (f.value - f.jacobian * z) * a.transpose() -
                        g.kappa * g.gamma_w * w.W;
  const VectorX back = f.jacobian.transpose() * (w.W * a);
  const MatrixX V_dot = -g.gamma_v * x_nn * back.transpose() - g.kappa * g.gamma_v * w.V;

  NNWeights out = w;
  out.W = project_to_ball(w.W + dt * W_dot, w.W_max);
  out.V = project_to_ball(w.V + dt * V_dot, w.V_max);
  return out;
}

}  // namespace quadadapt::nn
