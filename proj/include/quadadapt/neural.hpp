#pragma once

#include <optional>

#include "quadadapt/types.hpp"

// Three-layer networks Delta = W^T sigma(V^T x_nn) with online weight updates.
// sigma prepends a constant 1 to the hidden sigmoid outputs, so W carries one
// more row than there are hidden neurons.
namespace quadadapt::nn {

/// Estimated weights of one network and the radii of their Frobenius balls.
struct NNWeights {
  MatrixX W;  // (hidden + 1) x outputs
  MatrixX V;  // (inputs + 1) x hidden
  double W_max = 20.0;
  double V_max = 20.0;

  static NNWeights zeros(int inputs, int hidden, int outputs, double W_max, double V_max);

  int input_size() const { return static_cast<int>(V.rows()); }  // N1 + 1
  int hidden_size() const { return static_cast<int>(V.cols()); }  // N2
  int output_size() const { return static_cast<int>(W.cols()); }  // N3
  /// Bound on ||diag(W, V)||_F implied by the two ball radii.
  double Z_max() const;
};

struct AdaptationGains {
  double gamma_w = 10.0;
  double gamma_v = 10.0;
  double kappa = 0.01;
};

struct SigmoidFeatures {
  VectorX value;     // [1, s(z_1), ..., s(z_N2)]
  MatrixX jacobian;  // (N2 + 1) x N2, zero first row
};

SigmoidFeatures sigmoid_features(const VectorX& z);

/// W^T sigma(V^T x_nn). Throws DimensionMismatch.
VectorX nn_output(const NNWeights& w, const VectorX& x_nn);

/// [1, x, v]
VectorX build_position_input(const Vector3& x, const Vector3& v);

/// [1, yaw, pitch, roll, Omega]. Near gimbal lock the supplied fallback angles
/// are used; without a fallback GimbalLock propagates.
VectorX build_attitude_input(const Matrix3& R, const Vector3& Omega,
                             const std::optional<Vector3>& fallback_angles = std::nullopt);

/// Radial projection onto the Frobenius ball of the given radius. The result
/// satisfies norm() <= bound exactly in floating point.
MatrixX project_to_ball(const MatrixX& M, double bound);

/// One explicit-Euler step of
///   W' = -g_w [sigma a^T - sigma' z a^T] - kappa g_w W
///   V' = -g_v x_nn [sigma'^T W a]^T   - kappa g_v V
/// at z = V^T x_nn, followed by projection of W and V onto their balls.
NNWeights update_weights(const NNWeights& w, const VectorX& x_nn, const VectorX& a,
                         const AdaptationGains& gains, double dt);

}  // namespace quadadapt::nn
