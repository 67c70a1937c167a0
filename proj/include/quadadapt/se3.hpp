#pragma once

#include <cmath>

#include "quadadapt/errors.hpp"
#include "quadadapt/types.hpp"

// Rotation-group primitives. Everything here is a pure function over Eigen
// expressions, templated on the scalar type.
namespace quadadapt::se3 {

inline constexpr double kSkewTolerance = 1e-8;
inline constexpr double kGimbalLockTolerance = 1e-6;

template <typename Derived>
Mat3<typename Derived::Scalar> hat(const Eigen::MatrixBase<Derived>& v) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 3);
  using S = typename Derived::Scalar;
  Mat3<S> m;
  m << S(0), -v(2), v(1),
       v(2), S(0), -v(0),
      -v(1), v(0), S(0);
  return m;
}

/// Inverse of hat. Throws NotSkewSymmetric when ||M + M^T||_F exceeds tol.
template <typename Derived>
Vec3<typename Derived::Scalar> vee(const Eigen::MatrixBase<Derived>& M,
                                   double tol = kSkewTolerance) {
  EIGEN_STATIC_ASSERT_MATRIX_SPECIFIC_SIZE(Derived, 3, 3);
  if ((M + M.transpose()).norm() > tol) {
    throw NotSkewSymmetric("vee: matrix is not skew-symmetric");
  }
  return Vec3<typename Derived::Scalar>(M(2, 1), M(0, 2), M(1, 0));
}

/// vee of the skew-symmetric part; never throws.
template <typename Derived>
Vec3<typename Derived::Scalar> vee_skew_part(const Eigen::MatrixBase<Derived>& M) {
  using S = typename Derived::Scalar;
  return Vec3<S>(M(2, 1) - M(1, 2), M(0, 2) - M(2, 0), M(1, 0) - M(0, 1)) / S(2);
}

template <typename Scalar>
bool is_rotation(const Mat3<Scalar>& R, double tol = 1e-9) {
  return (R.transpose() * R - Mat3<Scalar>::Identity()).norm() <= tol &&
         std::abs(R.determinant() - Scalar(1)) <= tol;
}

template <typename Scalar>
Mat3<Scalar> axis_angle(const Vec3<Scalar>& axis, Scalar angle) {
  return Eigen::AngleAxis<Scalar>(angle, axis.normalized()).toRotationMatrix();
}

/// Exponential map so(3) -> SO(3) (Rodrigues), with a series near zero.
template <typename Derived>
Mat3<typename Derived::Scalar> exp_so3(const Eigen::MatrixBase<Derived>& w) {
  using S = typename Derived::Scalar;
  using std::cos;
  using std::sin;
  const S theta2 = w.squaredNorm();
  const Mat3<S> W = hat(w);
  S a, b;
  if (theta2 < S(1e-10)) {
    a = S(1) - theta2 / S(6) + theta2 * theta2 / S(120);
    b = S(0.5) - theta2 / S(24) + theta2 * theta2 / S(720);
  } else {
    const S theta = std::sqrt(theta2);
    a = sin(theta) / theta;
    b = (S(1) - cos(theta)) / theta2;
  }
  return Mat3<S>::Identity() + a * W + b * W * W;
}

template <typename Scalar>
struct AttitudeErrorSet {
  Vec3<Scalar> e_R = Vec3<Scalar>::Zero();
  Vec3<Scalar> e_Omega = Vec3<Scalar>::Zero();
  Scalar psi = Scalar(0);  // in [0, 2]
};

/// e_R = 1/2 (Rc^T R - R^T Rc)^vee and Psi = 1/2 tr(I - Rc^T R).
/// The e_Omega field is left at zero; see angular_velocity_error.
template <typename Scalar>
AttitudeErrorSet<Scalar> attitude_error(const Mat3<Scalar>& R,
                                        const Mat3<Scalar>& Rc) {
  const Mat3<Scalar> RcTR = Rc.transpose() * R;
  AttitudeErrorSet<Scalar> out;
  out.e_R = vee_skew_part(RcTR);
  out.psi = Scalar(0.5) * (Scalar(3) - RcTR.trace());
  return out;
}

template <typename Scalar>
Vec3<Scalar> angular_velocity_error(const Mat3<Scalar>& R, const Mat3<Scalar>& Rc,
                                    const Vec3<Scalar>& Omega,
                                    const Vec3<Scalar>& Omega_c) {
  return Omega - R.transpose() * Rc * Omega_c;
}

template <typename Scalar>
AttitudeErrorSet<Scalar> tracking_errors(const Mat3<Scalar>& R, const Mat3<Scalar>& Rc,
                                         const Vec3<Scalar>& Omega,
                                         const Vec3<Scalar>& Omega_c) {
  auto out = attitude_error(R, Rc);
  out.e_Omega = angular_velocity_error(R, Rc, Omega, Omega_c);
  return out;
}

/// C(Rc^T R) in de_R/dt = C e_Omega.
template <typename Scalar>
Mat3<Scalar> attitude_error_rate_matrix(const Mat3<Scalar>& R, const Mat3<Scalar>& Rc) {
  const Mat3<Scalar> RTRc = R.transpose() * Rc;
  return Scalar(0.5) * (RTRc.trace() * Mat3<Scalar>::Identity() - RTRc);
}

/// Intrinsic Z-Y-X angles returned as [yaw, pitch, roll], so that
/// R = Rz(yaw) Ry(pitch) Rx(roll). Throws GimbalLock when |cos(pitch)| < 1e-6.
template <typename Scalar>
Vec3<Scalar> euler_zyx(const Mat3<Scalar>& R) {
  using std::atan2;
  const Scalar cos_pitch = std::hypot(R(0, 0), R(1, 0));
  if (cos_pitch < Scalar(kGimbalLockTolerance)) {
    throw GimbalLock("euler_zyx: pitch within gimbal-lock threshold of +-pi/2");
  }
  return Vec3<Scalar>(atan2(R(1, 0), R(0, 0)), atan2(-R(2, 0), cos_pitch),
                      atan2(R(2, 1), R(2, 2)));
}

template <typename Scalar>
Mat3<Scalar> from_euler_zyx(const Vec3<Scalar>& ypr) {
  using AA = Eigen::AngleAxis<Scalar>;
  return (AA(ypr(0), Vec3<Scalar>::UnitZ()) * AA(ypr(1), Vec3<Scalar>::UnitY()) *
          AA(ypr(2), Vec3<Scalar>::UnitX()))
      .toRotationMatrix();
}

/// Closest rotation in the Frobenius sense (polar factor via SVD).
template <typename Derived>
Mat3<typename Derived::Scalar> orthonormalize(const Eigen::MatrixBase<Derived>& M) {
  using S = typename Derived::Scalar;
  const Mat3<S> A = M;
  if (!(A.determinant() > S(0))) {
    throw DegenerateMatrix("orthonormalize: det <= 0");
  }
  Eigen::JacobiSVD<Mat3<S>> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3<S> sv = svd.singularValues();
  if (sv(2) <= S(1e-9) * sv(0)) {
    throw DegenerateMatrix("orthonormalize: matrix is near rank-deficient");
  }
  return svd.matrixU() * svd.matrixV().transpose();
}

}  // namespace quadadapt::se3
