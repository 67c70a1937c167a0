#pragma once

#include <Eigen/Dense>

namespace quadadapt {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;

using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;
using VectorX = Eigen::VectorXd;
using MatrixX = Eigen::MatrixXd;

/// Pose and velocities of the vehicle. R maps body to inertial coordinates,
/// v is inertial, Omega is resolved in the body frame.
template <typename Scalar>
struct BodyState {
  Vec3<Scalar> x = Vec3<Scalar>::Zero();
  Vec3<Scalar> v = Vec3<Scalar>::Zero();
  Mat3<Scalar> R = Mat3<Scalar>::Identity();
  Vec3<Scalar> Omega = Vec3<Scalar>::Zero();

  bool allFinite() const {
    return x.allFinite() && v.allFinite() && R.allFinite() && Omega.allFinite();
  }
};

using RigidBodyState = BodyState<double>;

/// Force resolved in the inertial frame, moment in the body frame.
struct Wrench {
  Vector3 force = Vector3::Zero();
  Vector3 moment = Vector3::Zero();
};

}  // namespace quadadapt
