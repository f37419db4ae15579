#pragma once

#include "epfem/types.hpp"

namespace epfem::voigt {

// Stress-type Voigt order (s11, s22, s33, s12, s23, s31); strain-type vectors
// carry engineering shears (e11, e22, e33, 2*e12, 2*e23, 2*e31).

/// Voigt vector of the identity tensor, (1,1,1,0,0,0).
inline const Vec6& iota() {
  static const Vec6 v = (Vec6() << 1, 1, 1, 0, 0, 0).finished();
  return v;
}

/// Volumetric operator I (x) I.
inline const Mat6& vol() {
  static const Mat6 m = iota() * iota().transpose();
  return m;
}

/// Deviatoric operator; maps a strain-type vector to the stress-type vector
/// of its deviator.
inline const Mat6& dev() {
  static const Mat6 m = [] {
    Mat6 d = Mat6::Zero();
    d.diagonal() << 1, 1, 1, 0.5, 0.5, 0.5;
    return Mat6(d - vol() / 3.0);
  }();
  return m;
}

/// Elastic stiffness C = K I(x)I + 2G I_D as a 6x6 Voigt block.
inline Mat6 elastic_stiffness(double bulk, double shear) {
  return bulk * vol() + 2.0 * shear * dev();
}

/// Frobenius tensor norm of a stress-type Voigt vector.
inline double stress_norm(const Vec6& s) {
  return std::sqrt(s.head<3>().squaredNorm() + 2.0 * s.tail<3>().squaredNorm());
}

/// Convert a stress-type Voigt vector to strain-type (double the shears).
inline Vec6 to_strain_type(const Vec6& s) {
  Vec6 e = s;
  e.tail<3>() *= 2.0;
  return e;
}

/// Trace of a tensor given in either Voigt representation.
inline double trace(const Vec6& v) { return v.head<3>().sum(); }

}  // namespace epfem::voigt
