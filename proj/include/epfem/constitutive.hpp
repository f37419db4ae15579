#pragma once

#include "epfem/types.hpp"
#include "epfem/voigt.hpp"

#include <variant>

namespace epfem {

/// K = E/(3(1-2nu)), G = E/(2(1+nu)). Rejects nu >= 1/2.
std::pair<double, double> elastic_moduli(double young, double poisson);

enum class DPMode { plane_strain, three_d };

/// Drucker-Prager (eta, c) from cohesion c0 and friction angle phi.
std::pair<double, double> dp_parameters(double c0, double phi, DPMode mode);

struct VonMisesParams {
  Vec a;  // kinematic hardening modulus per integration point
  Vec Y;  // yield stress per integration point
};

struct DruckerPragerParams {
  Vec eta;
  Vec c;
};

/// Per-integration-point elastic moduli plus the plastic model parameters.
struct MaterialField {
  Vec shear;  // G
  Vec bulk;   // K
  std::variant<std::monostate, VonMisesParams, DruckerPragerParams> plastic;

  int n_int() const { return static_cast<int>(shear.size()); }
  bool is_elastic() const {
    return std::holds_alternative<std::monostate>(plastic);
  }
};

MaterialField uniform_elastic(int n_int, double bulk, double shear);
MaterialField uniform_von_mises(int n_int, double bulk, double shear, double a,
                                double Y);
MaterialField uniform_drucker_prager(int n_int, double bulk, double shear,
                                     double eta, double c);

/// Per-integration-point state in full 3D Voigt storage (6 rows even for
/// plane strain). DS holds column-major 6x6 tangent blocks.
struct IntegrationState {
  Mat E;     // 6 x n_int, strain (engineering shears)
  Mat Ep;    // 6 x n_int, plastic strain (engineering shears)
  Mat Hard;  // 6 x n_int, back stress (stress type)
  Mat S;     // 6 x n_int, stress
  Mat DS;    // 36 x n_int, tangent blocks
  BoolArray plastic_mask;
  BoolArray smooth_mask;
  BoolArray apex_mask;

  static IntegrationState zero(int n_int);
};

struct ElasticEval {
  Mat S;   // 6 x n_int
  Mat DS;  // 36 x n_int
};

/// S = C E, DS = C at every point.
ElasticEval constitutive_elastic(const Mat& E, const MaterialField& mat);

struct VonMisesEval {
  Mat S;
  Mat DS;
  Mat Ep;
  Mat Hard;
  BoolArray plastic_mask;
  Vec crit;  // |s_tr| - Y
};

/// Radial return with linear kinematic hardening; a = 0 gives the perfectly
/// plastic von Mises model.
VonMisesEval constitutive_vm(const Mat& E, const Mat& Ep_prev,
                             const Mat& Hard_prev, const MaterialField& mat);

struct DruckerPragerEval {
  Mat S;
  Mat DS;
  Mat Ep;
  BoolArray smooth_mask;
  BoolArray apex_mask;
};

/// Drucker-Prager perfect plasticity with smooth-portion and apex returns.
DruckerPragerEval constitutive_dp(const Mat& E, const Mat& Ep_prev,
                                  const MaterialField& mat);

/// Model dispatch used by the Newton loop; prev supplies Ep/Hard.
IntegrationState evaluate_constitutive(const Mat& E,
                                       const IntegrationState& prev,
                                       const MaterialField& mat);

}  // namespace epfem
