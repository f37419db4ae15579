#include "epfem/constitutive.hpp"

#include <cmath>

namespace epfem {

using voigt::dev;
using voigt::iota;
using voigt::vol;

std::pair<double, double> elastic_moduli(double young, double poisson) {
  if (young <= 0.0) throw Error("elastic_moduli: Young modulus must be > 0");
  if (poisson <= -1.0 || poisson >= 0.5)
    throw Error("elastic_moduli: Poisson ratio must lie in (-1, 1/2)");
  const double bulk = young / (3.0 * (1.0 - 2.0 * poisson));
  const double shear = young / (2.0 * (1.0 + poisson));
  return {bulk, shear};
}

std::pair<double, double> dp_parameters(double c0, double phi, DPMode mode) {
  if (c0 <= 0.0 || phi <= 0.0 || phi >= M_PI / 2.0)
    throw Error("dp_parameters: require c0 > 0 and phi in (0, pi/2)");
  if (mode == DPMode::three_d) {
    const double denom = std::sqrt(3.0) * (3.0 + std::sin(phi));
    return {6.0 * std::sin(phi) / denom, c0 * 6.0 * std::cos(phi) / denom};
  }
  const double t = std::tan(phi);
  const double denom = std::sqrt(9.0 + 12.0 * t * t);
  return {3.0 * t / denom, c0 * 3.0 / denom};
}

MaterialField uniform_elastic(int n_int, double bulk, double shear) {
  MaterialField mat;
  mat.shear = Vec::Constant(n_int, shear);
  mat.bulk = Vec::Constant(n_int, bulk);
  return mat;
}

MaterialField uniform_von_mises(int n_int, double bulk, double shear, double a,
                                double Y) {
  MaterialField mat = uniform_elastic(n_int, bulk, shear);
  mat.plastic =
      VonMisesParams{Vec::Constant(n_int, a), Vec::Constant(n_int, Y)};
  return mat;
}

MaterialField uniform_drucker_prager(int n_int, double bulk, double shear,
                                     double eta, double c) {
  MaterialField mat = uniform_elastic(n_int, bulk, shear);
  mat.plastic =
      DruckerPragerParams{Vec::Constant(n_int, eta), Vec::Constant(n_int, c)};
  return mat;
}

IntegrationState IntegrationState::zero(int n_int) {
  IntegrationState st;
  st.E = Mat::Zero(6, n_int);
  st.Ep = Mat::Zero(6, n_int);
  st.Hard = Mat::Zero(6, n_int);
  st.S = Mat::Zero(6, n_int);
  st.DS = Mat::Zero(36, n_int);
  st.plastic_mask = BoolArray::Constant(n_int, false);
  st.smooth_mask = BoolArray::Constant(n_int, false);
  st.apex_mask = BoolArray::Constant(n_int, false);
  return st;
}

namespace {

inline Eigen::Map<Mat6> block(Mat& DS, int q) {
  return Eigen::Map<Mat6>(DS.col(q).data());
}

}  // namespace

ElasticEval constitutive_elastic(const Mat& E, const MaterialField& mat) {
  const int n = static_cast<int>(E.cols());
  if (mat.n_int() != n) throw Error("constitutive_elastic: size mismatch");
  ElasticEval out;
  out.S.resize(6, n);
  out.DS.resize(36, n);
  for (int q = 0; q < n; ++q) {
    const Mat6 C = voigt::elastic_stiffness(mat.bulk(q), mat.shear(q));
    out.S.col(q).noalias() = C * E.col(q);
    block(out.DS, q) = C;
  }
  return out;
}

VonMisesEval constitutive_vm(const Mat& E, const Mat& Ep_prev,
                             const Mat& Hard_prev, const MaterialField& mat) {
  const int n = static_cast<int>(E.cols());
  const auto& vm = std::get<VonMisesParams>(mat.plastic);
  if (Ep_prev.cols() != n || Hard_prev.cols() != n || mat.n_int() != n)
    throw Error("constitutive_vm: size mismatch");

  VonMisesEval out;
  out.S.resize(6, n);
  out.DS.resize(36, n);
  out.Ep = Ep_prev;
  out.Hard = Hard_prev;
  out.plastic_mask = BoolArray::Constant(n, false);
  out.crit.resize(n);

  for (int q = 0; q < n; ++q) {
    const double G = mat.shear(q), K = mat.bulk(q);
    const double a = vm.a(q), Y = vm.Y(q);
    const Vec6 e_tr = E.col(q) - Ep_prev.col(q);
    const Vec6 dev_e = dev() * e_tr;  // stress-type deviator
    const Vec6 sigma_tr = K * voigt::trace(e_tr) * iota() + 2.0 * G * dev_e;
    const Vec6 s_tr = 2.0 * G * dev_e - Hard_prev.col(q);
    const double norm_s = voigt::stress_norm(s_tr);
    const double crit = norm_s - Y;
    out.crit(q) = crit;

    const Mat6 C = voigt::elastic_stiffness(K, G);
    if (crit <= 0.0) {
      out.S.col(q) = sigma_tr;
      block(out.DS, q) = C;
      continue;
    }
    out.plastic_mask(q) = true;
    const Vec6 n_hat = s_tr / norm_s;
    const double denom = 2.0 * G + a;
    const double lambda = crit / denom;
    out.S.col(q) = sigma_tr - 2.0 * G * lambda * n_hat;
    const double c4 = 4.0 * G * G / denom;
    block(out.DS, q) =
        C - c4 * dev() +
        (c4 * Y / norm_s) * (dev() - n_hat * n_hat.transpose());
    out.Hard.col(q) += (a * lambda) * n_hat;
    out.Ep.col(q) += lambda * voigt::to_strain_type(n_hat);
  }
  return out;
}

DruckerPragerEval constitutive_dp(const Mat& E, const Mat& Ep_prev,
                                  const MaterialField& mat) {
  const int n = static_cast<int>(E.cols());
  const auto& dp = std::get<DruckerPragerParams>(mat.plastic);
  if (Ep_prev.cols() != n || mat.n_int() != n)
    throw Error("constitutive_dp: size mismatch");

  DruckerPragerEval out;
  out.S.resize(6, n);
  out.DS.resize(36, n);
  out.Ep = Ep_prev;
  out.smooth_mask = BoolArray::Constant(n, false);
  out.apex_mask = BoolArray::Constant(n, false);

  const double sqrt2 = std::sqrt(2.0);
  for (int q = 0; q < n; ++q) {
    const double G = mat.shear(q), K = mat.bulk(q);
    const double eta = dp.eta(q), c = dp.c(q);
    const Vec6 e_tr = E.col(q) - Ep_prev.col(q);
    const Vec6 dev_e = dev() * e_tr;
    const double norm_e =
        std::sqrt(std::max(0.0, e_tr.dot(dev_e)));      // |dev eps_tr|
    const double rho_tr = 2.0 * G * norm_e;
    const double p_tr = K * voigt::trace(e_tr);
    const double denom_a = K * eta * eta;
    const double denom_s = G + denom_a;
    const double crit1 = rho_tr / sqrt2 + eta * p_tr - c;
    const double crit2 = eta * p_tr - denom_a * rho_tr / (G * sqrt2) - c;

    const Mat6 C = voigt::elastic_stiffness(K, G);
    const Vec6 sigma_tr = p_tr * iota() + 2.0 * G * dev_e;

    if (crit1 <= 0.0) {  // elastic
      out.S.col(q) = sigma_tr;
      block(out.DS, q) = C;
    } else if (crit2 <= 0.0) {  // return to the smooth portion
      if (norm_e <= 0.0)
        throw Error("constitutive_dp: zero deviator in smooth return");
      out.smooth_mask(q) = true;
      const double lambda = crit1 / denom_s;
      const Vec6 n_hat = dev_e / norm_e;
      const Vec6 m_hat = sqrt2 * G * n_hat + K * eta * iota();
      out.S.col(q) = sigma_tr - lambda * m_hat;
      block(out.DS, q) =
          C -
          (2.0 * sqrt2 * G * G * lambda / rho_tr) *
              (dev() - n_hat * n_hat.transpose()) -
          m_hat * m_hat.transpose() / denom_s;
      Vec6 dir = (sqrt2 / 2.0) * voigt::to_strain_type(n_hat) +
                 (eta / 3.0) * iota();
      out.Ep.col(q) += lambda * dir;
    } else {  // return to the apex
      out.apex_mask(q) = true;
      out.S.col(q) = (c / eta) * iota();
      block(out.DS, q).setZero();
      out.Ep.col(q) = E.col(q) - (c / (3.0 * K * eta)) * iota();
    }
  }
  return out;
}

IntegrationState evaluate_constitutive(const Mat& E,
                                       const IntegrationState& prev,
                                       const MaterialField& mat) {
  const int n = static_cast<int>(E.cols());
  IntegrationState st = IntegrationState::zero(n);
  st.E = E;
  if (mat.is_elastic()) {
    ElasticEval ev = constitutive_elastic(E, mat);
    st.S = std::move(ev.S);
    st.DS = std::move(ev.DS);
  } else if (std::holds_alternative<VonMisesParams>(mat.plastic)) {
    VonMisesEval ev = constitutive_vm(E, prev.Ep, prev.Hard, mat);
    st.S = std::move(ev.S);
    st.DS = std::move(ev.DS);
    st.Ep = std::move(ev.Ep);
    st.Hard = std::move(ev.Hard);
    st.plastic_mask = std::move(ev.plastic_mask);
  } else {
    DruckerPragerEval ev = constitutive_dp(E, prev.Ep, mat);
    st.S = std::move(ev.S);
    st.DS = std::move(ev.DS);
    st.Ep = std::move(ev.Ep);
    st.smooth_mask = ev.smooth_mask;
    st.apex_mask = ev.apex_mask;
    st.plastic_mask = ev.smooth_mask || ev.apex_mask;
  }
  return st;
}

}  // namespace epfem
