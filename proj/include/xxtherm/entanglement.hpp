#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "xxtherm/model.hpp"

// Concurrence of the thermal state.  For this model it has the closed form
//   C = max(0, nu),   nu = (2/Z)(|sinh(beta lambda)| - 1),
// so the state is entangled iff |lambda| > asinh(1)/beta.  A general Wootters
// evaluation on arbitrary 4x4 density matrices is provided as well; the two
// routes are independent and are cross-checked in the test suite.

namespace xxtherm {

template <typename Scalar = double>
struct ConcurrenceResult {
  Scalar nu;           // signed pre-concurrence, in [-1/(cosh(beta h)+1), 1)
  Scalar concurrence;  // max(0, nu)
};

template <typename Scalar>
ConcurrenceResult<Scalar> concurrence_closed_form(const ModelParams<Scalar>& p,
                                                  const ThermalContext<Scalar>& t) {
  using std::abs, std::cosh, std::exp, std::sinh;
  const Scalar b = t.beta;
  const Scalar m = detail::max_energy_scale(p);
  Scalar nu;
  if (b * m <= Scalar(detail::kScaledEvalThreshold)) {
    const Scalar z = 2 * cosh(b * p.h) + 2 * cosh(b * p.lambda);
    nu = 2 * (abs(sinh(b * p.lambda)) - 1) / z;
  } else {
    const Scalar s = b * m;
    const Scalar num = abs(detail::sinh_scaled(b * p.lambda, s)) - exp(-s);
    const Scalar den = detail::cosh_scaled(b * p.h, s) + detail::cosh_scaled(b * p.lambda, s);
    nu = num / den;
    // The exact nu is strictly below 1 for finite lambda; keep the returned
    // value on the correct side when the quotient rounds up.
    const Scalar below_one = 1 - std::numeric_limits<Scalar>::epsilon() / 2;
    if (nu >= 1) nu = below_one;
  }
  return {nu, std::max(Scalar(0), nu)};
}

// Entanglement threshold: |lambda| > critical_coupling(t) <=> C > 0.
template <typename Scalar>
Scalar critical_coupling(const ThermalContext<Scalar>& t) {
  using std::asinh;
  return asinh(Scalar(1)) / t.beta;
}

namespace detail {

inline const Eigen::Matrix4cd& spin_flip_yy() {
  static const Eigen::Matrix4cd yy = [] {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 3) = -1;
    m(1, 2) = 1;
    m(2, 1) = 1;
    m(3, 0) = -1;
    return m;
  }();
  return yy;
}

}  // namespace detail

// Wootters concurrence of an arbitrary two-qubit density matrix given in the
// product basis: max(0, sqrt(mu1) - sqrt(mu2) - sqrt(mu3) - sqrt(mu4)) with
// mu_i the descending eigenvalues of rho (sy x sy) rho* (sy x sy).  They are
// obtained from the equivalent Hermitian problem sqrt(rho) rho~ sqrt(rho).
inline double concurrence_wootters(const DensityMatrix4<double>& rho) {
  if (rho.basis != Basis::Product)
    throw std::invalid_argument("concurrence_wootters: density matrix must be in the product basis");
  const Eigen::Matrix4cd& r = rho.entries;
  if ((r - r.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("concurrence_wootters: matrix is not Hermitian");
  if (std::abs(r.trace().real() - 1.0) > 1e-12 || std::abs(r.trace().imag()) > 1e-12)
    throw std::invalid_argument("concurrence_wootters: trace must be 1");

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(r);
  if (es.eigenvalues().minCoeff() < -1e-12)
    throw std::invalid_argument("concurrence_wootters: matrix is not positive semidefinite");

  Eigen::Vector4d clamped = es.eigenvalues().cwiseMax(0.0);
  const Eigen::Matrix4cd sqrt_rho =
      es.eigenvectors() * clamped.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();

  const Eigen::Matrix4cd& yy = detail::spin_flip_yy();
  const Eigen::Matrix4cd rho_tilde = yy * r.conjugate() * yy;
  const Eigen::Matrix4cd herm = sqrt_rho * rho_tilde * sqrt_rho;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es2(herm);
  Eigen::Vector4d mu = es2.eigenvalues();  // ascending
  for (int i = 0; i < 4; ++i) mu[i] = std::max(mu[i], 0.0);  // clamp -1e-10..0 drift
  const double c = std::sqrt(mu[3]) - std::sqrt(mu[2]) - std::sqrt(mu[1]) - std::sqrt(mu[0]);
  return std::max(0.0, c);
}

}  // namespace xxtherm
