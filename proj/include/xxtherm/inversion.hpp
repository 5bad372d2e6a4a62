#pragma once

#include <cmath>
#include <stdexcept>

#include "xxtherm/model.hpp"

// Inverse of the pre-concurrence map at fixed (beta, h).  With
// x = sinh(beta lambda) and a = cosh(beta h),
//   nu = (x - 1)/(a + sqrt(1 + x^2)),
// which is strictly increasing in lambda >= 0 and maps [0, inf) onto
// [-1/(a+1), 1).  Solving for x gives the unique non-negative branch
//   x = (a nu + 1 + nu sqrt((a nu + 1)^2 + 1 - nu^2)) / (1 - nu^2).

namespace xxtherm {

template <typename Scalar = double>
struct SubstitutedCoords {
  Scalar x;  // sinh(beta lambda)
  Scalar a;  // cosh(beta h), >= 1
};

template <typename Scalar>
SubstitutedCoords<Scalar> substituted_coords(const ModelParams<Scalar>& p,
                                             const ThermalContext<Scalar>& t) {
  using std::cosh, std::sinh;
  return {sinh(t.beta * p.lambda), cosh(t.beta * p.h)};
}

// Admissible pre-concurrence range; closed at the lower end, open at 1.
template <typename Scalar = double>
struct NuDomain {
  Scalar lower;  // -1/(cosh(beta h) + 1), attained at lambda = 0
  Scalar upper;  // 1, approached as lambda -> inf
};

template <typename Scalar>
NuDomain<Scalar> nu_domain(const ThermalContext<Scalar>& t, Scalar h) {
  using std::cosh, std::isfinite;
  if (!isfinite(h) || h < 0) throw std::invalid_argument("nu_domain: h must be finite and >= 0");
  return {-1 / (cosh(t.beta * h) + 1), Scalar(1)};
}

// The unique lambda >= 0 with pre-concurrence nu.  The 1 - nu^2 denominator is
// evaluated as (1 - nu)(1 + nu); for nu in [1/2, 1) the subtraction 1 - nu is
// exact, which keeps the map accurate arbitrarily close to the singular end.
template <typename Scalar>
Scalar lambda_from_nu(Scalar nu, const ThermalContext<Scalar>& t, Scalar h) {
  using std::asinh, std::cosh, std::sqrt;
  const Scalar a = cosh(t.beta * h);
  const Scalar lower = -1 / (a + 1);
  if (!(nu >= lower))
    throw std::domain_error("lambda_from_nu: nu below -1/(cosh(beta h)+1)");
  if (!(nu < 1))
    throw std::domain_error("lambda_from_nu: nu must be < 1");
  if (nu == lower) return Scalar(0);
  const Scalar one_m = 1 - nu;
  const Scalar one_p = 1 + nu;
  const Scalar anu1 = a * nu + 1;
  Scalar x = (anu1 + nu * sqrt(anu1 * anu1 + one_m * one_p)) / (one_m * one_p);
  if (x < 0) x = 0;  // rounding just above the lower endpoint
  return asinh(x) / t.beta;
}

// C_V expressed through nu: the composition heat_capacity(lambda_from_nu(nu)).
template <typename Scalar>
Scalar cv_of_nu(Scalar nu, const ThermalContext<Scalar>& t, Scalar h) {
  return heat_capacity(ModelParams<Scalar>(lambda_from_nu(nu, t, h), h), t);
}

}  // namespace xxtherm
