#pragma once

#include <cmath>
#include <stdexcept>

#include "xxtherm/model.hpp"

// Separable-state bounds on internal energy and heat capacity.  Any separable
// state satisfies U >= E_B with
//   E_B = -|lambda| - |h|^2/(4|lambda|)   for |h| <= 2|lambda|,
//   E_B = -|h|                            otherwise,
// and C_V >= beta^2 Delta (E_B - E_g) = C_V^B at low temperature, Delta being
// the gap to the first excited level.  For this model C_V^B <= 0 whenever
// h > 0, so the witness inequality never fires even for entangled states.

namespace xxtherm {

// Piecewise region of the heat-capacity bound, by position of lambda
// relative to the field.
enum class BoundBranch {
  BelowMinusH,         // lambda < -h
  MinusHToMinusHalfH,  // -h <= lambda < -h/2
  MinusHalfHToZero,    // -h/2 <= lambda < 0
  ZeroToHalfH,         // 0 <= lambda < h/2
  HalfHToH,            // h/2 <= lambda < h
  AboveH,              // lambda >= h
};

inline const char* to_string(BoundBranch b) {
  switch (b) {
    case BoundBranch::BelowMinusH: return "lambda<-h";
    case BoundBranch::MinusHToMinusHalfH: return "-h<=lambda<-h/2";
    case BoundBranch::MinusHalfHToZero: return "-h/2<=lambda<0";
    case BoundBranch::ZeroToHalfH: return "0<=lambda<h/2";
    case BoundBranch::HalfHToH: return "h/2<=lambda<h";
    case BoundBranch::AboveH: return "lambda>=h";
  }
  return "?";
}

template <typename Scalar = double>
struct SeparableBounds {
  Scalar e_b;     // separable bound on internal energy
  Scalar c_v_b;   // separable bound on heat capacity, beta^2 included
  BoundBranch branch;
  Scalar beta;
};

template <typename Scalar>
Scalar energy_bound(const ModelParams<Scalar>& p) {
  using std::abs;
  const Scalar al = abs(p.lambda), ah = abs(p.h);
  if (al == 0 && ah == 0) return Scalar(0);  // continuity limit
  if (ah <= 2 * al) return -al - ah * ah / (4 * al);
  return -ah;
}

template <typename Scalar>
SeparableBounds<Scalar> heat_capacity_bound(const ModelParams<Scalar>& p,
                                            const ThermalContext<Scalar>& t) {
  if (!(p.h > 0))
    throw std::domain_error("heat_capacity_bound: regions are defined for h > 0 only");
  const Scalar l = p.lambda, h = p.h;
  BoundBranch branch;
  Scalar gap, ground;
  if (l < -h) {
    branch = BoundBranch::BelowMinusH;
    gap = -l - h;
    ground = l;
  } else if (l < -h / 2) {
    branch = BoundBranch::MinusHToMinusHalfH;
    gap = l + h;
    ground = -h;
  } else if (l < 0) {
    branch = BoundBranch::MinusHalfHToZero;
    gap = l + h;
    ground = -h;
  } else if (l < h / 2) {
    branch = BoundBranch::ZeroToHalfH;
    gap = h - l;
    ground = -h;
  } else if (l < h) {
    branch = BoundBranch::HalfHToH;
    gap = h - l;
    ground = -h;
  } else {
    branch = BoundBranch::AboveH;
    gap = l - h;
    ground = -l;
  }
  const Scalar c_v_b = t.beta * t.beta * gap * (energy_bound(p) - ground);
  return {energy_bound(p), c_v_b, branch, t.beta};
}

template <typename Scalar = double>
struct SeparableCheck {
  Scalar c_v;
  Scalar c_v_b;
  bool violated;  // C_V < C_V^B would witness entanglement; never true here
};

template <typename Scalar>
SeparableCheck<Scalar> check_separable_inequality(const ModelParams<Scalar>& p,
                                                  const ThermalContext<Scalar>& t) {
  const Scalar cv = heat_capacity(p, t);
  const SeparableBounds<Scalar> b = heat_capacity_bound(p, t);
  return {cv, b.c_v_b, cv < b.c_v_b};
}

}  // namespace xxtherm
