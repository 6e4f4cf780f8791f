#pragma once

#include <algorithm>

#include "blockopp/error.hpp"

namespace blockopp {

//! Numerical tolerance policy.
//!
//! The definiteness thresholds are relative: the absolute threshold applied
//! to a matrix is `scale * order * max_abs_entry`. The inequality tolerances
//! apply to the normalized margin of a certificate.
struct Tolerances {
  double psd_scale = 1e-10;
  double pd_scale = 1e-10;
  double ineq_rel_tol = 1e-8;
  double eq_rel_tol = 1e-9;
  double commute_tol = 1e-10;

  double psd_tol(int order, double max_abs) const {
    return psd_scale * order * max_abs;
  }
  double pd_tol(int order, double max_abs) const {
    return pd_scale * order * max_abs;
  }

  void validate() const {
    if (!(psd_scale > 0) || !(pd_scale > 0) || !(ineq_rel_tol > 0) ||
        !(eq_rel_tol > 0) || !(commute_tol > 0))
      throw Error(ErrorKind::InvalidArgument,
                  "all tolerances must be strictly positive");
  }
};

} // namespace blockopp
