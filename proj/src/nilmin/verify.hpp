#ifndef NILMIN_VERIFY_HPP
#define NILMIN_VERIFY_HPP

#include <vector>

#include "nilmin/mesh.hpp"
#include "nilmin/spinors.hpp"

namespace nilmin {

// acceptance limits for the residual report; defaults sized for 1e-2 grid
// steps, where centered differencing of exact data is the dominant error
struct VerifyThresholds {
  double dirac = 1e-3;
  double flatness = 5e-3;
  double gauss = 5e-3;
  double ar_holomorphy = 1e-3;
  double mean_h = 1e-3;
};

struct VerifyReport {
  double dirac_residual = 0.0;
  double flatness_residual = 0.0;
  double gauss_residual = 0.0;
  double ar_holomorphy_residual = 0.0;
  double mean_h_max = 0.0;
  double support_lo = 0.0;
  double support_hi = 0.0;
  int vertical_count = 0;
  int branch_count = 0;
  int points_defined = 0;
  int points_total = 0;
  int verdict = 0;  // how many residuals exceed their thresholds
};

// residuals of the first-order system, the zero-curvature equations and the
// structure identities on a sampled spinor field; undefined nodes poison
// their difference stencils and drop out of every maximum
VerifyReport verify_spinors(const SpinorField& sf,
                            const std::vector<uint8_t>& defined,
                            const VerifyThresholds& t);

// same report for a sampled immersion: spinors are recovered from centered
// derivatives of the points, and the curvature bound is measured on the
// mesh directly
VerifyReport verify_mesh(const SurfaceMesh& mesh, const VerifyThresholds& t);

}  // namespace nilmin

#endif
