#ifndef NILMIN_SPINORS_HPP
#define NILMIN_SPINORS_HPP

#include <functional>

#include "nilmin/grid.hpp"
#include "nilmin/mesh.hpp"
#include "nilmin/nil3.hpp"

namespace nilmin {

// generating spinor of a conformal immersion, sampled at one point
struct SpinorSample {
  cd z{0.0, 0.0};
  cd psi1{0.0, 0.0};
  cd psi2{0.0, 0.0};
};

struct SpinorField {
  GridSpec grid;
  Field<cd> psi1, psi2;

  SpinorField() = default;
  explicit SpinorField(const GridSpec& g) : grid(g), psi1(g), psi2(g) {}
  SpinorSample sample(int i, int j) const {
    return SpinorSample{grid.z(i, j), psi1.at(i, j), psi2.at(i, j)};
  }
};

// pointwise first-order data of the immersion carried by a spinor sample;
// hopfA / tildeA / arB need derivatives and are filled by hopf_and_ar
struct GeometricData {
  double conf = 0.0;       // conformal factor e^u
  double support = 0.0;    // support function h = <f^{-1}N, e3> e^{u/2}
  double mean_h = 0.0;
  cd dirac_potential{0.0, 0.0};
  cd hopf_a{0.0, 0.0};
  cd tilde_a{0.0, 0.0};
  cd ar_b{0.0, 0.0};
  cd gauss{0.0, 0.0};      // stereographic Gauss map, infinite when psi1 = 0
  double contact_angle = 0.0;
  Nil3Tangent normal;      // unit normal in the left-invariant frame
  bool branch = false;     // both spinor components vanish
  bool vertical = false;   // |psi1| = |psi2|, tangent plane contains e3
  bool downward = false;   // gauss map outside the closed unit disc
};

// tangent vector phi = f^{-1} f_z in the left-invariant frame
Nil3Tangent spinors_to_phi(const SpinorSample& s);

// inverse of spinors_to_phi on null vectors; the component of larger
// magnitude among psi1, conj(psi2) is taken as a principal square root and
// the other follows from phi3, so the output is deterministic
SpinorSample phi_to_spinors(const Nil3Tangent& phi, double tol = 1e-10);

// flip the joint sign of each spinor pair to make the field continuous,
// sweeping away from the grid's lower-left corner
void align_spinor_field(SpinorField& field);

GeometricData first_order_data(const SpinorSample& s, double mean_h,
                               double branch_tol = 1e-13, double vertical_tol = 1e-9);

// max interior violation of the two coupled first-order equations linking
// the spinor components through the potential built from H and h
double dirac_residual(const SpinorField& field,
                      const std::function<double(cd)>& mean_h);

struct HopfData {
  Field<cd> a;        // quadratic differential coefficient
  Field<cd> tilde_a;  // corrected coefficient
  Field<cd> ar_b;     // holomorphic coefficient for constant H
  double holomorphy_residual = 0.0;  // max interior |d/dzbar ar_b|
};

HopfData hopf_and_ar(const SpinorField& field,
                     const std::function<double(cd)>& mean_h);

// the scalar identity every constant-H solution of the structure equations
// satisfies; residual is |lhs - rhs| of its third alternative
struct BerdinskyData {
  cd r{0.0, 0.0};
  cd s{0.0, 0.0};
  cd t{0.0, 0.0};
  double residual = 0.0;
};

BerdinskyData berdinsky_constraint(cd w, cd w_z, cd w_zbar, cd b, double mean_h);

// mean curvature recovered from a sampled immersion by finite differences;
// `defined` excludes boundary points, degenerate points and undefined input
struct MeanCurvatureField {
  Field<double> h;
  Field<uint8_t> defined;
  double max_abs() const;
};

MeanCurvatureField mean_curvature_from_mesh(const SurfaceMesh& mesh,
                                            double degenerate_tol = 1e-12);

} // namespace nilmin

#endif
