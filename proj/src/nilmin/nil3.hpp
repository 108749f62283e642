#ifndef NILMIN_NIL3_HPP
#define NILMIN_NIL3_HPP

#include <complex>
#include <Eigen/Dense>

#include "nilmin/errors.hpp"

namespace nilmin {

using cd = std::complex<double>;

// Point of the Heisenberg group Nil3(tau) in exponential coordinates.
// The group law and metric depend on the bundle curvature tau; all
// surface-level modules fix tau = 1/2, the core keeps it general.
struct Nil3Point {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;
  double tau = 0.5;
};

Nil3Point nil3_mul(const Nil3Point& p, const Nil3Point& q);
Nil3Point nil3_inv(const Nil3Point& p);

// exp is the identity map in exponential coordinates; kept explicit so the
// coordinate convention is stated in code
Nil3Point nil3_exp(double v1, double v2, double v3, double tau = 0.5);
void nil3_log(const Nil3Point& p, double& v1, double& v2, double& v3);

// injective homomorphism into upper triangular 4x4 matrices
Eigen::Matrix4d nil3_embed(const Nil3Point& p);
Nil3Point nil3_from_embed(const Eigen::Matrix4d& m, double tau = 0.5);

// Tangent vector in the left-invariant orthonormal frame e1,e2,e3.
// Coefficients are complex so the same type carries Phi = f^{-1} f_z;
// genuinely real tangents satisfy is_real().
struct Nil3Tangent {
  cd a1{0.0, 0.0};
  cd a2{0.0, 0.0};
  cd a3{0.0, 0.0};

  Nil3Tangent() = default;
  Nil3Tangent(cd c1, cd c2, cd c3) : a1(c1), a2(c2), a3(c3) {}

  Nil3Tangent operator+(const Nil3Tangent& o) const { return {a1 + o.a1, a2 + o.a2, a3 + o.a3}; }
  Nil3Tangent operator-(const Nil3Tangent& o) const { return {a1 - o.a1, a2 - o.a2, a3 - o.a3}; }
  Nil3Tangent operator*(cd s) const { return {s * a1, s * a2, s * a3}; }
  Nil3Tangent conj() const { return {std::conj(a1), std::conj(a2), std::conj(a3)}; }
};

inline Nil3Tangent operator*(cd s, const Nil3Tangent& t) { return t * s; }

bool tangent_is_real(const Nil3Tangent& t, double tol = 1e-12);

// complex-bilinear extension of the frame inner product
cd frame_inner(const Nil3Tangent& x, const Nil3Tangent& y);
double frame_norm(const Nil3Tangent& x);

// Levi-Civita connection of the left-invariant metric, extended bilinearly
// over the frame table, and the symmetric brace {X,Y} = nabla_X Y + nabla_Y X
Nil3Tangent levi_civita(const Nil3Tangent& x, const Nil3Tangent& y, double tau = 0.5);
Nil3Tangent brace(const Nil3Tangent& x, const Nil3Tangent& y, double tau = 0.5);

// vector product of the oriented orthonormal frame, e1 x e2 = e3
Nil3Tangent vector_product(const Nil3Tangent& x, const Nil3Tangent& y);

// conversion between coordinate components (d/dx_i) and frame components at
// a point; only the e3 slot picks up the contact-form correction
Nil3Tangent frame_from_coords(const Nil3Point& at, double v1, double v2, double v3);
void coords_from_frame(const Nil3Point& at, const Nil3Tangent& t, double& v1, double& v2, double& v3);

// Orientation-preserving isometry (t, e^{i angle}) of Nil3(tau), acting by
// p -> t . rot(angle) p. The rotation fixes the x3-axis.
struct IsometryElement {
  Nil3Point translation;
  double angle = 0.0;
};

Nil3Point apply_isometry(const IsometryElement& g, const Nil3Point& p);
IsometryElement compose_isometry(const IsometryElement& g, const IsometryElement& h);
IsometryElement invert_isometry(const IsometryElement& g);

IsometryElement rotation(double theta, double tau = 0.5);
IsometryElement translation_by(const Nil3Point& t);

// helicoidal motion of pitch mu: ((0,0,mu t), e^{it}); pitch 0 is a rotation
IsometryElement helicoidal_motion(double mu, double t, double tau = 0.5);

} // namespace nilmin

#endif
