#include "nilmin/nil3.hpp"

#include <cmath>

namespace nilmin {

Nil3Point nil3_mul(const Nil3Point& p, const Nil3Point& q) {
  if (p.tau != q.tau)
    throw parameter_error("nil3_mul: operands carry different tau");
  Nil3Point r;
  r.tau = p.tau;
  r.x1 = p.x1 + q.x1;
  r.x2 = p.x2 + q.x2;
  r.x3 = p.x3 + q.x3 + p.tau * (p.x1 * q.x2 - q.x1 * p.x2);
  return r;
}

Nil3Point nil3_inv(const Nil3Point& p) {
  return Nil3Point{-p.x1, -p.x2, -p.x3, p.tau};
}

Nil3Point nil3_exp(double v1, double v2, double v3, double tau) {
  return Nil3Point{v1, v2, v3, tau};
}

void nil3_log(const Nil3Point& p, double& v1, double& v2, double& v3) {
  v1 = p.x1;
  v2 = p.x2;
  v3 = p.x3;
}

Eigen::Matrix4d nil3_embed(const Nil3Point& p) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(0, 0) = std::exp(p.x1);
  m(1, 2) = 2.0 * p.tau * p.x1;
  m(1, 3) = p.x3 + p.tau * p.x1 * p.x2;
  m(2, 3) = p.x2;
  return m;
}

Nil3Point nil3_from_embed(const Eigen::Matrix4d& m, double tau) {
  Nil3Point p;
  p.tau = tau;
  p.x1 = std::log(m(0, 0));
  p.x2 = m(2, 3);
  p.x3 = m(1, 3) - tau * p.x1 * p.x2;
  return p;
}

bool tangent_is_real(const Nil3Tangent& t, double tol) {
  return std::abs(t.a1.imag()) <= tol && std::abs(t.a2.imag()) <= tol &&
         std::abs(t.a3.imag()) <= tol;
}

cd frame_inner(const Nil3Tangent& x, const Nil3Tangent& y) {
  return x.a1 * y.a1 + x.a2 * y.a2 + x.a3 * y.a3;
}

double frame_norm(const Nil3Tangent& x) {
  return std::sqrt(std::norm(x.a1) + std::norm(x.a2) + std::norm(x.a3));
}

// frame table: nabla_{e1}e2 = tau e3, nabla_{e1}e3 = -tau e2,
// nabla_{e2}e1 = -tau e3, nabla_{e2}e3 = tau e1,
// nabla_{e3}e1 = -tau e2, nabla_{e3}e2 = tau e1, diagonal entries vanish
Nil3Tangent levi_civita(const Nil3Tangent& x, const Nil3Tangent& y, double tau) {
  Nil3Tangent r;
  r.a1 = tau * (x.a2 * y.a3 + x.a3 * y.a2);
  r.a2 = -tau * (x.a1 * y.a3 + x.a3 * y.a1);
  r.a3 = tau * (x.a1 * y.a2 - x.a2 * y.a1);
  return r;
}

Nil3Tangent brace(const Nil3Tangent& x, const Nil3Tangent& y, double tau) {
  return levi_civita(x, y, tau) + levi_civita(y, x, tau);
}

Nil3Tangent vector_product(const Nil3Tangent& x, const Nil3Tangent& y) {
  Nil3Tangent r;
  r.a1 = x.a2 * y.a3 - x.a3 * y.a2;
  r.a2 = x.a3 * y.a1 - x.a1 * y.a3;
  r.a3 = x.a1 * y.a2 - x.a2 * y.a1;
  return r;
}

Nil3Tangent frame_from_coords(const Nil3Point& at, double v1, double v2, double v3) {
  Nil3Tangent t;
  t.a1 = v1;
  t.a2 = v2;
  t.a3 = v3 + at.tau * (at.x2 * v1 - at.x1 * v2);
  return t;
}

void coords_from_frame(const Nil3Point& at, const Nil3Tangent& t, double& v1, double& v2,
                       double& v3) {
  v1 = t.a1.real();
  v2 = t.a2.real();
  v3 = t.a3.real() - at.tau * (at.x2 * v1 - at.x1 * v2);
}

static Nil3Point rotate_point(const Nil3Point& p, double theta) {
  double c = std::cos(theta), s = std::sin(theta);
  return Nil3Point{c * p.x1 - s * p.x2, s * p.x1 + c * p.x2, p.x3, p.tau};
}

Nil3Point apply_isometry(const IsometryElement& g, const Nil3Point& p) {
  return nil3_mul(g.translation, rotate_point(p, g.angle));
}

IsometryElement compose_isometry(const IsometryElement& g, const IsometryElement& h) {
  IsometryElement r;
  r.translation = nil3_mul(g.translation, rotate_point(h.translation, g.angle));
  r.angle = g.angle + h.angle;
  return r;
}

IsometryElement invert_isometry(const IsometryElement& g) {
  IsometryElement r;
  r.angle = -g.angle;
  r.translation = rotate_point(nil3_inv(g.translation), -g.angle);
  return r;
}

IsometryElement rotation(double theta, double tau) {
  return IsometryElement{Nil3Point{0, 0, 0, tau}, theta};
}

IsometryElement translation_by(const Nil3Point& t) {
  return IsometryElement{t, 0.0};
}

IsometryElement helicoidal_motion(double mu, double t, double tau) {
  return IsometryElement{Nil3Point{0, 0, mu * t, tau}, t};
}

} // namespace nilmin
