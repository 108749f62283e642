#include "nilmin/catalog.hpp"

#include <cmath>
#include <numbers>

namespace nilmin {

namespace {

const cd iu(0.0, 1.0);

TwistedLoop quarter_diagonal(int N) {
  TwistedLoop g = loop_identity(N);
  Mat2 m = Mat2::Zero();
  m(0, 0) = std::polar(1.0, -std::numbers::pi / 4.0);
  m(1, 1) = std::polar(1.0, std::numbers::pi / 4.0);
  g.at(0) = m;
  return g;
}

// constant coefficient of the ruled potential, D = eta / dz
TwistedLoop ruled_coefficient(double a, int N) {
  TwistedLoop d(N);
  d.at(-1)(0, 1) = a;
  d.at(-1)(1, 0) = a;
  d.at(0)(0, 0) = 0.5;
  d.at(0)(1, 1) = -0.5;
  d.at(1)(0, 1) = -a;
  d.at(1)(1, 0) = -a;
  return d;
}

// fixed unitarizable dressing occupying the catenoid slot by default
TwistedLoop default_catenoid_initial(int N) {
  TwistedLoop x(N);
  x.at(1)(0, 1) = 0.5;
  x.at(-1)(1, 0) = 0.5;
  return loop_exp(x);
}

}  // namespace

PotentialSpec catalog_potential(const ExampleSpec& e) {
  PotentialSpec s;
  switch (e.name) {
    case ExampleName::umbrella:
      s.kind = PotentialSpec::Kind::normalized;
      s.p = rational_const(iu);
      s.b = rational_const(cd(0.0, 0.0));
      s.initial = quarter_diagonal(16);
      break;
    case ExampleName::paraboloid:
      s.kind = PotentialSpec::Kind::normalized;
      s.p = rational_const(0.25 * iu);
      s.b = rational_const(cd(1.0 / 16.0, 0.0));
      s.initial = quarter_diagonal(16);
      break;
    case ExampleName::helicoid:
    case ExampleName::catenoid: {
      if (e.a == 0.0)
        throw parameter_error("catalog: ruled examples need a != 0");
      TwistedLoop d = ruled_coefficient(e.a, 1);
      s.kind = PotentialSpec::Kind::holomorphic;
      s.eta = {EtaTerm{-1, {d.coeff(-1)}}, EtaTerm{0, {d.coeff(0)}},
               EtaTerm{1, {d.coeff(1)}}};
      s.initial = e.name == ExampleName::helicoid ? loop_identity(16)
                                                  : default_catenoid_initial(16);
      break;
    }
  }
  if (e.has_initial) s.initial = e.initial;
  s.validate();
  return s;
}

Nil3Point closed_form(const ExampleSpec& e, cd z, cd lambda) {
  if (std::abs(std::abs(lambda) - 1.0) > 1e-9)
    throw parameter_error("closed_form: lambda must have unit modulus");
  if (e.name == ExampleName::umbrella) {
    double s2 = 1.0 - std::norm(z);
    if (s2 <= 0.0)
      throw parameter_error("closed_form: umbrella domain is |z| < 1");
    cd w = z / lambda;
    return Nil3Point{-4.0 * w.real() / s2, -4.0 * w.imag() / s2, 0.0};
  }
  if (e.name == ExampleName::paraboloid) {
    cd q = -iu * z / (4.0 * lambda);
    double x1 = 4.0 * q.imag();
    double x2 = -std::sinh(4.0 * q.real());
    return Nil3Point{x1, x2, 0.5 * x1 * x2};
  }
  throw parameter_error("closed_form: only the umbrella and the paraboloid have one");
}

cd ar_reference(const ExampleSpec& e, cd lambda) {
  cd l2 = lambda * lambda;
  switch (e.name) {
    case ExampleName::umbrella:
      return cd(0.0, 0.0);
    case ExampleName::paraboloid:
      return 1.0 / (8.0 * l2);
    case ExampleName::helicoid:
      return -2.0 * e.a * e.a / l2;
    case ExampleName::catenoid:
      break;
  }
  throw parameter_error("ar_reference: the catenoid slot has no pinned value");
}

void helicoid_monodromy(double a, double k, cd lambda, Mat2& m, Mat2& x,
                        Mat2& y, int N) {
  if (a == 0.0) throw parameter_error("helicoid_monodromy: a must be nonzero");
  if (N < 4) throw parameter_error("helicoid_monodromy: truncation too small");
  if (std::abs(std::abs(lambda) - 1.0) > 1e-9)
    throw parameter_error("helicoid_monodromy: lambda must have unit modulus");
  TwistedLoop d = ruled_coefficient(a, N);
  TwistedLoop ml =
      loop_exp(loop_scale(d, cd(0.0, 2.0 * std::numbers::pi * k)));
  TwistedLoop xl = loop_scale(
      loop_mul(loop_shift(loop_dlambda(ml), 1), loop_inv(ml)), iu);
  TwistedLoop yl = loop_scale(loop_shift(loop_dlambda(xl), 1), iu);
  m = loop_eval(ml, lambda);
  x = loop_eval(xl, lambda);
  y = loop_eval(yl, lambda);
}

IsometryElement helicoid_deck_motion(double a, double k) {
  IsometryElement t = translation_by(Nil3Point{-4.0 * a, 0.0, 0.0});
  IsometryElement h =
      helicoidal_motion(8.0 * a * a, 2.0 * std::numbers::pi * k);
  return compose_isometry(t, compose_isometry(h, invert_isometry(t)));
}

double rotational_defect(const SurfaceFamily& fam, int member,
                         const Nil3Point& axis_base) {
  if (member < 0 || member >= static_cast<int>(fam.meshes.size()))
    throw parameter_error("rotational_defect: no such family member");
  const SurfaceMesh& mesh = fam.meshes[member];
  const SpinorField& sf = fam.spinors[member];
  double worst = 0.0;
  bool any = false;
  for (int j = 0; j < mesh.grid.ny; ++j)
    for (int i = 0; i < mesh.grid.nx; ++i) {
      int k = mesh.grid.index(i, j);
      if (!mesh.defined[k]) continue;
      GeometricData gd = first_order_data(sf.sample(i, j), 0.0);
      if (gd.branch) continue;
      const Nil3Point& p = mesh.points[k];
      double q1 = p.x1 - axis_base.x1;
      double q2 = p.x2 - axis_base.x2;
      Nil3Tangent kf = frame_from_coords(
          p, -q2, q1, p.tau * (axis_base.x1 * q1 + axis_base.x2 * q2));
      double klen = frame_norm(kf);
      if (klen < 1e-9) continue;
      worst = std::max(worst,
                       std::abs(frame_inner(kf, gd.normal)) / klen);
      any = true;
    }
  if (!any) throw consistency_error("rotational_defect: no usable nodes");
  return worst;
}

}  // namespace nilmin
