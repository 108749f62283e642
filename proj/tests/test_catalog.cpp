#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "nilmin/catalog.hpp"
#include "nilmin/frames.hpp"
#include "nilmin/spinors.hpp"

using namespace nilmin;

namespace {

const cd iu(0.0, 1.0);
const double pi = std::numbers::pi;

std::vector<cd> unit_samples(int n) {
  std::vector<cd> s;
  for (int k = 0; k < n; ++k)
    s.push_back(std::polar(1.0, 2.0 * pi * k / n + 0.31));
  return s;
}

double mat_dist(const Mat2& a, const Mat2& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

double point_dist(const Nil3Point& a, const Nil3Point& b) {
  return std::max({std::abs(a.x1 - b.x1), std::abs(a.x2 - b.x2),
                   std::abs(a.x3 - b.x3)});
}

FramePoint frame_at(const PotentialSpec& spec, cd z, int N = 16) {
  TwistedLoop cm = integrate_to(spec, z, N, 1e-12);
  return assemble_frame(cm, conjugate_solution(cm),
                        spec.coefficient_minus1(z));
}

ExampleSpec named(ExampleName n, double a = 0.3) {
  ExampleSpec e;
  e.name = n;
  e.a = a;
  return e;
}

}  // namespace

TEST_CASE("catalog potentials carry their defining data") {
  ExampleSpec um = named(ExampleName::umbrella);
  PotentialSpec pu = catalog_potential(um);
  CHECK(pu.kind == PotentialSpec::Kind::normalized);
  CHECK(std::abs(pu.p.eval(cd(0.7, 0.2)) - iu) < 1e-15);
  CHECK(pu.b.is_zero());
  Mat2 xm = pu.coefficient_minus1(cd(0.3, -0.1));
  Mat2 xm_ref = Mat2::Zero();
  xm_ref(0, 1) = -iu;
  CHECK(mat_dist(xm, xm_ref) < 1e-15);
  Mat2 init = loop_eval(pu.initial, std::polar(1.0, 0.77));
  Mat2 init_ref = Mat2::Zero();
  init_ref(0, 0) = std::polar(1.0, -pi / 4.0);
  init_ref(1, 1) = std::polar(1.0, pi / 4.0);
  CHECK(mat_dist(init, init_ref) < 1e-15);

  PotentialSpec pp = catalog_potential(named(ExampleName::paraboloid));
  CHECK(std::abs(pp.p.eval(cd(0.1, 0.4)) - 0.25 * iu) < 1e-15);
  CHECK(std::abs(pp.b.eval(cd(0.1, 0.4)) - cd(1.0 / 16.0, 0.0)) < 1e-15);
  Mat2 xp = pp.coefficient_minus1(cd(0.0, 0.0));
  Mat2 xp_ref = Mat2::Zero();
  xp_ref(0, 1) = -0.25 * iu;
  xp_ref(1, 0) = -0.25 * iu;
  CHECK(mat_dist(xp, xp_ref) < 1e-15);

  double a = 0.3;
  PotentialSpec ph = catalog_potential(named(ExampleName::helicoid, a));
  CHECK(ph.kind == PotentialSpec::Kind::holomorphic);
  TwistedLoop cf = ph.coefficient(cd(0.4, 0.2), 8);
  Mat2 dm1 = Mat2::Zero(), d0 = Mat2::Zero(), dp1 = Mat2::Zero();
  dm1(0, 1) = a;
  dm1(1, 0) = a;
  d0(0, 0) = 0.5;
  d0(1, 1) = -0.5;
  dp1(0, 1) = -a;
  dp1(1, 0) = -a;
  CHECK(mat_dist(cf.coeff(-1), dm1) < 1e-15);
  CHECK(mat_dist(cf.coeff(0), d0) < 1e-15);
  CHECK(mat_dist(cf.coeff(1), dp1) < 1e-15);
  for (int d = 2; d <= 8; ++d) {
    CHECK(cf.coeff(d).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(cf.coeff(-d).cwiseAbs().maxCoeff() < 1e-15);
  }
  CHECK(mat_dist(loop_eval(ph.initial, std::polar(1.0, 1.3)),
                 Mat2::Identity()) < 1e-15);
  CHECK_THROWS_AS(catalog_potential(named(ExampleName::helicoid, 0.0)),
                  parameter_error);

  PotentialSpec pc = catalog_potential(named(ExampleName::catenoid, a));
  CHECK(pc.kind == PotentialSpec::Kind::holomorphic);
  CHECK(mat_dist(pc.coefficient(cd(0.0, 0.0), 8).coeff(-1), dm1) < 1e-15);
  Mat2 c1 = loop_eval(pc.initial, 1.0);
  Mat2 c2 = loop_eval(pc.initial, iu);
  CHECK(mat_dist(c1, c2) > 0.1);
  CHECK(su11_reality_defect(pc.initial, unit_samples(8)) < 1e-12);
  CHECK(det_defect(pc.initial, unit_samples(8)) < 1e-12);

  ExampleSpec custom = named(ExampleName::catenoid, a);
  custom.initial = loop_identity(12);
  custom.has_initial = true;
  PotentialSpec pcu = catalog_potential(custom);
  CHECK(mat_dist(loop_eval(pcu.initial, iu), Mat2::Identity()) < 1e-15);
}

TEST_CASE("closed forms hit their sample points and domains") {
  ExampleSpec um = named(ExampleName::umbrella);
  for (cd lam : unit_samples(5))
    CHECK(point_dist(closed_form(um, cd(0.0, 0.0), lam),
                     Nil3Point{0.0, 0.0, 0.0}) < 1e-15);
  CHECK(point_dist(closed_form(um, cd(0.5, 0.0), cd(1.0, 0.0)),
                   Nil3Point{-8.0 / 3.0, 0.0, 0.0}) < 1e-13);
  CHECK_THROWS_AS(closed_form(um, cd(1.0, 0.0), cd(1.0, 0.0)),
                  parameter_error);
  CHECK_THROWS_AS(closed_form(um, cd(0.8, 0.7), cd(1.0, 0.0)),
                  parameter_error);
  CHECK_THROWS_AS(closed_form(um, cd(0.1, 0.0), cd(2.0, 0.0)),
                  parameter_error);

  ExampleSpec pa = named(ExampleName::paraboloid);
  CHECK(point_dist(closed_form(pa, cd(1.0, 0.0), cd(1.0, 0.0)),
                   Nil3Point{-1.0, 0.0, 0.0}) < 1e-13);
  CHECK(point_dist(closed_form(pa, cd(0.0, 1.0), cd(1.0, 0.0)),
                   Nil3Point{0.0, -std::sinh(1.0), 0.0}) < 1e-13);
  Nil3Point g = closed_form(pa, cd(0.4, -0.7), std::polar(1.0, 0.9));
  CHECK(std::abs(g.x3 - 0.5 * g.x1 * g.x2) < 1e-13);

  CHECK_THROWS_AS(closed_form(named(ExampleName::helicoid), cd(0.1, 0.1),
                              cd(1.0, 0.0)),
                  parameter_error);
  CHECK_THROWS_AS(closed_form(named(ExampleName::catenoid), cd(0.1, 0.1),
                              cd(1.0, 0.0)),
                  parameter_error);
}

TEST_CASE("the pipeline reproduces the closed forms through the catalog") {
  std::vector<cd> lams = {cd(1.0, 0.0), std::polar(1.0, pi / 4.0), iu};
  std::vector<cd> zs = {cd(0.3, 0.2), cd(-0.35, -0.15)};
  for (ExampleName nm : {ExampleName::umbrella, ExampleName::paraboloid}) {
    ExampleSpec e = named(nm);
    PotentialSpec spec = catalog_potential(e);
    for (cd z : zs) {
      FramePoint fp = frame_at(spec, z);
      REQUIRE(fp.ok);
      for (cd lam : lams)
        CHECK(point_dist(sym_point(fp.frame, lam), closed_form(e, z, lam)) <
              1e-8);
    }
  }
}

TEST_CASE("monodromy of the vertical strip shift") {
  double a = 0.3;
  for (double k : {0.25, 0.5, 1.0}) {
    Mat2 m, x, y;
    helicoid_monodromy(a, k, cd(1.0, 0.0), m, x, y);

    cd ep = std::exp(iu * pi * k);
    Mat2 m_ref = Mat2::Zero();
    m_ref(0, 0) = ep;
    m_ref(1, 1) = 1.0 / ep;
    CHECK(mat_dist(m, m_ref) < 1e-10);

    cd e2 = ep * ep;
    Mat2 x_ref = Mat2::Zero();
    x_ref(0, 1) = 2.0 * iu * a * (1.0 - e2);
    x_ref(1, 0) = -2.0 * iu * a * (1.0 - 1.0 / e2);
    CHECK(mat_dist(x, x_ref) < 1e-10);

    cd s = e2 - 1.0 / e2 - 4.0 * pi * iu * k;
    Mat2 y_ref = Mat2::Zero();
    y_ref(0, 0) = 4.0 * a * a * s;
    y_ref(1, 1) = -4.0 * a * a * s;
    CHECK(mat_dist(y, y_ref) < 1e-10);
  }

  Mat2 m1, x1, y1;
  helicoid_monodromy(a, 1.0, cd(1.0, 0.0), m1, x1, y1);
  CHECK(mat_dist(m1, -Mat2::Identity()) < 1e-10);
  CHECK(x1.cwiseAbs().maxCoeff() < 1e-10);

  // unit circle membership and the defining derivative relations at a
  // second spectral value, differentiated numerically along the circle
  cd lam = std::polar(1.0, pi / 4.0);
  double k = 0.4;
  Mat2 m, x, y;
  helicoid_monodromy(a, k, lam, m, x, y);
  CHECK(std::abs(m.determinant() - 1.0) < 1e-10);
  Mat2 rel = sigma3() * m.adjoint() * sigma3() * m;
  CHECK(mat_dist(rel, Mat2::Identity()) < 1e-10);

  double h = 1e-4;
  Mat2 mp, xp, yp, mm, xm, ym, dump;
  helicoid_monodromy(a, k, lam * std::polar(1.0, h), mp, xp, yp);
  helicoid_monodromy(a, k, lam * std::polar(1.0, -h), mm, xm, ym);
  Mat2 dm_dtheta = (mp - mm) / (2.0 * h);
  CHECK(mat_dist(dm_dtheta * m.inverse(), x) < 1e-6);
  Mat2 dx_dtheta = (xp - xm) / (2.0 * h);
  CHECK(mat_dist(dx_dtheta, y) < 1e-6);

  CHECK_THROWS_AS(helicoid_monodromy(0.0, 0.5, cd(1.0, 0.0), m, x, y),
                  parameter_error);
  CHECK_THROWS_AS(helicoid_monodromy(a, 0.5, cd(0.5, 0.0), m, x, y),
                  parameter_error);
}

TEST_CASE("the deck motion carries the ruled surface onto its shift") {
  double a = 0.3, k = 0.25;
  PotentialSpec spec = catalog_potential(named(ExampleName::helicoid, a));
  GridSpec grid;
  grid.nx = grid.ny = 9;
  grid.half_width_x = grid.half_width_y = 0.3;
  std::vector<cd> lams = {cd(1.0, 0.0)};
  SurfaceMesh base = sample_surface(spec, grid, lams, 20)[0];

  GridSpec shifted = grid;
  shifted.center = grid.center + 2.0 * pi * iu * k;
  SurfaceMesh moved = sample_surface(spec, shifted, lams, 20)[0];

  IsometryElement deck = helicoid_deck_motion(a, k);
  int used = 0;
  double worst = 0.0;
  for (int n = 0; n < grid.size(); ++n) {
    if (!base.defined[n] || !moved.defined[n]) continue;
    ++used;
    worst = std::max(
        worst, point_dist(apply_isometry(deck, base.points[n]), moved.points[n]));
  }
  CHECK(used >= grid.size() * 9 / 10);
  CHECK(worst < 1e-4);

  // a full turn is the central vertical translation by 16 pi a^2
  IsometryElement full = helicoid_deck_motion(a, 1.0);
  Nil3Point probe{0.37, -1.2, 0.52};
  Nil3Point lift = apply_isometry(full, probe);
  CHECK(std::abs(lift.x1 - probe.x1) < 1e-12);
  CHECK(std::abs(lift.x2 - probe.x2) < 1e-12);
  CHECK(std::abs(lift.x3 - probe.x3 - 16.0 * pi * a * a) < 1e-12);
}

TEST_CASE("quadratic differential references agree with the frames") {
  ExampleSpec um = named(ExampleName::umbrella);
  ExampleSpec pa = named(ExampleName::paraboloid);
  ExampleSpec he = named(ExampleName::helicoid, 0.3);
  for (cd lam : unit_samples(4)) {
    CHECK(std::abs(ar_reference(um, lam)) < 1e-15);
    CHECK(std::abs(ar_reference(pa, lam) - 1.0 / (8.0 * lam * lam)) < 1e-15);
    CHECK(std::abs(ar_reference(he, lam) + 0.18 / (lam * lam)) < 1e-15);
  }
  CHECK_THROWS_AS(ar_reference(named(ExampleName::catenoid), cd(1.0, 0.0)),
                  parameter_error);

  FramePoint fp = frame_at(catalog_potential(pa), cd(0.2, 0.1));
  REQUIRE(fp.ok);
  for (cd lam : {cd(1.0, 0.0), std::polar(1.0, pi / 4.0)})
    CHECK(std::abs(2.0 * fp.ar_b / (lam * lam) - ar_reference(pa, lam)) <
          1e-10);

  FramePoint fh = frame_at(catalog_potential(he), cd(0.15, -0.1), 20);
  REQUIRE(fh.ok);
  CHECK(std::abs(2.0 * fh.ar_b - ar_reference(he, cd(1.0, 0.0))) < 1e-8);

  FramePoint fu = frame_at(catalog_potential(um), cd(0.2, -0.3));
  REQUIRE(fu.ok);
  CHECK(std::abs(fu.ar_b) < 1e-10);
}

TEST_CASE("every catalog surface is minimal") {
  std::vector<cd> lams = {cd(1.0, 0.0)};
  GridSpec grid;
  grid.nx = grid.ny = 21;
  grid.half_width_x = grid.half_width_y = 0.1;
  for (ExampleName nm : {ExampleName::umbrella, ExampleName::paraboloid,
                         ExampleName::helicoid, ExampleName::catenoid}) {
    ExampleSpec e = named(nm);
    PotentialSpec spec = catalog_potential(e);
    int N = spec.kind == PotentialSpec::Kind::holomorphic ? 20 : 16;
    SurfaceMesh mesh = sample_surface(spec, grid, lams, N)[0];
    int defined = 0;
    for (uint8_t d : mesh.defined) defined += d;
    CHECK(defined == grid.size());
    MeanCurvatureField mc = mean_curvature_from_mesh(mesh);
    CHECK(mc.max_abs() < 1e-3);
  }
}

TEST_CASE("the rotational detector separates the presets") {
  std::vector<cd> lams = {cd(1.0, 0.0)};

  GridSpec wide;
  wide.nx = wide.ny = 15;
  wide.half_width_x = wide.half_width_y = 0.45;
  SurfaceFamily um = sample_family(
      catalog_potential(named(ExampleName::umbrella)), wide, lams, 16);
  CHECK(rotational_defect(um) < 1e-8);
  CHECK(rotational_defect(um, 0, Nil3Point{0.5, 0.0, 0.0}) > 1e-2);

  GridSpec grid;
  grid.nx = grid.ny = 11;
  grid.half_width_x = grid.half_width_y = 0.3;
  SurfaceFamily pa = sample_family(
      catalog_potential(named(ExampleName::paraboloid)), grid, lams, 16);
  CHECK(rotational_defect(pa) > 1e-2);

  SurfaceFamily he = sample_family(
      catalog_potential(named(ExampleName::helicoid, 0.3)), grid, lams, 20);
  CHECK(rotational_defect(he) > 1e-2);

  SurfaceFamily ca = sample_family(
      catalog_potential(named(ExampleName::catenoid, 0.3)), grid, lams, 20);
  double dc = rotational_defect(ca);
  CHECK(std::isfinite(dc));
  CHECK(dc >= 0.0);
}
