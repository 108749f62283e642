#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nilmin/nil3.hpp"

using namespace nilmin;

namespace {

std::mt19937 rng(20260817u);

double uniform(double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng);
}

Nil3Point random_point(double tau = 0.5) {
  return Nil3Point{uniform(-2, 2), uniform(-2, 2), uniform(-2, 2), tau};
}

double dist3(const Nil3Point& p, const Nil3Point& q) {
  return std::max({std::abs(p.x1 - q.x1), std::abs(p.x2 - q.x2), std::abs(p.x3 - q.x3)});
}

} // namespace

TEST_CASE("group law: identity, hand value, inverses") {
  Nil3Point e{0, 0, 0, 0.5};
  Nil3Point a{1.3, -0.4, 2.2, 0.5};
  CHECK(dist3(nil3_mul(e, a), a) == doctest::Approx(0.0));
  CHECK(dist3(nil3_mul(a, e), a) == doctest::Approx(0.0));

  Nil3Point p{1, 2, 3, 0.5}, q{4, 5, 6, 0.5};
  Nil3Point r = nil3_mul(p, q);
  CHECK(r.x1 == doctest::Approx(5.0));
  CHECK(r.x2 == doctest::Approx(7.0));
  CHECK(r.x3 == doctest::Approx(7.5));

  CHECK(nil3_inv(e).x3 == 0.0);
  Nil3Point pi = nil3_inv(p);
  CHECK(pi.x1 == -1.0);
  CHECK(pi.x2 == -2.0);
  CHECK(pi.x3 == -3.0);

  for (int i = 0; i < 50; ++i) {
    Nil3Point x = random_point();
    CHECK(dist3(nil3_mul(x, nil3_inv(x)), e) < 1e-14);
    CHECK(dist3(nil3_mul(nil3_inv(x), x), e) < 1e-14);
  }
}

TEST_CASE("group law is associative for random triples and general tau") {
  for (double tau : {0.5, 1.0, -0.3}) {
    for (int i = 0; i < 40; ++i) {
      Nil3Point a = random_point(tau), b = random_point(tau), c = random_point(tau);
      Nil3Point l = nil3_mul(nil3_mul(a, b), c);
      Nil3Point r = nil3_mul(a, nil3_mul(b, c));
      CHECK(dist3(l, r) < 1e-13);
    }
  }
}

TEST_CASE("mismatched tau is rejected") {
  Nil3Point a{1, 0, 0, 0.5}, b{0, 1, 0, 1.0};
  CHECK_THROWS_AS(nil3_mul(a, b), parameter_error);
}

TEST_CASE("exp and log are mutually inverse in exponential coordinates") {
  for (int i = 0; i < 20; ++i) {
    double v1 = uniform(-3, 3), v2 = uniform(-3, 3), v3 = uniform(-3, 3);
    Nil3Point p = nil3_exp(v1, v2, v3);
    double w1, w2, w3;
    nil3_log(p, w1, w2, w3);
    CHECK(w1 == v1);
    CHECK(w2 == v2);
    CHECK(w3 == v3);
  }
}

TEST_CASE("matrix embedding: identity, entries, homomorphism, round trip") {
  Nil3Point e{0, 0, 0, 0.5};
  CHECK((nil3_embed(e) - Eigen::Matrix4d::Identity()).norm() == doctest::Approx(0.0));

  Nil3Point p{1.2, -0.7, 0.9, 0.5};
  Eigen::Matrix4d m = nil3_embed(p);
  CHECK(m(0, 0) == doctest::Approx(std::exp(1.2)));
  CHECK(m(1, 2) == doctest::Approx(2 * 0.5 * 1.2));
  CHECK(m(1, 3) == doctest::Approx(0.9 + 0.5 * 1.2 * (-0.7)));
  CHECK(m(2, 3) == doctest::Approx(-0.7));

  for (int i = 0; i < 50; ++i) {
    Nil3Point a = random_point(), b = random_point();
    Eigen::Matrix4d prod = nil3_embed(a) * nil3_embed(b);
    CHECK((prod - nil3_embed(nil3_mul(a, b))).norm() < 1e-13);
    Nil3Point back = nil3_from_embed(nil3_embed(a));
    CHECK(dist3(back, a) < 1e-13);
  }
}

TEST_CASE("Levi-Civita table and brace") {
  double tau = 0.5;
  Nil3Tangent e1{1, 0, 0}, e2{0, 1, 0}, e3{0, 0, 1};

  Nil3Tangent n12 = levi_civita(e1, e2, tau);
  CHECK(std::abs(n12.a3 - cd(tau)) < 1e-15);
  CHECK(std::abs(n12.a1) < 1e-15);
  CHECK(std::abs(n12.a2) < 1e-15);

  CHECK(frame_norm(levi_civita(e1, e1, tau)) < 1e-15);
  CHECK(std::abs(levi_civita(e1, e3, tau).a2 - cd(-tau)) < 1e-15);
  CHECK(std::abs(levi_civita(e2, e3, tau).a1 - cd(tau)) < 1e-15);

  Nil3Tangent b23 = brace(e2, e3, tau);
  CHECK(std::abs(b23.a1 - cd(2 * tau)) < 1e-15);
  Nil3Tangent b13 = brace(e1, e3, tau);
  CHECK(std::abs(b13.a2 - cd(-2 * tau)) < 1e-15);
  CHECK(frame_norm(brace(e1, e2, tau)) < 1e-15);

  for (int i = 0; i < 20; ++i) {
    Nil3Tangent x{uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)};
    Nil3Tangent lhs = brace(x, x, tau);
    Nil3Tangent rhs = levi_civita(x, x, tau) * 2.0;
    CHECK(frame_norm(lhs - rhs) < 1e-14);
  }
}

TEST_CASE("vector product: orientation, alternation, determinant") {
  Nil3Tangent e1{1, 0, 0}, e2{0, 1, 0}, e3{0, 0, 1};
  CHECK(frame_norm(vector_product(e1, e2) - e3) < 1e-15);
  CHECK(std::abs(frame_inner(vector_product(e2, e3), e1) - cd(1)) < 1e-15);

  for (int i = 0; i < 20; ++i) {
    Nil3Tangent x{uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)};
    CHECK(frame_norm(vector_product(x, x)) < 1e-15);
  }
}

TEST_CASE("pulled-back metric matches the contact-form expression") {
  // push a coordinate tangent at p to the identity by d(L_{p^{-1}}) and take
  // the flat frame product there; the group law is quadratic so centered
  // differences are exact up to roundoff
  double h = 1e-4;
  for (int i = 0; i < 30; ++i) {
    Nil3Point p = random_point();
    double v[3] = {uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)};
    Nil3Point pp{p.x1 + h * v[0], p.x2 + h * v[1], p.x3 + h * v[2], p.tau};
    Nil3Point pm{p.x1 - h * v[0], p.x2 - h * v[1], p.x3 - h * v[2], p.tau};
    Nil3Point ip = nil3_inv(p);
    Nil3Point a = nil3_mul(ip, pp), b = nil3_mul(ip, pm);
    double w1 = (a.x1 - b.x1) / (2 * h);
    double w2 = (a.x2 - b.x2) / (2 * h);
    double w3 = (a.x3 - b.x3) / (2 * h);
    double flat = w1 * w1 + w2 * w2 + w3 * w3;

    Nil3Tangent t = frame_from_coords(p, v[0], v[1], v[2]);
    double viaOmega = frame_inner(t, t).real();
    CHECK(flat == doctest::Approx(viaOmega).epsilon(1e-9));
  }
}

TEST_CASE("isometries: rotation action, composition, metric preservation") {
  IsometryElement rot = rotation(M_PI / 2);
  Nil3Point p{1, 0, 0, 0.5};
  Nil3Point q = apply_isometry(rot, p);
  CHECK(q.x1 == doctest::Approx(0.0));
  CHECK(q.x2 == doctest::Approx(1.0));
  CHECK(q.x3 == doctest::Approx(0.0));

  IsometryElement idm = helicoidal_motion(0.7, 0.0);
  Nil3Point r = random_point();
  CHECK(dist3(apply_isometry(idm, r), r) < 1e-15);

  // one-parameter property rho_s . rho_t = rho_{s+t} for fixed pitch
  double mu = 1.3, s = 0.8, t = -0.45;
  IsometryElement gs = helicoidal_motion(mu, s), gt = helicoidal_motion(mu, t);
  IsometryElement gst = compose_isometry(gs, gt);
  IsometryElement direct = helicoidal_motion(mu, s + t);
  for (int i = 0; i < 10; ++i) {
    Nil3Point x = random_point();
    CHECK(dist3(apply_isometry(gst, x), apply_isometry(direct, x)) < 1e-13);
  }

  // inverse composes to the identity
  IsometryElement g{Nil3Point{0.3, -1.1, 0.6, 0.5}, 0.77};
  IsometryElement gi = invert_isometry(g);
  IsometryElement comp = compose_isometry(g, gi);
  for (int i = 0; i < 10; ++i) {
    Nil3Point x = random_point();
    CHECK(dist3(apply_isometry(comp, x), x) < 1e-13);
  }

  // metric preservation via finite-difference pushforward
  double h = 1e-4;
  for (int i = 0; i < 20; ++i) {
    IsometryElement iso{random_point(), uniform(-3, 3)};
    Nil3Point p0 = random_point();
    double v[3] = {uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)};
    double u[3] = {uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)};

    auto push = [&](const double* dir, double& o1, double& o2, double& o3) {
      Nil3Point pp{p0.x1 + h * dir[0], p0.x2 + h * dir[1], p0.x3 + h * dir[2], p0.tau};
      Nil3Point pm{p0.x1 - h * dir[0], p0.x2 - h * dir[1], p0.x3 - h * dir[2], p0.tau};
      Nil3Point a = apply_isometry(iso, pp), b = apply_isometry(iso, pm);
      o1 = (a.x1 - b.x1) / (2 * h);
      o2 = (a.x2 - b.x2) / (2 * h);
      o3 = (a.x3 - b.x3) / (2 * h);
    };
    double pv[3], pu[3];
    push(v, pv[0], pv[1], pv[2]);
    push(u, pu[0], pu[1], pu[2]);

    Nil3Point img = apply_isometry(iso, p0);
    double before = frame_inner(frame_from_coords(p0, v[0], v[1], v[2]),
                                frame_from_coords(p0, u[0], u[1], u[2]))
                        .real();
    double after = frame_inner(frame_from_coords(img, pv[0], pv[1], pv[2]),
                               frame_from_coords(img, pu[0], pu[1], pu[2]))
                       .real();
    CHECK(before == doctest::Approx(after).epsilon(1e-7));
  }
}

TEST_CASE("Killing field commutators") {
  // generators at tau = 1/2: the rotation field together with the
  // translation-generating fields, labeled so that [E4,E1]=E2, [E4,E2]=-E1,
  // [E1,E2]=E3
  double tau = 0.5;
  auto E1 = [&](const Eigen::Vector3d& x) { return Eigen::Vector3d(0, 1, -tau * x[0]); };
  auto E2 = [&](const Eigen::Vector3d& x) { return Eigen::Vector3d(1, 0, tau * x[1]); };
  auto E3 = [&](const Eigen::Vector3d&) { return Eigen::Vector3d(0, 0, 2 * tau); };
  auto E4 = [&](const Eigen::Vector3d& x) { return Eigen::Vector3d(-x[1], x[0], 0); };

  auto bracket = [](auto X, auto Y, const Eigen::Vector3d& p) {
    // components are affine, so centered differences give the Jacobian exactly
    double h = 1e-5;
    Eigen::Matrix3d DX, DY;
    for (int j = 0; j < 3; ++j) {
      Eigen::Vector3d ej = Eigen::Vector3d::Zero();
      ej[j] = h;
      DX.col(j) = (X(p + ej) - X(p - ej)) / (2 * h);
      DY.col(j) = (Y(p + ej) - Y(p - ej)) / (2 * h);
    }
    return Eigen::Vector3d(DY * X(p) - DX * Y(p));
  };

  for (int i = 0; i < 10; ++i) {
    Eigen::Vector3d p(uniform(-2, 2), uniform(-2, 2), uniform(-2, 2));
    CHECK((bracket(E4, E1, p) - E2(p)).norm() < 1e-9);
    CHECK((bracket(E4, E2, p) + E1(p)).norm() < 1e-9);
    CHECK((bracket(E1, E2, p) - E3(p)).norm() < 1e-9);
    CHECK(bracket(E4, E3, p).norm() < 1e-9);
  }
}
