#include "nilmin/spinors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace nilmin {

Nil3Tangent spinors_to_phi(const SpinorSample& s) {
  cd p1sq = s.psi1 * s.psi1;
  cd p2bsq = std::conj(s.psi2) * std::conj(s.psi2);
  return Nil3Tangent{p2bsq - p1sq, cd(0.0, 1.0) * (p2bsq + p1sq),
                     2.0 * s.psi1 * std::conj(s.psi2)};
}

SpinorSample phi_to_spinors(const Nil3Tangent& phi, double tol) {
  double scale =
      std::max({std::abs(phi.a1), std::abs(phi.a2), std::abs(phi.a3)});
  if (scale == 0.0)
    throw parameter_error("phi_to_spinors: zero tangent vector");
  cd null = phi.a1 * phi.a1 + phi.a2 * phi.a2 + phi.a3 * phi.a3;
  if (std::abs(null) > tol * scale * scale)
    throw conformality_error("phi_to_spinors: input is not a null vector");

  cd p1sq = -0.5 * (phi.a1 + cd(0.0, 1.0) * phi.a2);
  cd p2bsq = 0.5 * (phi.a1 - cd(0.0, 1.0) * phi.a2);
  cd psi1, psi2b;
  if (std::abs(p1sq) >= std::abs(p2bsq)) {
    psi1 = std::sqrt(p1sq);
    psi2b = phi.a3 / (2.0 * psi1);
  } else {
    psi2b = std::sqrt(p2bsq);
    psi1 = phi.a3 / (2.0 * psi2b);
  }
  return SpinorSample{cd(0.0, 0.0), psi1, std::conj(psi2b)};
}

void align_spinor_field(SpinorField& field) {
  const GridSpec& g = field.grid;
  auto flip_to_match = [&](int i, int j, int pi, int pj) {
    cd d1 = field.psi1.at(i, j) - field.psi1.at(pi, pj);
    cd d2 = field.psi2.at(i, j) - field.psi2.at(pi, pj);
    cd s1 = field.psi1.at(i, j) + field.psi1.at(pi, pj);
    cd s2 = field.psi2.at(i, j) + field.psi2.at(pi, pj);
    if (std::norm(d1) + std::norm(d2) > std::norm(s1) + std::norm(s2)) {
      field.psi1.at(i, j) *= -1.0;
      field.psi2.at(i, j) *= -1.0;
    }
  };
  for (int i = 1; i < g.nx; ++i) flip_to_match(i, 0, i - 1, 0);
  for (int j = 1; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) flip_to_match(i, j, i, j - 1);
}

GeometricData first_order_data(const SpinorSample& s, double mean_h,
                               double branch_tol, double vertical_tol) {
  double n1 = std::norm(s.psi1);
  double n2 = std::norm(s.psi2);
  double total = n1 + n2;

  GeometricData d;
  d.mean_h = mean_h;
  d.conf = 4.0 * total * total;
  d.support = 2.0 * (n1 - n2);
  d.dirac_potential = cd(-mean_h * total, 0.5 * (n1 - n2));

  if (std::sqrt(n1) <= branch_tol && std::sqrt(n2) <= branch_tol) {
    d.branch = true;
    double nan = std::numeric_limits<double>::quiet_NaN();
    d.gauss = cd(nan, nan);
    return d;
  }

  cd cross = s.psi1 * s.psi2;
  d.normal = Nil3Tangent{cd(2.0 * cross.real(), 0.0), cd(2.0 * cross.imag(), 0.0),
                         cd(n1 - n2, 0.0)} *
             (1.0 / total);
  d.contact_angle = std::acos(std::clamp((n1 - n2) / total, -1.0, 1.0));
  d.vertical = std::abs(n1 - n2) <= vertical_tol * total;
  if (n1 > 0.0) {
    d.gauss = s.psi2 / std::conj(s.psi1);
    d.downward = !d.vertical && n2 > n1;
  } else {
    d.gauss = cd(std::numeric_limits<double>::infinity(), 0.0);
    d.downward = true;
  }
  return d;
}

// the pointwise potential of the first-order system, (i/4)h - (H/2)e^{u/2}
static cd dirac_pot(cd psi1, cd psi2, double mean_h) {
  double n1 = std::norm(psi1);
  double n2 = std::norm(psi2);
  return cd(-mean_h * (n1 + n2), 0.5 * (n1 - n2));
}

double dirac_residual(const SpinorField& field,
                      const std::function<double(cd)>& mean_h) {
  const GridSpec& g = field.grid;
  g.validate();
  Field<cd> dz_psi2 = d_dz(field.psi2);
  Field<cd> dzbar_psi1 = d_dzbar(field.psi1);
  Field<double> res(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      cd u = dirac_pot(field.psi1.at(i, j), field.psi2.at(i, j),
                       mean_h(g.z(i, j)));
      double r1 = std::abs(dz_psi2.at(i, j) + u * field.psi1.at(i, j));
      double r2 = std::abs(-dzbar_psi1.at(i, j) + u * field.psi2.at(i, j));
      res.at(i, j) = std::max(r1, r2);
    }
  return interior_max(res);
}

HopfData hopf_and_ar(const SpinorField& field,
                     const std::function<double(cd)>& mean_h) {
  const GridSpec& g = field.grid;
  g.validate();
  Field<cd> psi2bar(g);
  for (int k = 0; k < g.size(); ++k) psi2bar.v[k] = std::conj(field.psi2.v[k]);
  Field<cd> dz_psi1 = d_dz(field.psi1);
  Field<cd> dz_psi2bar = d_dz(psi2bar);

  HopfData out{Field<cd>(g), Field<cd>(g), Field<cd>(g), 0.0};
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      cd p1 = field.psi1.at(i, j);
      cd p2b = psi2bar.at(i, j);
      cd a = 2.0 * (p1 * dz_psi2bar.at(i, j) - p2b * dz_psi1.at(i, j)) +
             4.0 * cd(0.0, 1.0) * p1 * p1 * p2b * p2b;
      cd phi3 = 2.0 * p1 * p2b;
      cd denom = cd(2.0 * mean_h(g.z(i, j)), 1.0);
      cd ta = a + phi3 * phi3 / denom;
      out.a.at(i, j) = a;
      out.tilde_a.at(i, j) = ta;
      out.ar_b.at(i, j) = 0.25 * denom * ta;
    }
  Field<cd> db = d_dzbar(out.ar_b);
  Field<double> mag(g);
  for (int k = 0; k < g.size(); ++k) mag.v[k] = std::abs(db.v[k]);
  out.holomorphy_residual = interior_max(mag);
  return out;
}

BerdinskyData berdinsky_constraint(cd w, cd w_z, cd w_zbar, cd b, double mean_h) {
  cd hp(2.0 * mean_h, 1.0);
  cd hm(2.0 * mean_h, -1.0);
  cd ew2 = std::exp(0.5 * w);
  cd ewb2 = std::conj(ew2);
  BerdinskyData d;
  d.r = -0.5 * hp * (std::conj(w_zbar) - w_z);
  d.s = hp * ewb2 - hm * ew2;
  d.t = hp * ew2 - hm * ewb2;
  double mod = std::exp(w.real());
  cd lhs_inner = d.r + std::conj(d.r) * b / mod;
  cd lhs = cd(std::norm(lhs_inner), 0.0);
  cd factor = 1.0 - std::norm(b) / (mod * mod);
  cd rhs = -d.s * d.t * factor * factor;
  d.residual = std::abs(lhs - rhs);
  return d;
}

double MeanCurvatureField::max_abs() const {
  double m = 0.0;
  for (int k = 0; k < h.grid.size(); ++k)
    if (defined.v[k]) m = std::max(m, std::abs(h.v[k]));
  return m;
}

MeanCurvatureField mean_curvature_from_mesh(const SurfaceMesh& mesh,
                                            double degenerate_tol) {
  const GridSpec& g = mesh.grid;
  g.validate();

  // phi = f^{-1} f_z read off through the matrix embedding; the embedded
  // algebra basis puts frame components at entries (0,0), (2,3), (1,3)
  std::vector<Eigen::Matrix4d> emb(g.size());
  for (int k = 0; k < g.size(); ++k)
    if (mesh.defined[k]) emb[k] = nil3_embed(mesh.points[k]);

  auto stencil_ok = [&](int i, int j, int di, int dj) {
    for (int s = -1; s <= 1; ++s) {
      int ii = i + s * di, jj = j + s * dj;
      if (ii < 0 || ii >= g.nx || jj < 0 || jj >= g.ny) return false;
      if (!mesh.defined[g.index(ii, jj)]) return false;
    }
    return true;
  };
  auto one_sided_ok = [&](int i, int j, int di, int dj, int depth) {
    for (int s = 0; s <= depth; ++s) {
      int ii = i + s * di, jj = j + s * dj;
      if (ii < 0 || ii >= g.nx || jj < 0 || jj >= g.ny) return false;
      if (!mesh.defined[g.index(ii, jj)]) return false;
    }
    return true;
  };
  auto centered = [&](int i, int j, int di, int dj, double h) {
    return ((emb[g.index(i + di, j + dj)] - emb[g.index(i - di, j - dj)]) /
            (2.0 * h))
        .eval();
  };
  // third-order boundary stencil: differencing phi again later keeps a full
  // order in h only if the boundary values are one order better than the
  // interior ones
  auto one_sided4 = [&](int i, int j, int di, int dj, double h) {
    return ((-11.0 * emb[g.index(i, j)] +
             18.0 * emb[g.index(i + di, j + dj)] -
             9.0 * emb[g.index(i + 2 * di, j + 2 * dj)] +
             2.0 * emb[g.index(i + 3 * di, j + 3 * dj)]) /
            (6.0 * h))
        .eval();
  };
  auto one_sided3 = [&](int i, int j, int di, int dj, double h) {
    return ((-3.0 * emb[g.index(i, j)] + 4.0 * emb[g.index(i + di, j + dj)] -
             emb[g.index(i + 2 * di, j + 2 * dj)]) /
            (2.0 * h))
        .eval();
  };

  Field<Nil3Tangent> phi(g);
  Field<uint8_t> phi_ok(g, uint8_t(0));
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!mesh.defined[g.index(i, j)]) continue;
      Eigen::Matrix4d mx, my;
      if (stencil_ok(i, j, 1, 0)) mx = centered(i, j, 1, 0, g.dx());
      else if (one_sided_ok(i, j, 1, 0, 3)) mx = one_sided4(i, j, 1, 0, g.dx());
      else if (one_sided_ok(i, j, -1, 0, 3)) mx = -one_sided4(i, j, -1, 0, g.dx());
      else if (one_sided_ok(i, j, 1, 0, 2)) mx = one_sided3(i, j, 1, 0, g.dx());
      else if (one_sided_ok(i, j, -1, 0, 2)) mx = -one_sided3(i, j, -1, 0, g.dx());
      else continue;
      if (stencil_ok(i, j, 0, 1)) my = centered(i, j, 0, 1, g.dy());
      else if (one_sided_ok(i, j, 0, 1, 3)) my = one_sided4(i, j, 0, 1, g.dy());
      else if (one_sided_ok(i, j, 0, -1, 3)) my = -one_sided4(i, j, 0, -1, g.dy());
      else if (one_sided_ok(i, j, 0, 1, 2)) my = one_sided3(i, j, 0, 1, g.dy());
      else if (one_sided_ok(i, j, 0, -1, 2)) my = -one_sided3(i, j, 0, -1, g.dy());
      else continue;
      Eigen::Matrix4d inv = nil3_embed(nil3_inv(mesh.points[g.index(i, j)]));
      Eigen::Matrix4d ax = inv * mx;
      Eigen::Matrix4d ay = inv * my;
      cd half(0.5, 0.0), mihalf(0.0, -0.5);
      phi.at(i, j) = Nil3Tangent{half * ax(0, 0) + mihalf * ay(0, 0),
                                 half * ax(2, 3) + mihalf * ay(2, 3),
                                 half * ax(1, 3) + mihalf * ay(1, 3)};
      phi_ok.at(i, j) = 1;
    }

  Field<cd> p1(g), p2(g), p3(g);
  for (int k = 0; k < g.size(); ++k) {
    p1.v[k] = phi.v[k].a1;
    p2.v[k] = phi.v[k].a2;
    p3.v[k] = phi.v[k].a3;
  }
  Field<cd> d1 = d_dzbar(p1), d2 = d_dzbar(p2), d3 = d_dzbar(p3);

  MeanCurvatureField out{Field<double>(g), Field<uint8_t>(g, uint8_t(0))};
  for (int j = 1; j < g.ny - 1; ++j)
    for (int i = 1; i < g.nx - 1; ++i) {
      if (!phi_ok.at(i, j) || !phi_ok.at(i - 1, j) || !phi_ok.at(i + 1, j) ||
          !phi_ok.at(i, j - 1) || !phi_ok.at(i, j + 1))
        continue;
      const Nil3Tangent& f = phi.at(i, j);
      Nil3Tangent fb = f.conj();
      double eu = 2.0 * frame_inner(f, fb).real();
      if (eu <= degenerate_tol) continue;
      Nil3Tangent x = f + fb;
      Nil3Tangent y = cd(0.0, 1.0) * (f - fb);
      Nil3Tangent n = vector_product(x, y);
      double nn = frame_norm(n);
      if (nn <= degenerate_tol) continue;
      n = n * (1.0 / nn);
      Nil3Tangent dzb{d1.at(i, j), d2.at(i, j), d3.at(i, j)};
      double tau = mesh.points[g.index(i, j)].tau;
      Nil3Tangent tension = dzb + dzb.conj() + brace(f, fb, tau);
      out.h.at(i, j) = frame_inner(tension, n).real() / eu;
      out.defined.at(i, j) = 1;
    }
  return out;
}

} // namespace nilmin
