#include "nilmin/verify.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "nilmin/frames.hpp"

namespace nilmin {

namespace {

const double nan_d = std::numeric_limits<double>::quiet_NaN();

bool finite_cd(cd v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

std::vector<cd> circle_samples(int n) {
  std::vector<cd> s;
  for (int k = 0; k < n; ++k)
    s.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / n + 0.31));
  return s;
}

int count_verdict(const VerifyReport& r, const VerifyThresholds& t) {
  int v = 0;
  if (r.dirac_residual > t.dirac) ++v;
  if (r.flatness_residual > t.flatness) ++v;
  if (r.gauss_residual > t.gauss) ++v;
  if (r.ar_holomorphy_residual > t.ar_holomorphy) ++v;
  if (r.mean_h_max > t.mean_h) ++v;
  return v;
}

double zero_h(cd) { return 0.0; }

// join signs of a pointwise-recovered spinor field to an already visited
// defined neighbor; undefined nodes break the chain without poisoning it
void align_masked(SpinorField& f, const std::vector<uint8_t>& ok) {
  const GridSpec& g = f.grid;
  auto match = [&](int k, int kp) {
    cd d1 = f.psi1.v[k] - f.psi1.v[kp], d2 = f.psi2.v[k] - f.psi2.v[kp];
    cd s1 = f.psi1.v[k] + f.psi1.v[kp], s2 = f.psi2.v[k] + f.psi2.v[kp];
    if (std::norm(d1) + std::norm(d2) > std::norm(s1) + std::norm(s2)) {
      f.psi1.v[k] *= -1.0;
      f.psi2.v[k] *= -1.0;
    }
  };
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      int k = g.index(i, j);
      if (!ok[k]) continue;
      if (i > 0 && ok[g.index(i - 1, j)]) match(k, g.index(i - 1, j));
      else if (j > 0 && ok[g.index(i, j - 1)]) match(k, g.index(i, j - 1));
      else if (i > 0 && j > 0 && ok[g.index(i - 1, j - 1)])
        match(k, g.index(i - 1, j - 1));
    }
}

}  // namespace

VerifyReport verify_spinors(const SpinorField& sf,
                            const std::vector<uint8_t>& defined,
                            const VerifyThresholds& t) {
  const GridSpec& g = sf.grid;
  g.validate();
  if (!defined.empty() && static_cast<int>(defined.size()) != g.size())
    throw grid_error("verify_spinors: mask size mismatch");

  SpinorField f = sf;
  const cd qnan(nan_d, nan_d);
  for (int k = 0; k < g.size(); ++k)
    if (!defined.empty() && !defined[k]) {
      f.psi1.v[k] = qnan;
      f.psi2.v[k] = qnan;
    }

  VerifyReport r;
  r.points_total = g.size();
  Field<cd> w(g);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      int k = g.index(i, j);
      w.v[k] = qnan;
      if (!finite_cd(f.psi1.v[k]) || !finite_cd(f.psi2.v[k])) continue;
      ++r.points_defined;
      GeometricData gd = first_order_data(f.sample(i, j), 0.0);
      if (gd.branch) ++r.branch_count;
      if (gd.vertical) ++r.vertical_count;
      lo = std::min(lo, gd.support);
      hi = std::max(hi, gd.support);
      if (!gd.vertical && std::abs(gd.dirac_potential) > 1e-12)
        w.v[k] = 2.0 * std::log(gd.dirac_potential);
    }
  if (r.points_defined == 0)
    throw grid_error("verify_spinors: no defined points");
  r.support_lo = lo;
  r.support_hi = hi;

  r.dirac_residual = dirac_residual(f, zero_h);
  HopfData hd = hopf_and_ar(f, zero_h);
  r.ar_holomorphy_residual = hd.holomorphy_residual;

  AlphaField alpha = build_alpha(w, hd.ar_b);
  r.flatness_residual = flatness_residual(alpha, circle_samples(8));
  r.gauss_residual = gauss_residual(w, hd.ar_b);

  // curvature estimate straight from the first-order system: the real part
  // of the recovered potential is -H (|psi1|^2 + |psi2|^2)
  Field<cd> dzp2 = d_dz(f.psi2);
  Field<cd> dzbp1 = d_dzbar(f.psi1);
  for (int j = 1; j < g.ny - 1; ++j)
    for (int i = 1; i < g.nx - 1; ++i) {
      int k = g.index(i, j);
      if (!finite_cd(f.psi1.v[k]) || !finite_cd(f.psi2.v[k])) continue;
      double n1 = std::norm(f.psi1.v[k]), n2 = std::norm(f.psi2.v[k]);
      double tot = n1 + n2;
      if (tot < 1e-20) continue;
      cd u = n1 >= n2 ? -dzp2.v[k] / f.psi1.v[k] : dzbp1.v[k] / f.psi2.v[k];
      if (!finite_cd(u)) continue;
      r.mean_h_max = std::max(r.mean_h_max, std::abs(u.real() / tot));
    }

  r.verdict = count_verdict(r, t);
  return r;
}

VerifyReport verify_mesh(const SurfaceMesh& mesh, const VerifyThresholds& t) {
  const GridSpec& g = mesh.grid;
  g.validate();

  int defined = 0;
  for (int k = 0; k < g.size(); ++k)
    if (mesh.defined[k]) ++defined;
  if (defined == 0) throw grid_error("verify_mesh: no defined points");

  std::vector<Eigen::Matrix4d> emb(g.size());
  for (int k = 0; k < g.size(); ++k)
    if (mesh.defined[k]) emb[k] = nil3_embed(mesh.points[k]);

  auto ok_run = [&](int i, int j, int di, int dj, int depth) {
    for (int s = 0; s <= depth; ++s) {
      int ii = i + s * di, jj = j + s * dj;
      if (ii < 0 || ii >= g.nx || jj < 0 || jj >= g.ny) return false;
      if (!mesh.defined[g.index(ii, jj)]) return false;
    }
    return true;
  };
  auto deriv = [&](int i, int j, int di, int dj, double h,
                   Eigen::Matrix4d& out) {
    if (ok_run(i, j, di, dj, 1) && ok_run(i, j, -di, -dj, 1)) {
      out = (emb[g.index(i + di, j + dj)] - emb[g.index(i - di, j - dj)]) /
            (2.0 * h);
      return true;
    }
    for (int sgn : {1, -1}) {
      if (!ok_run(i, j, sgn * di, sgn * dj, 3)) continue;
      out = sgn *
            (-11.0 * emb[g.index(i, j)] +
             18.0 * emb[g.index(i + sgn * di, j + sgn * dj)] -
             9.0 * emb[g.index(i + 2 * sgn * di, j + 2 * sgn * dj)] +
             2.0 * emb[g.index(i + 3 * sgn * di, j + 3 * sgn * dj)]) /
            (6.0 * h);
      return true;
    }
    return false;
  };

  SpinorField rec(g);
  std::vector<uint8_t> rec_ok(g.size(), 0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      int k = g.index(i, j);
      if (!mesh.defined[k]) continue;
      Eigen::Matrix4d mx, my;
      if (!deriv(i, j, 1, 0, g.dx(), mx) || !deriv(i, j, 0, 1, g.dy(), my))
        continue;
      Eigen::Matrix4d inv = nil3_embed(nil3_inv(mesh.points[k]));
      Eigen::Matrix4d ax = inv * mx, ay = inv * my;
      cd half(0.5, 0.0), mihalf(0.0, -0.5);
      Nil3Tangent phi{half * ax(0, 0) + mihalf * ay(0, 0),
                      half * ax(2, 3) + mihalf * ay(2, 3),
                      half * ax(1, 3) + mihalf * ay(1, 3)};
      try {
        SpinorSample sp = phi_to_spinors(phi, 0.25);
        rec.psi1.v[k] = sp.psi1;
        rec.psi2.v[k] = sp.psi2;
        rec_ok[k] = 1;
      } catch (const error&) {
      }
    }
  align_masked(rec, rec_ok);

  VerifyReport r = verify_spinors(rec, rec_ok, t);

  // replace the report statistics with the mesh's own columns and measure
  // the curvature on the points directly
  r.points_total = g.size();
  r.points_defined = defined;
  r.vertical_count = 0;
  r.branch_count = 0;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int k = 0; k < g.size(); ++k) {
    if (!mesh.defined[k]) continue;
    if (mesh.vertical[k]) ++r.vertical_count;
    if (mesh.branch[k]) ++r.branch_count;
    lo = std::min(lo, mesh.support[k]);
    hi = std::max(hi, mesh.support[k]);
  }
  r.support_lo = lo;
  r.support_hi = hi;
  MeanCurvatureField mc = mean_curvature_from_mesh(mesh);
  r.mean_h_max = mc.max_abs();
  r.verdict = count_verdict(r, t);
  return r;
}

}  // namespace nilmin
