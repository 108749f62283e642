#include "nilmin/sym.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace nilmin {

namespace {

const double nan_d = std::numeric_limits<double>::quiet_NaN();

Mat2 inv2(const Mat2& m) {
  cd det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  if (std::abs(det) < 1e-12)
    throw noninvertible_error("sym: frame evaluation is singular");
  Mat2 r;
  r << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return r / det;
}

void unit_circle_check(cd lambda, const char* who) {
  if (std::abs(std::abs(lambda) - 1.0) > 1e-9)
    throw parameter_error(std::string(who) +
                          ": spectral parameter must lie on the unit circle");
}

}  // namespace

const Su11Basis& su11_basis() {
  static const Su11Basis b = [] {
    Su11Basis s;
    s.e1 << cd(0, 0), cd(0, 0.5), cd(0, -0.5), cd(0, 0);
    s.e2 << cd(0, 0), cd(-0.5, 0), cd(-0.5, 0), cd(0, 0);
    s.e3 << cd(0, -0.5), cd(0, 0), cd(0, 0), cd(0, 0.5);
    s.sigma = sigma3();
    return s;
  }();
  return b;
}

cd su11_inner(const Mat2& x, const Mat2& y) { return 2.0 * (x * y).trace(); }

Mat2 su11_from_coords(double x1, double x2, double x3) {
  const Su11Basis& b = su11_basis();
  return x1 * b.e1 + x2 * b.e2 + x3 * b.e3;
}

void su11_coords(const Mat2& x, double& x1, double& x2, double& x3) {
  x1 = (cd(0, -1) * (x(0, 1) - x(1, 0))).real();
  x2 = -(x(0, 1) + x(1, 0)).real();
  x3 = (cd(0, 2) * x(0, 0)).real();
}

Nil3Point sym_point(const TwistedLoop& frame, cd lambda) {
  unit_circle_check(lambda, "sym_point");
  Mat2 g = loop_eval(frame, lambda);
  Mat2 gi = inv2(g);
  TwistedLoop d1 = loop_dlambda(frame);
  Mat2 p = lambda * loop_eval(d1, lambda) * gi;
  Mat2 q = (lambda * lambda) * loop_eval(loop_dlambda(d1), lambda) * gi;
  Mat2 s = g * sigma3() * gi;
  cd iu(0.0, 1.0);
  Mat2 m = -iu * (p + 0.5 * s);
  Mat2 md = -iu * (p + q - p * p) + (0.5 * iu) * (s * p - p * s);
  Nil3Point out;
  out.x1 = (-iu * (m(0, 1) - m(1, 0))).real();
  out.x2 = -(m(0, 1) + m(1, 0)).real();
  out.x3 = md(0, 0).real();
  return out;
}

Mat2 sym_normal(const TwistedLoop& frame, cd lambda) {
  unit_circle_check(lambda, "sym_normal");
  Mat2 g = loop_eval(frame, lambda);
  return cd(0.0, 0.5) * (g * sigma3() * inv2(g));
}

GaussMapValue frame_gauss_map(const TwistedLoop& frame, cd lambda,
                              double vertical_tol) {
  GaussMapValue v;
  v.nm = sym_normal(frame, lambda);
  v.disk = -2.0 * v.nm(0, 1) / (1.0 - 2.0 * cd(0, 1) * v.nm(0, 0));
  v.vertical = std::abs(v.disk) > 1.0 - vertical_tol;
  return v;
}

SurfaceFamily family_from_frames(const FrameField& ff,
                                 const std::vector<cd>& lambdas,
                                 double vertical_tol) {
  if (lambdas.empty())
    throw parameter_error(
        "family_from_frames: need at least one spectral parameter");
  for (cd lam : lambdas) unit_circle_check(lam, "family_from_frames");

  SurfaceFamily fam;
  fam.grid = ff.grid;
  fam.lambdas = lambdas;
  int nl = static_cast<int>(lambdas.size());
  fam.meshes.assign(nl, SurfaceMesh(ff.grid));
  fam.spinors.assign(nl, SpinorField(ff.grid));

  const cd eighth = std::polar(1.0, std::numbers::pi / 4.0);
  const GridSpec& g = ff.grid;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      int k = g.index(i, j);
      const FramePoint& fp = ff.pts[k];
      if (!fp.ok) {
        for (int l = 0; l < nl; ++l) {
          fam.meshes[l].points[k] = Nil3Point{nan_d, nan_d, nan_d};
          fam.meshes[l].defined[k] = 0;
        }
        continue;
      }
      // the squared scale of the surface spinors; positive once the phase
      // of the frame is canonical, nonpositive only across vertical loci
      double r2 = 2.0 * fp.dirac_pot.imag();
      double rho = std::sqrt(std::max(r2, 0.0));
      for (int l = 0; l < nl; ++l) {
        cd lam = lambdas[l];
        Mat2 gv = loop_eval(fp.frame, lam);
        cd sq = std::sqrt(lam);
        cd psi1 = eighth * gv(0, 0) * rho / sq;
        cd psi2 = eighth * gv(0, 1) * rho * sq;
        SurfaceMesh& mesh = fam.meshes[l];
        mesh.points[k] = sym_point(fp.frame, lam);
        mesh.defined[k] = 1;
        fam.spinors[l].psi1.v[k] = psi1;
        fam.spinors[l].psi2.v[k] = psi2;
        GeometricData gd =
            first_order_data(SpinorSample{g.z(i, j), psi1, psi2}, 0.0, 1e-13,
                             vertical_tol);
        mesh.conf[k] = gd.conf;
        mesh.support[k] = r2 > 0.0 ? gd.support : 2.0 * r2;
        mesh.vertical[k] = (gd.vertical || r2 <= 0.0) ? 1 : 0;
        mesh.branch[k] = gd.branch ? 1 : 0;
      }
    }
  }
  return fam;
}

SurfaceFamily sample_family(const PotentialSpec& spec, const GridSpec& grid,
                            const std::vector<cd>& lambdas, int N,
                            double step_tol, double cond_threshold,
                            double reality_tol) {
  FrameField ff =
      build_frames(spec, grid, N, step_tol, cond_threshold, reality_tol);
  return family_from_frames(ff, lambdas);
}

std::vector<SurfaceMesh> sample_surface(const PotentialSpec& spec,
                                        const GridSpec& grid,
                                        const std::vector<cd>& lambdas, int N,
                                        double step_tol, double cond_threshold,
                                        double reality_tol) {
  return sample_family(spec, grid, lambdas, N, step_tol, cond_threshold,
                       reality_tol)
      .meshes;
}

FamilyReport associated_family_report(const SurfaceFamily& fam,
                                      double b_floor) {
  int nl = static_cast<int>(fam.lambdas.size());
  if (nl < 1)
    throw parameter_error("associated_family_report: empty family");
  const GridSpec& g = fam.grid;

  FamilyReport rep;
  rep.lambdas = fam.lambdas;
  rep.b_max.assign(nl, 0.0);
  rep.b_ratio.assign(nl, cd(0.0, 0.0));
  rep.ratio_defect.assign(nl, 0.0);
  rep.metric_deviation.assign(nl, 0.0);

  std::vector<uint8_t> ok(g.size(), 1);
  for (const SurfaceMesh& m : fam.meshes)
    for (int k = 0; k < g.size(); ++k)
      if (!m.defined[k]) ok[k] = 0;

  for (int k = 0; k < g.size(); ++k) {
    if (!ok[k]) continue;
    double lo = fam.meshes[0].support[k], hi = lo;
    for (int l = 1; l < nl; ++l) {
      lo = std::min(lo, fam.meshes[l].support[k]);
      hi = std::max(hi, fam.meshes[l].support[k]);
    }
    rep.support_deviation = std::max(rep.support_deviation, hi - lo);
    for (int l = 1; l < nl; ++l)
      rep.metric_deviation[l] =
          std::max(rep.metric_deviation[l],
                   std::abs(fam.meshes[l].conf[k] - fam.meshes[0].conf[k]));
  }

  // the quadratic differential needs derivatives of the spinors, so restrict
  // to interior nodes whose difference stencil is defined in every member
  auto zero_h = [](cd) { return 0.0; };
  std::vector<HopfData> hopf;
  hopf.reserve(nl);
  for (int l = 0; l < nl; ++l) hopf.push_back(hopf_and_ar(fam.spinors[l], zero_h));

  double den_base = 0.0;
  std::vector<cd> num(nl, cd(0.0, 0.0));
  for (int j = 1; j < g.ny - 1; ++j) {
    for (int i = 1; i < g.nx - 1; ++i) {
      int k = g.index(i, j);
      if (!ok[k] || !ok[g.index(i - 1, j)] || !ok[g.index(i + 1, j)] ||
          !ok[g.index(i, j - 1)] || !ok[g.index(i, j + 1)])
        continue;
      cd b0 = hopf[0].ar_b.v[k];
      den_base += std::norm(b0);
      for (int l = 0; l < nl; ++l) {
        cd bl = hopf[l].ar_b.v[k];
        rep.b_max[l] = std::max(rep.b_max[l], std::abs(bl));
        num[l] += bl * std::conj(b0);
      }
    }
  }
  rep.ratio_defined = den_base > 0.0 && rep.b_max[0] > b_floor;
  if (rep.ratio_defined) {
    for (int l = 0; l < nl; ++l) {
      rep.b_ratio[l] = num[l] / den_base;
      cd expect = std::pow(fam.lambdas[l] / fam.lambdas[0], -2.0);
      rep.ratio_defect[l] = std::abs(rep.b_ratio[l] - expect);
    }
  }
  return rep;
}

PhiField phi_from_spinors(const SpinorField& sf,
                          const std::vector<uint8_t>& defined) {
  const GridSpec& g = sf.grid;
  if (!defined.empty() && static_cast<int>(defined.size()) != g.size())
    throw parameter_error("phi_from_spinors: mask size mismatch");
  PhiField phi(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      int k = g.index(i, j);
      if (!defined.empty() && !defined[k]) {
        phi.defined[k] = 0;
        continue;
      }
      Nil3Tangent t = spinors_to_phi(sf.sample(i, j));
      phi.p1.v[k] = t.a1;
      phi.p2.v[k] = t.a2;
      phi.p3.v[k] = t.a3;
    }
  }
  return phi;
}

double conformality_residual(const PhiField& phi) {
  double m = 0.0;
  for (int k = 0; k < phi.grid.size(); ++k) {
    if (!phi.defined[k]) continue;
    cd s = phi.p1.v[k] * phi.p1.v[k] + phi.p2.v[k] * phi.p2.v[k] +
           phi.p3.v[k] * phi.p3.v[k];
    m = std::max(m, std::abs(s));
  }
  return m;
}

double phi_integrability_residual(const PhiField& phi, double tau) {
  const GridSpec& g = phi.grid;
  Field<cd> d1 = d_dzbar(phi.p1), d2 = d_dzbar(phi.p2), d3 = d_dzbar(phi.p3);
  double m = 0.0;
  for (int j = 1; j < g.ny - 1; ++j) {
    for (int i = 1; i < g.nx - 1; ++i) {
      int k = g.index(i, j);
      if (!phi.defined[k] || !phi.defined[g.index(i - 1, j)] ||
          !phi.defined[g.index(i + 1, j)] || !phi.defined[g.index(i, j - 1)] ||
          !phi.defined[g.index(i, j + 1)])
        continue;
      cd r1 = d1.v[k] - std::conj(d1.v[k]);
      cd r2 = d2.v[k] - std::conj(d2.v[k]);
      cd r3 = d3.v[k] - std::conj(d3.v[k]) +
              2.0 * tau *
                  (std::conj(phi.p1.v[k]) * phi.p2.v[k] -
                   std::conj(phi.p2.v[k]) * phi.p1.v[k]);
      m = std::max(m, std::sqrt(std::norm(r1) + std::norm(r2) + std::norm(r3)));
    }
  }
  return m;
}

namespace {

// interpolation weights on n consecutive nodes, local coordinate t measured
// from the first node of the stencil
void lagrange_weights(double t, int n, double* w) {
  for (int a = 0; a < n; ++a) {
    double p = 1.0;
    for (int b = 0; b < n; ++b)
      if (b != a) p *= (t - b) / static_cast<double>(a - b);
    w[a] = p;
  }
}

// degree-five interpolation of the three components at an off-grid point,
// stencil shifted inward at the boundary; false when it touches an
// undefined node
bool phi_sample(const PhiField& phi, cd z, cd out[3]) {
  const GridSpec& g = phi.grid;
  double sx = (z.real() - g.center.real() + g.half_width_x) / g.dx();
  double sy = (z.imag() - g.center.imag() + g.half_width_y) / g.dy();
  int mx = std::min(6, g.nx), my = std::min(6, g.ny);
  int i0 = std::clamp(static_cast<int>(std::floor(sx)) - mx / 2 + 1, 0,
                      g.nx - mx);
  int j0 = std::clamp(static_cast<int>(std::floor(sy)) - my / 2 + 1, 0,
                      g.ny - my);
  double wx[6], wy[6];
  lagrange_weights(sx - i0, mx, wx);
  lagrange_weights(sy - j0, my, wy);
  out[0] = out[1] = out[2] = cd(0.0, 0.0);
  for (int b = 0; b < my; ++b) {
    int j = j0 + b;
    for (int a = 0; a < mx; ++a) {
      int i = i0 + a;
      int k = g.index(i, j);
      if (!phi.defined[k]) return false;
      double w = wx[a] * wy[b];
      out[0] += w * phi.p1.v[k];
      out[1] += w * phi.p2.v[k];
      out[2] += w * phi.p3.v[k];
    }
  }
  return true;
}

// tangent matrix of f' = f * 2 Re(Phi zdot) in the 4x4 model of the group
Eigen::Matrix4d phi_matrix(const cd p[3], cd zdot, double tau) {
  double a1 = 2.0 * (p[0] * zdot).real();
  double a2 = 2.0 * (p[1] * zdot).real();
  double a3 = 2.0 * (p[2] * zdot).real();
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 0) = a1;
  m(1, 2) = 2.0 * tau * a1;
  m(1, 3) = a3;
  m(2, 3) = a2;
  return m;
}

bool integrate_phi_segment(const PhiField& phi, cd za, cd zb, double tau,
                           int nsteps, Eigen::Matrix4d& f) {
  cd zdot = zb - za;
  double h = 1.0 / nsteps;
  for (int s = 0; s < nsteps; ++s) {
    double t0 = s * h;
    cd p0[3], pm[3], p1[3];
    if (!phi_sample(phi, za + t0 * zdot, p0)) return false;
    if (!phi_sample(phi, za + (t0 + 0.5 * h) * zdot, pm)) return false;
    if (!phi_sample(phi, za + (t0 + h) * zdot, p1)) return false;
    Eigen::Matrix4d am = phi_matrix(pm, zdot, tau);
    Eigen::Matrix4d k1 = f * phi_matrix(p0, zdot, tau);
    Eigen::Matrix4d k2 = (f + 0.5 * h * k1) * am;
    Eigen::Matrix4d k3 = (f + 0.5 * h * k2) * am;
    Eigen::Matrix4d k4 = (f + h * k3) * phi_matrix(p1, zdot, tau);
    f += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return true;
}

}  // namespace

Eigen::Matrix4d integrate_phi_path(const PhiField& phi,
                                   const std::vector<cd>& waypoints,
                                   const Eigen::Matrix4d& start, double tau,
                                   int steps_per_cell) {
  if (waypoints.size() < 2)
    throw parameter_error("integrate_phi_path: need at least two waypoints");
  if (steps_per_cell < 1)
    throw parameter_error("integrate_phi_path: steps_per_cell must be positive");
  const GridSpec& g = phi.grid;
  double cell = std::min(g.dx(), g.dy());
  Eigen::Matrix4d f = start;
  for (size_t s = 0; s + 1 < waypoints.size(); ++s) {
    cd za = waypoints[s], zb = waypoints[s + 1];
    int n = std::max(
        1, static_cast<int>(std::ceil(std::abs(zb - za) / cell)) * steps_per_cell);
    if (!integrate_phi_segment(phi, za, zb, tau, n, f))
      throw consistency_error(
          "integrate_phi_path: path crosses undefined nodes");
  }
  return f;
}

SurfaceMesh direct_immersion(const PhiField& phi, const Nil3Point& f0,
                             double conformality_tol, double integrability_tol,
                             int steps_per_cell) {
  const GridSpec& g = phi.grid;
  g.validate();
  if (steps_per_cell < 1)
    throw parameter_error("direct_immersion: steps_per_cell must be positive");
  double cres = conformality_residual(phi);
  if (cres > conformality_tol)
    throw conformality_error("direct_immersion: conformality residual " +
                             std::to_string(cres) + " above tolerance");
  double ires = phi_integrability_residual(phi, f0.tau);
  if (ires > integrability_tol)
    throw consistency_error("direct_immersion: integrability residual " +
                            std::to_string(ires) + " above tolerance");
  int ic = g.nx / 2, jc = g.ny / 2;
  int kc = g.index(ic, jc);
  if (!phi.defined[kc])
    throw grid_error("direct_immersion: base node is undefined");

  Eigen::Matrix4d fbase = nil3_embed(f0);
  cd zc = g.z(ic, jc);
  SurfaceMesh mesh(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      int k = g.index(i, j);
      bool good = phi.defined[k] != 0;
      Eigen::Matrix4d f = fbase;
      if (good) {
        int cells = std::max(std::abs(i - ic), std::abs(j - jc));
        if (cells > 0)
          good = integrate_phi_segment(phi, zc, g.z(i, j), f0.tau,
                                       steps_per_cell * cells, f);
      }
      if (!good) {
        mesh.points[k] = Nil3Point{nan_d, nan_d, nan_d, f0.tau};
        mesh.defined[k] = 0;
        continue;
      }
      mesh.points[k] = nil3_from_embed(f, f0.tau);
      mesh.defined[k] = 1;
      Nil3Tangent t{phi.p1.v[k], phi.p2.v[k], phi.p3.v[k]};
      double scale =
          std::max({std::abs(t.a1), std::abs(t.a2), std::abs(t.a3)});
      if (scale == 0.0) {
        mesh.branch[k] = 1;
        continue;
      }
      SpinorSample sp = phi_to_spinors(t, 1e-6);
      sp.z = g.z(i, j);
      GeometricData gd = first_order_data(sp, 0.0);
      mesh.conf[k] = gd.conf;
      mesh.support[k] = gd.support;
      mesh.vertical[k] = gd.vertical ? 1 : 0;
      mesh.branch[k] = gd.branch ? 1 : 0;
    }
  }
  return mesh;
}

IsometryElement canonical_alignment(const SurfaceMesh& mesh) {
  const GridSpec& g = mesh.grid;
  int ic = g.nx / 2, jc = g.ny / 2;
  if (ic - 1 < 0 || ic + 1 >= g.nx)
    throw grid_error("canonical_alignment: grid too narrow");
  int kc = g.index(ic, jc);
  if (!mesh.defined[kc] || !mesh.defined[g.index(ic - 1, jc)] ||
      !mesh.defined[g.index(ic + 1, jc)])
    throw consistency_error(
        "canonical_alignment: center neighborhood is undefined");
  IsometryElement shift = translation_by(nil3_inv(mesh.points[kc]));
  Nil3Point qp = apply_isometry(shift, mesh.points[g.index(ic + 1, jc)]);
  Nil3Point qm = apply_isometry(shift, mesh.points[g.index(ic - 1, jc)]);
  double dx1 = qp.x1 - qm.x1, dx2 = qp.x2 - qm.x2;
  if (std::hypot(dx1, dx2) < 1e-14)
    throw consistency_error(
        "canonical_alignment: horizontal derivative at the center vanishes");
  double theta = std::atan2(dx2, dx1);
  return compose_isometry(rotation(-theta, mesh.points[kc].tau), shift);
}

SurfaceMesh transformed_mesh(const SurfaceMesh& mesh,
                             const IsometryElement& g) {
  SurfaceMesh out = mesh;
  for (int k = 0; k < mesh.grid.size(); ++k)
    if (mesh.defined[k]) out.points[k] = apply_isometry(g, mesh.points[k]);
  return out;
}

}  // namespace nilmin
