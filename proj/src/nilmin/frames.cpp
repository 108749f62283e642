#include "nilmin/frames.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

namespace nilmin {

namespace {

using Terms = std::vector<std::pair<int, Mat2>>;

Terms xi_terms(const PotentialSpec& spec, cd z) {
  Terms t;
  if (spec.kind == PotentialSpec::Kind::normalized) {
    t.emplace_back(-1, spec.coefficient_minus1(z));
  } else {
    for (const EtaTerm& e : spec.eta) {
      Mat2 m = e.eval(z);
      bool merged = false;
      for (auto& [d, acc] : t)
        if (d == e.deg) {
          acc += m;
          merged = true;
          break;
        }
      if (!merged) t.emplace_back(e.deg, m);
    }
  }
  return t;
}

// a * (sum_k m_k lambda^{d_k}), sparse in the right factor
TwistedLoop mul_terms(const TwistedLoop& a, const Terms& t) {
  TwistedLoop r(a.N, a.parity);
  r.tail_tol = a.tail_tol;
  r.tail_mass = a.tail_mass;
  for (const auto& [deg, m] : t) {
    for (int d = -a.N; d <= a.N; ++d) {
      const Mat2& c = a.coeff(d);
      if (c.isZero(0.0)) continue;
      Mat2 term = c * m;
      int out = d + deg;
      if (out < -a.N || out > a.N)
        r.tail_mass += term.norm();
      else
        r.at(out) += term;
    }
  }
  if (r.tail_mass > r.tail_tol)
    throw truncation_error("integration: discarded tail mass exceeds tolerance");
  return r;
}

TwistedLoop loop_axpy(const TwistedLoop& a, const TwistedLoop& b, cd s) {
  TwistedLoop r = a;
  for (int d = -r.N; d <= r.N; ++d) r.at(d) += s * b.coeff(d);
  r.tail_mass += std::abs(s) * b.tail_mass;
  return r;
}

TwistedLoop rk4_steps(const PotentialSpec& spec, TwistedLoop c, cd za, cd zb,
                      int n) {
  cd h = (zb - za) / double(n);
  for (int k = 0; k < n; ++k) {
    cd z0 = za + h * double(k);
    cd zm = z0 + 0.5 * h;
    cd z1 = z0 + h;
    Terms xa = xi_terms(spec, z0);
    Terms xm = xi_terms(spec, zm);
    Terms xb = xi_terms(spec, z1);
    TwistedLoop k1 = mul_terms(c, xa);
    TwistedLoop k2 = mul_terms(loop_axpy(c, k1, 0.5 * h), xm);
    TwistedLoop k3 = mul_terms(loop_axpy(c, k2, 0.5 * h), xm);
    TwistedLoop k4 = mul_terms(loop_axpy(c, k3, h), xb);
    c = loop_axpy(c, k1, h / 6.0);
    c = loop_axpy(c, k2, h / 3.0);
    c = loop_axpy(c, k3, h / 3.0);
    c = loop_axpy(c, k4, h / 6.0);
  }
  return c;
}

TwistedLoop integrate_segment(const PotentialSpec& spec, const TwistedLoop& c,
                              cd za, cd zb, double step_tol) {
  if (za == zb) return c;
  int n = 1;
  TwistedLoop coarse = rk4_steps(spec, c, za, zb, n);
  for (;;) {
    TwistedLoop fine = rk4_steps(spec, c, za, zb, 2 * n);
    double err = loop_norm(loop_axpy(fine, coarse, cd(-1.0, 0.0))) / 15.0;
    if (err <= step_tol * std::max(1.0, loop_norm(fine))) return fine;
    n *= 2;
    if (n > (1 << 20))
      throw stiffness_error("integration: step size underflow");
    coarse = std::move(fine);
  }
}

Mat2 phase_power(int k) {
  Mat2 g = Mat2::Zero();
  g(0, 0) = std::polar(1.0, -k * std::numbers::pi / 4.0);
  g(1, 1) = std::polar(1.0, k * std::numbers::pi / 4.0);
  return g;
}

TwistedLoop mul_const_right(const TwistedLoop& a, const Mat2& m) {
  TwistedLoop r = a;
  for (Mat2& c : r.c) c = c * m;
  return r;
}

// power of the quarter turn placing i^k * d in the upper sector
// |Re| <= Im, so e^{w/2} comes out purely imaginary with positive part
int phase_choice(cd d) {
  if (d == cd(0.0, 0.0)) return 0;
  const double h = std::numbers::pi / 2.0;
  long k = std::lround((h - std::arg(d)) / h);
  return static_cast<int>(((k % 4) + 4) % 4);
}

void apply_phase_fix(FramePoint& pt, int k) {
  static const cd ipow[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
  pt.frame = mul_const_right(pt.frame, phase_power(k));
  pt.dirac_pot *= ipow[k & 3];
  pt.gauge.phase = k;
  pt.gauge.phase_fixed = true;
}

}  // namespace

TwistedLoop integrate_to(const PotentialSpec& spec, cd target, int N,
                         double step_tol) {
  spec.validate();
  TwistedLoop c = loop_resize(spec.initial, N);
  return integrate_segment(spec, c, spec.base_point, target, step_tol);
}

TwistedLoop integrate_along(const PotentialSpec& spec,
                            const std::vector<cd>& waypoints, int N,
                            double step_tol) {
  spec.validate();
  if (waypoints.empty() || waypoints.front() != spec.base_point)
    throw parameter_error("integrate_along: path must start at the base point");
  TwistedLoop c = loop_resize(spec.initial, N);
  for (size_t k = 0; k + 1 < waypoints.size(); ++k)
    c = integrate_segment(spec, c, waypoints[k], waypoints[k + 1], step_tol);
  return c;
}

PotentialField integrate_potential(const PotentialSpec& spec,
                                   const GridSpec& grid, int N,
                                   double step_tol) {
  spec.validate();
  grid.validate();
  PotentialField out{grid, N, std::vector<TwistedLoop>(grid.size(), TwistedLoop(N))};
  int ic = grid.nx / 2, jc = grid.ny / 2;
  TwistedLoop base = loop_resize(spec.initial, N);
  out.cminus[grid.index(ic, jc)] =
      integrate_segment(spec, base, spec.base_point, grid.z(ic, jc), step_tol);
  for (int j = jc + 1; j < grid.ny; ++j)
    out.cminus[grid.index(ic, j)] =
        integrate_segment(spec, out.cminus[grid.index(ic, j - 1)],
                          grid.z(ic, j - 1), grid.z(ic, j), step_tol);
  for (int j = jc - 1; j >= 0; --j)
    out.cminus[grid.index(ic, j)] =
        integrate_segment(spec, out.cminus[grid.index(ic, j + 1)],
                          grid.z(ic, j + 1), grid.z(ic, j), step_tol);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = ic + 1; i < grid.nx; ++i)
      out.cminus[grid.index(i, j)] =
          integrate_segment(spec, out.cminus[grid.index(i - 1, j)],
                            grid.z(i - 1, j), grid.z(i, j), step_tol);
    for (int i = ic - 1; i >= 0; --i)
      out.cminus[grid.index(i, j)] =
          integrate_segment(spec, out.cminus[grid.index(i + 1, j)],
                            grid.z(i + 1, j), grid.z(i, j), step_tol);
  }
  return out;
}

TwistedLoop conjugate_solution(const TwistedLoop& cminus) {
  return su11_dual(cminus);
}

TwistedLoop omega0(int N) {
  Mat2 up = Mat2::Zero(), dn = Mat2::Zero();
  up(0, 1) = 1.0;
  dn(1, 0) = -1.0;
  return loop_add(loop_monomial(1, up, N), loop_monomial(-1, dn, N));
}

FramePoint assemble_frame(const TwistedLoop& cminus, const TwistedLoop& cplus,
                          const Mat2& xi_m1, double cond_threshold,
                          double reality_tol, bool phase_fix) {
  FramePoint pt;
  TwistedLoop w = loop_mul(loop_inv(cminus), cplus);
  FactorPair fac = birkhoff(w, cond_threshold);
  cd v = fac.minus.coeff(0)(0, 0);
  if (std::abs(v.imag()) > reality_tol * std::max(1.0, std::abs(v)))
    throw consistency_error("assemble_frame: gauge constant is not real");
  double vr = v.real();
  if (std::abs(vr) < 1e-12)
    throw consistency_error("assemble_frame: degenerate gauge constant");
  double s = std::sqrt(std::abs(vr));
  Mat2 d = Mat2::Zero();
  d(0, 0) = 1.0 / s;
  d(1, 1) = s;
  pt.frame = mul_const_right(loop_mul(cminus, fac.plus), d);
  if (vr < 0.0) pt.frame = loop_mul(omega0(pt.frame.N), pt.frame);
  pt.gauge.vminus = vr;
  pt.gauge.omega = vr < 0.0;
  pt.gauge.cond = fac.cond;
  // lambda^{-1} coefficient of the Maurer-Cartan form is D^{-1} xi_m1 D
  pt.dirac_pot = -xi_m1(0, 1) * std::abs(vr);
  pt.ar_b = -xi_m1(0, 1) * xi_m1(1, 0);
  pt.ok = true;
  if (phase_fix) {
    int k = phase_choice(pt.dirac_pot);
    if (k != 0) apply_phase_fix(pt, k);
  }
  return pt;
}

FrameField build_frames(const PotentialSpec& spec, const GridSpec& grid, int N,
                        double step_tol, double cond_threshold,
                        double reality_tol) {
  PotentialField pf = integrate_potential(spec, grid, N, step_tol);
  FrameField ff{grid, N, std::vector<FramePoint>(grid.size())};
  for (int k = 0; k < grid.size(); ++k) {
    try {
      Mat2 xi = spec.coefficient_minus1(
          grid.z(k % grid.nx, k / grid.nx));
      ff.pts[k] = assemble_frame(pf.cminus[k], conjugate_solution(pf.cminus[k]),
                                 xi, cond_threshold, reality_tol, false);
    } catch (const big_cell_error&) {
      ff.pts[k].ok = false;
    }
  }
  // one global phase decision, taken nearest the base point
  int pick = -1;
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      int k = grid.index(i, j);
      if (!ff.pts[k].ok) continue;
      double dist = std::abs(grid.z(i, j) - spec.base_point);
      if (dist < best) {
        best = dist;
        pick = k;
      }
    }
  if (pick >= 0) {
    int k = phase_choice(ff.pts[pick].dirac_pot);
    if (k != 0)
      for (FramePoint& pt : ff.pts)
        if (pt.ok) apply_phase_fix(pt, k);
  }
  return ff;
}

Field<cd> dirac_field(const FrameField& ff) {
  Field<cd> f(ff.grid);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int k = 0; k < ff.grid.size(); ++k)
    f.v[k] = ff.pts[k].ok ? ff.pts[k].dirac_pot : cd(nan, nan);
  return f;
}

Field<cd> b_field(const FrameField& ff) {
  Field<cd> f(ff.grid);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int k = 0; k < ff.grid.size(); ++k)
    f.v[k] = ff.pts[k].ok ? ff.pts[k].ar_b : cd(nan, nan);
  return f;
}

Field<cd> w_field(const FrameField& ff, double vertical_tol) {
  Field<cd> f(ff.grid);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int k = 0; k < ff.grid.size(); ++k) {
    const FramePoint& pt = ff.pts[k];
    if (!pt.ok || std::abs(pt.dirac_pot) <= vertical_tol)
      f.v[k] = cd(nan, nan);
    else
      f.v[k] = 2.0 * std::log(pt.dirac_pot);
  }
  return f;
}

namespace {

bool finite(cd v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

AlphaField build_alpha(const Field<cd>& w, const Field<cd>& b) {
  const GridSpec& g = w.grid;
  g.validate();
  if (b.grid.nx != g.nx || b.grid.ny != g.ny)
    throw grid_error("build_alpha: field grids disagree");
  Field<cd> wz = d_dz(w), wzb = d_dzbar(w);
  AlphaField out{g, std::vector<TwistedLoop>(g.size(), TwistedLoop(2)),
                 std::vector<TwistedLoop>(g.size(), TwistedLoop(2)),
                 std::vector<uint8_t>(g.size(), 0)};
  for (int k = 0; k < g.size(); ++k) {
    if (!finite(w.v[k]) || !finite(wz.v[k]) || !finite(wzb.v[k]) ||
        !finite(b.v[k]))
      continue;
    cd e = std::exp(0.5 * w.v[k]);
    cd ei = std::exp(-0.5 * w.v[k]);
    Mat2 um = Mat2::Zero(), u0 = Mat2::Zero(), v0 = Mat2::Zero(),
         vp = Mat2::Zero();
    um(0, 1) = -e;
    um(1, 0) = b.v[k] * ei;
    u0(0, 0) = 0.25 * wz.v[k];
    u0(1, 1) = -0.25 * wz.v[k];
    v0(0, 0) = -0.25 * wzb.v[k];
    v0(1, 1) = 0.25 * wzb.v[k];
    vp(0, 1) = -std::conj(b.v[k]) * ei;
    vp(1, 0) = e;
    out.u[k].at(-1) = um;
    out.u[k].at(0) = u0;
    out.v[k].at(0) = v0;
    out.v[k].at(1) = vp;
    out.defined[k] = 1;
  }
  return out;
}

double flatness_residual(const AlphaField& alpha,
                         const std::vector<cd>& lambdas) {
  const GridSpec& g = alpha.grid;
  double hx = g.dx(), hy = g.dy();
  double worst = 0.0;
  // stay two cells away from the boundary: the outermost slot values come
  // from one-sided stencils and would pollute the centered differences here
  for (int j = 2; j < g.ny - 2; ++j) {
    for (int i = 2; i < g.nx - 2; ++i) {
      int k = g.index(i, j);
      if (!alpha.defined[k] || !alpha.defined[g.index(i - 1, j)] ||
          !alpha.defined[g.index(i + 1, j)] ||
          !alpha.defined[g.index(i, j - 1)] ||
          !alpha.defined[g.index(i, j + 1)])
        continue;
      // d_zbar U = (U_x + i U_y)/2, d_z V = (V_x - i V_y)/2
      TwistedLoop ux = loop_scale(
          loop_axpy(alpha.u[g.index(i + 1, j)], alpha.u[g.index(i - 1, j)],
                    cd(-1.0, 0.0)),
          1.0 / (2.0 * hx));
      TwistedLoop uy = loop_scale(
          loop_axpy(alpha.u[g.index(i, j + 1)], alpha.u[g.index(i, j - 1)],
                    cd(-1.0, 0.0)),
          1.0 / (2.0 * hy));
      TwistedLoop vx = loop_scale(
          loop_axpy(alpha.v[g.index(i + 1, j)], alpha.v[g.index(i - 1, j)],
                    cd(-1.0, 0.0)),
          1.0 / (2.0 * hx));
      TwistedLoop vy = loop_scale(
          loop_axpy(alpha.v[g.index(i, j + 1)], alpha.v[g.index(i, j - 1)],
                    cd(-1.0, 0.0)),
          1.0 / (2.0 * hy));
      TwistedLoop uzb = loop_scale(loop_axpy(ux, uy, cd(0.0, 1.0)), 0.5);
      TwistedLoop vz = loop_scale(loop_axpy(vx, vy, cd(0.0, -1.0)), 0.5);
      TwistedLoop bracket = loop_axpy(loop_mul(alpha.v[k], alpha.u[k]),
                                      loop_mul(alpha.u[k], alpha.v[k]),
                                      cd(-1.0, 0.0));
      TwistedLoop res = loop_axpy(loop_axpy(uzb, vz, cd(-1.0, 0.0)), bracket,
                                  cd(1.0, 0.0));
      for (cd lam : lambdas)
        worst = std::max(worst, loop_eval(res, lam).norm());
    }
  }
  return worst;
}

double gauss_residual(const Field<cd>& w, const Field<cd>& b) {
  const GridSpec& g = w.grid;
  g.validate();
  if (b.grid.nx != g.nx || b.grid.ny != g.ny)
    throw grid_error("gauss_residual: field grids disagree");
  double hx = g.dx(), hy = g.dy();
  double worst = 0.0;
  for (int j = 1; j < g.ny - 1; ++j) {
    for (int i = 1; i < g.nx - 1; ++i) {
      cd wc = w.at(i, j);
      cd wxx = (w.at(i + 1, j) - 2.0 * wc + w.at(i - 1, j)) / (hx * hx);
      cd wyy = (w.at(i, j + 1) - 2.0 * wc + w.at(i, j - 1)) / (hy * hy);
      cd bb = b.at(i, j);
      if (!finite(wc) || !finite(wxx) || !finite(wyy) || !finite(bb)) continue;
      cd wzzb = 0.25 * (wxx + wyy);
      double bn = std::abs(bb);
      cd res = wzzb + 2.0 * std::exp(wc) - 2.0 * bn * bn * std::exp(-wc);
      worst = std::max(worst, std::abs(res));
    }
  }
  return worst;
}

double minimal_symmetry_defect(const AlphaField& alpha) {
  double worst = 0.0;
  for (int k = 0; k < alpha.grid.size(); ++k) {
    if (!alpha.defined[k]) continue;
    TwistedLoop star = loop_bar_star(alpha.u[k]);
    TwistedLoop adj = star;
    for (int d = -adj.N; d <= adj.N; ++d)
      adj.at(d) = sigma3() * star.coeff(d) * sigma3();
    worst = std::max(worst, loop_norm(loop_axpy(alpha.v[k], adj, cd(1.0, 0.0))));
  }
  return worst;
}

}  // namespace nilmin
