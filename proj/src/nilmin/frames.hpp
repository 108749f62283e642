#ifndef NILMIN_FRAMES_HPP
#define NILMIN_FRAMES_HPP

#include <vector>

#include "nilmin/grid.hpp"
#include "nilmin/loops.hpp"
#include "nilmin/potentials.hpp"

namespace nilmin {

// transport of dC = C xi(z) dz from the base point along a straight segment
// (or a polyline), adaptive classical fourth-order steps with step-doubling
// error control
TwistedLoop integrate_to(const PotentialSpec& spec, cd target, int N,
                         double step_tol = 1e-10);
TwistedLoop integrate_along(const PotentialSpec& spec,
                            const std::vector<cd>& waypoints, int N,
                            double step_tol = 1e-10);

// holomorphic solution over a full grid, transported along the center column
// and then outward along rows so that neighboring points share their path
// prefix; path independence is a tested property of the data
struct PotentialField {
  GridSpec grid;
  int N = 16;
  std::vector<TwistedLoop> cminus;
};
PotentialField integrate_potential(const PotentialSpec& spec,
                                   const GridSpec& grid, int N,
                                   double step_tol = 1e-10);

// the conjugate solution at the same point,
// sigma3 conj(C(z, 1/conj(lambda)))^{t,-1} sigma3
TwistedLoop conjugate_solution(const TwistedLoop& cminus);

struct GaugeRecord {
  double vminus = 1.0;
  bool omega = false;        // gauged through the omega0 branch
  bool phase_fixed = false;  // a nonzero phase power was applied
  int phase = 0;             // power k of the right factor diag(sqrt(i)^{-k}, sqrt(i)^k)
  double cond = 0.0;         // factorization pivot ratio
};

struct FramePoint {
  TwistedLoop frame;
  GaugeRecord gauge;
  cd dirac_pot{0.0, 0.0};  // e^{w/2} slot of the Maurer-Cartan form, exact
  cd ar_b{0.0, 0.0};       // holomorphic quadratic differential coefficient, exact
  bool ok = false;
};

// Birkhoff factorization of C-^{-1} C+ followed by the diagonal gauge: F =
// C- V+ D for v- > 0, omega0 C- V+ D for v- < 0. xi_m1 is the lambda^{-1}
// coefficient of the potential at the point; the Dirac potential and the
// quadratic differential coefficient are read from D^{-1} xi_m1 D, exactly. When
// phase_fix is set, the frame is multiplied on the right by the power of
// diag(sqrt(i)^{-1}, sqrt(i)) that rotates the e^{w/2} slot onto the positive
// imaginary axis (the eighth-root phase freedom of the initial condition);
// the resulting surface is pointwise unchanged and the spinor dictionary
// applies with h > 0.
FramePoint assemble_frame(const TwistedLoop& cminus, const TwistedLoop& cplus,
                          const Mat2& xi_m1, double cond_threshold = 1e10,
                          double reality_tol = 1e-8, bool phase_fix = true);

struct FrameField {
  GridSpec grid;
  int N = 16;
  std::vector<FramePoint> pts;
};

// potential integration plus frame assembly over a grid; isolated
// factorization failures mark the point and continue. The phase fix decision
// is taken once, at the defined point nearest the base, and applied to the
// whole field.
FrameField build_frames(const PotentialSpec& spec, const GridSpec& grid,
                        int N, double step_tol = 1e-11,
                        double cond_threshold = 1e10,
                        double reality_tol = 1e-8);

// scalar fields read off a frame field; NaN marks undefined entries
Field<cd> dirac_field(const FrameField& ff);
Field<cd> b_field(const FrameField& ff);
// w = 2 log e^{w/2}, principal branch; NaN where |e^{w/2}| <= vertical_tol
Field<cd> w_field(const FrameField& ff, double vertical_tol = 1e-9);

// connection form pair U(lambda) = [[w_z/4, -lambda^{-1} e^{w/2}],
// [lambda^{-1} B e^{-w/2}, -w_z/4]], V its dual partner, derivatives by
// centered differences; points with non-finite w (vertical or undefined)
// and their difference neighbors are excluded
struct AlphaField {
  GridSpec grid;
  std::vector<TwistedLoop> u, v;  // truncation 2, degrees -1..1 populated
  std::vector<uint8_t> defined;
};
AlphaField build_alpha(const Field<cd>& w, const Field<cd>& b);

// max over lambda samples and interior points of || U_zbar - V_z + [V, U] ||
double flatness_residual(const AlphaField& alpha, const std::vector<cd>& lambdas);

// max over interior points of | w_zzbar + 2 e^w - 2 |B|^2 e^{-w} |
double gauss_residual(const Field<cd>& w, const Field<cd>& b);

// coefficient-level defect of V(lambda) = -sigma3 conj(U(1/conj lambda))^t
// sigma3, the symmetry that characterizes minimal (not just CMC) frames
double minimal_symmetry_defect(const AlphaField& alpha);

// the constant loop [[0, lambda], [-lambda^{-1}, 0]]
TwistedLoop omega0(int N);

}  // namespace nilmin

#endif
