#ifndef NILMIN_SYM_HPP
#define NILMIN_SYM_HPP

#include <vector>

#include "nilmin/frames.hpp"
#include "nilmin/mesh.hpp"
#include "nilmin/nil3.hpp"
#include "nilmin/spinors.hpp"

namespace nilmin {

// orthogonal basis of su(1,1) identifying it with the tangent space of the
// group at the identity; e3 is the timelike direction of <X,Y> = 2 tr(XY)
struct Su11Basis {
  Mat2 e1, e2, e3, sigma;
};

const Su11Basis& su11_basis();

// complex bilinear form <X,Y> = 2 tr(XY)
cd su11_inner(const Mat2& x, const Mat2& y);

Mat2 su11_from_coords(double x1, double x2, double x3);
void su11_coords(const Mat2& x, double& x1, double& x2, double& x3);

// immersion point read off an extended frame at a unit spectral parameter:
// with m = -i lambda (d/dlambda F) F^{-1} - (i/2) F sigma3 F^{-1}, the
// off-diagonal part gives the horizontal coordinates and the diagonal part
// of lambda d/dlambda m gives the vertical one; the lambda derivatives act
// exactly on the Laurent coefficients
Nil3Point sym_point(const TwistedLoop& frame, cd lambda);

// (i/2) F sigma3 F^{-1}, the unit normal translated to the identity; lands
// on the hyperboloid <N,N> = -1 with <N, i sigma3> < 0
Mat2 sym_normal(const TwistedLoop& frame, cd lambda);

struct GaussMapValue {
  Mat2 nm;            // normal in su(1,1)
  cd disk{0.0, 0.0};  // stereographic value psi2 / conj(psi1), |disk| < 1
  bool vertical = false;
};

GaussMapValue frame_gauss_map(const TwistedLoop& frame, cd lambda,
                              double vertical_tol = 1e-9);

// sampled surfaces of one associated family, all built from a single frame
// field; spinors[l] holds the surface spinors of the member at lambdas[l]
struct SurfaceFamily {
  GridSpec grid;
  std::vector<cd> lambdas;
  std::vector<SurfaceMesh> meshes;
  std::vector<SpinorField> spinors;
};

SurfaceFamily family_from_frames(const FrameField& ff,
                                 const std::vector<cd>& lambdas,
                                 double vertical_tol = 1e-9);

SurfaceFamily sample_family(const PotentialSpec& spec, const GridSpec& grid,
                            const std::vector<cd>& lambdas, int N = 16,
                            double step_tol = 1e-11,
                            double cond_threshold = 1e10,
                            double reality_tol = 1e-8);

std::vector<SurfaceMesh> sample_surface(const PotentialSpec& spec,
                                        const GridSpec& grid,
                                        const std::vector<cd>& lambdas,
                                        int N = 16, double step_tol = 1e-11,
                                        double cond_threshold = 1e10,
                                        double reality_tol = 1e-8);

// how the family members relate to the one at lambdas[0]: the support
// function is invariant, the quadratic differential scales by lambda^{-2},
// the induced metric is not preserved
struct FamilyReport {
  std::vector<cd> lambdas;
  double support_deviation = 0.0;  // max over points and pairs of members
  std::vector<double> b_max;       // per member, max |B| over the interior
  std::vector<cd> b_ratio;         // per member, least squares B / B_base
  std::vector<double> ratio_defect;  // |b_ratio - (lambda/base)^{-2}|
  bool ratio_defined = false;        // false when B_base vanishes identically
  std::vector<double> metric_deviation;  // per member, max |e^u - e^u_base|
};

// b_floor is the smallest base |B| treated as nonzero; differentiation of
// the sampled spinors leaves an O(h^2) floor under any true zero
FamilyReport associated_family_report(const SurfaceFamily& fam,
                                      double b_floor = 1e-2);

// first derivatives of an immersion in the left-invariant frame, f^{-1} f_z
struct PhiField {
  GridSpec grid;
  Field<cd> p1, p2, p3;
  std::vector<uint8_t> defined;

  PhiField() = default;
  explicit PhiField(const GridSpec& g)
      : grid(g), p1(g), p2(g), p3(g), defined(g.size(), 1) {}
};

// the mask marks usable nodes; empty means everything is defined
PhiField phi_from_spinors(const SpinorField& sf,
                          const std::vector<uint8_t>& defined = {});

// max over defined nodes of |phi1^2 + phi2^2 + phi3^2|
double conformality_residual(const PhiField& phi);

// max norm of d(Phi)/dzbar - d(conj Phi)/dz + [conj Phi, Phi] over interior
// nodes whose whole stencil is defined; this is the compatibility condition
// of the linear system f_z = f Phi, f_zbar = f conj(Phi)
double phi_integrability_residual(const PhiField& phi, double tau = 0.5);

// integrate f' = f * 2 Re(Phi zdot) in the 4x4 matrix model along straight
// segments between the waypoints; Phi between nodes comes from degree-five
// polynomial interpolation and steps_per_cell fixes the RK4 resolution
Eigen::Matrix4d integrate_phi_path(const PhiField& phi,
                                   const std::vector<cd>& waypoints,
                                   const Eigen::Matrix4d& start,
                                   double tau = 0.5, int steps_per_cell = 2);

// rebuild the immersion from its first derivatives alone, integrating along
// rays from the grid center with f(center) = f0; residuals above tolerance
// are rejected before any integration happens. The integrability default
// allows for the O(h^2) floor that differencing sampled data leaves even on
// exactly compatible input
SurfaceMesh direct_immersion(const PhiField& phi, const Nil3Point& f0,
                             double conformality_tol = 1e-6,
                             double integrability_tol = 5e-2,
                             int steps_per_cell = 2);

// translation and rotation taking the mesh to a canonical pose: the center
// node goes to the identity and the x-derivative there turns onto the first
// coordinate axis
IsometryElement canonical_alignment(const SurfaceMesh& mesh);

// apply an ambient isometry to every defined node; the scalar diagnostics
// are invariant and carry over unchanged
SurfaceMesh transformed_mesh(const SurfaceMesh& mesh,
                             const IsometryElement& g);

}  // namespace nilmin

#endif
