#ifndef NILMIN_LOOPS_HPP
#define NILMIN_LOOPS_HPP

#include <complex>
#include <vector>
#include <Eigen/Dense>

#include "nilmin/errors.hpp"

namespace nilmin {

using cd = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

const Mat2& sigma3();

// Truncated matrix Laurent series in the spectral parameter, twisted by
// conjugation with sigma3. parity 0 is the loop-group twist (even degrees
// diagonal, odd off-diagonal); parity 1 is the opposite class, which the
// lambda-derivative of a parity-0 loop lands in. tail_mass accumulates the
// Frobenius mass of coefficients discarded by truncating operations.
struct TwistedLoop {
  int N = 16;
  int parity = 0;
  double tail_tol = 1e-7;
  double tail_mass = 0.0;
  std::vector<Mat2> c;

  TwistedLoop() : c(2 * 16 + 1, Mat2::Zero()) {}
  explicit TwistedLoop(int n, int par = 0)
      : N(n), parity(par), c(2 * n + 1, Mat2::Zero()) {
    if (n < 0) throw parameter_error("TwistedLoop: negative truncation");
  }

  const Mat2& coeff(int d) const {
    static const Mat2 zero = Mat2::Zero();
    return (d < -N || d > N) ? zero : c[d + N];
  }
  Mat2& at(int d) { return c[d + N]; }
};

TwistedLoop loop_identity(int N);
TwistedLoop loop_zero(int N);

// single-coefficient loop m * lambda^d
TwistedLoop loop_monomial(int d, const Mat2& m, int N);

TwistedLoop loop_add(const TwistedLoop& a, const TwistedLoop& b);
TwistedLoop loop_scale(const TwistedLoop& a, cd s);
TwistedLoop loop_resize(const TwistedLoop& a, int N);

// degreewise convolution truncated to the larger of the two truncations;
// throws truncation_error if the discarded tail mass exceeds the tolerance
TwistedLoop loop_mul(const TwistedLoop& a, const TwistedLoop& b);

// inverse on the truncated algebra via the block-Toeplitz linear system
// sum_e a_{d-e} x_e = delta_{d0} I over d, e in [-N, N]
TwistedLoop loop_inv(const TwistedLoop& a);

Eigen::Matrix2cd loop_eval(const TwistedLoop& a, cd lambda);

// multiplication by the scalar monomial lambda^k
TwistedLoop loop_shift(const TwistedLoop& a, int k);

// exact Laurent derivative: coefficient at degree d contributes d*c_d at
// degree d-1; the truncation grows by one and the parity flips
TwistedLoop loop_dlambda(const TwistedLoop& a);

// max over coefficients of the Frobenius norm
double loop_norm(const TwistedLoop& a);

// deviation of the coefficients from the loop's declared parity class
double twist_defect(const TwistedLoop& a);

// coefficientwise conj(c_{-d})^t, i.e. the loop conj(g(1/conj(lambda)))^t
TwistedLoop loop_bar_star(const TwistedLoop& a);

// sigma3 conj(g(1/conj(lambda)))^{t,-1} sigma3, computed on coefficients
TwistedLoop su11_dual(const TwistedLoop& a);

// max over samples (unit modulus) of || sigma3 (g^H)^{-1} sigma3 - g ||_F;
// zero exactly when the evaluations lie in SU(1,1)
double su11_reality_defect(const TwistedLoop& a, const std::vector<cd>& samples);

// max over samples of |det g(lambda) - 1|
double det_defect(const TwistedLoop& a, const std::vector<cd>& samples);

// matrix exponential by scaling and squaring on the truncated algebra
TwistedLoop loop_exp(const TwistedLoop& a);

struct FactorPair {
  TwistedLoop plus;   // no negative degrees, identity at lambda = 0
  TwistedLoop minus;  // no positive degrees
  double cond = 0.0;  // pivot ratio of the factorization system
};

// Birkhoff decomposition a = plus * minus^{-1} on the big cell; conditioning
// of the linear system above the threshold reports outside-big-cell
FactorPair birkhoff(const TwistedLoop& a, double cond_threshold = 1e10);

} // namespace nilmin

#endif
