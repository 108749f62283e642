#include "nilmin/loops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nilmin {

const Mat2& sigma3() {
  static const Mat2 s = (Mat2() << 1.0, 0.0, 0.0, -1.0).finished();
  return s;
}

TwistedLoop loop_identity(int N) {
  TwistedLoop a(N);
  a.at(0) = Mat2::Identity();
  return a;
}

TwistedLoop loop_zero(int N) { return TwistedLoop(N); }

TwistedLoop loop_monomial(int d, const Mat2& m, int N) {
  if (std::abs(d) > N) throw parameter_error("loop_monomial: degree outside truncation");
  bool diag = std::abs(m(0, 1)) == 0.0 && std::abs(m(1, 0)) == 0.0;
  bool off = std::abs(m(0, 0)) == 0.0 && std::abs(m(1, 1)) == 0.0;
  if (!diag && !off)
    throw parameter_error("loop_monomial: matrix belongs to no twist class");
  int dmod = ((d % 2) + 2) % 2;
  TwistedLoop a(N, diag ? dmod : 1 - dmod);
  a.at(d) = m;
  return a;
}

static bool loop_is_zero(const TwistedLoop& a) {
  for (const auto& m : a.c)
    if (!m.isZero(0.0)) return false;
  return true;
}

TwistedLoop loop_add(const TwistedLoop& a, const TwistedLoop& b) {
  int parity = a.parity;
  if (a.parity != b.parity) {
    // the zero loop belongs to both classes
    if (loop_is_zero(a))
      parity = b.parity;
    else if (!loop_is_zero(b))
      throw parameter_error("loop_add: mixed parity");
  }
  int N = std::max(a.N, b.N);
  TwistedLoop r(N, parity);
  r.tail_tol = std::max(a.tail_tol, b.tail_tol);
  r.tail_mass = a.tail_mass + b.tail_mass;
  for (int d = -N; d <= N; ++d) r.at(d) = a.coeff(d) + b.coeff(d);
  return r;
}

TwistedLoop loop_scale(const TwistedLoop& a, cd s) {
  TwistedLoop r = a;
  for (auto& m : r.c) m *= s;
  r.tail_mass *= std::abs(s);
  return r;
}

TwistedLoop loop_resize(const TwistedLoop& a, int N) {
  TwistedLoop r(N, a.parity);
  r.tail_tol = a.tail_tol;
  r.tail_mass = a.tail_mass;
  for (int d = -N; d <= N; ++d) r.at(d) = a.coeff(d);
  for (int d = N + 1; d <= a.N; ++d) {
    r.tail_mass += a.coeff(d).norm() + a.coeff(-d).norm();
  }
  if (r.tail_mass > r.tail_tol)
    throw truncation_error("loop_resize: discarded tail mass exceeds tolerance");
  return r;
}

TwistedLoop loop_mul(const TwistedLoop& a, const TwistedLoop& b) {
  int N = std::max(a.N, b.N);
  TwistedLoop r(N, (a.parity + b.parity) % 2);
  r.tail_tol = std::max(a.tail_tol, b.tail_tol);
  r.tail_mass = a.tail_mass + b.tail_mass;
  for (int da = -a.N; da <= a.N; ++da) {
    if (a.coeff(da).isZero(0.0)) continue;
    for (int db = -b.N; db <= b.N; ++db) {
      int d = da + db;
      Mat2 term = a.coeff(da) * b.coeff(db);
      if (d < -N || d > N)
        r.tail_mass += term.norm();
      else
        r.at(d) += term;
    }
  }
  if (r.tail_mass > r.tail_tol)
    throw truncation_error("loop_mul: discarded tail mass exceeds tolerance");
  return r;
}

TwistedLoop loop_inv(const TwistedLoop& a) {
  int N = a.N;
  int nb = 2 * N + 1;
  Eigen::MatrixXcd sys = Eigen::MatrixXcd::Zero(2 * nb, 2 * nb);
  for (int d = -N; d <= N; ++d)
    for (int e = -N; e <= N; ++e) {
      int k = d - e;
      if (k < -N || k > N) continue;
      sys.block<2, 2>(2 * (d + N), 2 * (e + N)) = a.coeff(k);
    }
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(2 * nb, 2);
  rhs.block<2, 2>(2 * N, 0) = Mat2::Identity();

  Eigen::FullPivLU<Eigen::MatrixXcd> lu(sys);
  double pmax = std::abs(lu.matrixLU()(0, 0));
  double pmin = std::abs(lu.matrixLU()(2 * nb - 1, 2 * nb - 1));
  if (!lu.isInvertible() || pmin == 0.0 || pmax / pmin > 1e12)
    throw noninvertible_error("loop_inv: truncated convolution system is singular");

  Eigen::MatrixXcd x = lu.solve(rhs);
  TwistedLoop r(N, a.parity);
  r.tail_tol = a.tail_tol;
  for (int e = -N; e <= N; ++e) r.at(e) = x.block<2, 2>(2 * (e + N), 0);
  return r;
}

Eigen::Matrix2cd loop_eval(const TwistedLoop& a, cd lambda) {
  if (lambda == cd(0.0, 0.0)) {
    for (int d = -a.N; d < 0; ++d)
      if (!a.coeff(d).isZero(1e-300))
        throw parameter_error("loop_eval: evaluation at 0 with negative-degree coefficients");
    return a.coeff(0);
  }
  // Horner in lambda for d >= 0 and in 1/lambda for d < 0
  Mat2 pos = Mat2::Zero();
  for (int d = a.N; d >= 1; --d) pos = (pos + a.coeff(d)) * lambda;
  Mat2 neg = Mat2::Zero();
  cd il = cd(1.0, 0.0) / lambda;
  for (int d = -a.N; d <= -1; ++d) neg = (neg + a.coeff(d)) * il;
  return pos + neg + a.coeff(0);
}

TwistedLoop loop_shift(const TwistedLoop& a, int k) {
  TwistedLoop r(a.N + std::abs(k), (a.parity + std::abs(k)) % 2);
  r.tail_tol = a.tail_tol;
  r.tail_mass = a.tail_mass;
  for (int d = -a.N; d <= a.N; ++d) r.at(d + k) = a.coeff(d);
  return r;
}

TwistedLoop loop_dlambda(const TwistedLoop& a) {
  TwistedLoop r(a.N + 1, (a.parity + 1) % 2);
  r.tail_tol = a.tail_tol;
  r.tail_mass = a.tail_mass;
  for (int d = -a.N; d <= a.N; ++d) r.at(d - 1) = double(d) * a.coeff(d);
  return r;
}

double loop_norm(const TwistedLoop& a) {
  double n = 0.0;
  for (const auto& m : a.c) n = std::max(n, m.norm());
  return n;
}

double twist_defect(const TwistedLoop& a) {
  double defect = 0.0;
  for (int d = -a.N; d <= a.N; ++d) {
    const Mat2& m = a.coeff(d);
    bool diag = ((d + a.parity) % 2) == 0;
    if (diag)
      defect = std::max(defect, std::max(std::abs(m(0, 1)), std::abs(m(1, 0))));
    else
      defect = std::max(defect, std::max(std::abs(m(0, 0)), std::abs(m(1, 1))));
  }
  return defect;
}

TwistedLoop loop_bar_star(const TwistedLoop& a) {
  TwistedLoop r(a.N, a.parity);
  r.tail_tol = a.tail_tol;
  r.tail_mass = a.tail_mass;
  for (int d = -a.N; d <= a.N; ++d) r.at(d) = a.coeff(-d).conjugate().transpose();
  return r;
}

TwistedLoop su11_dual(const TwistedLoop& a) {
  TwistedLoop inv = loop_inv(loop_bar_star(a));
  TwistedLoop r(inv.N, inv.parity);
  r.tail_tol = inv.tail_tol;
  r.tail_mass = inv.tail_mass;
  for (int d = -inv.N; d <= inv.N; ++d) r.at(d) = sigma3() * inv.coeff(d) * sigma3();
  return r;
}

double su11_reality_defect(const TwistedLoop& a, const std::vector<cd>& samples) {
  double defect = 0.0;
  for (cd lambda : samples) {
    Mat2 g = loop_eval(a, lambda);
    Mat2 gh = g.adjoint();
    if (std::abs(gh.determinant()) < 1e-14)
      throw noninvertible_error("su11_reality_defect: singular evaluation");
    Mat2 dual = sigma3() * gh.inverse() * sigma3();
    defect = std::max(defect, (dual - g).norm());
  }
  return defect;
}

double det_defect(const TwistedLoop& a, const std::vector<cd>& samples) {
  double defect = 0.0;
  for (cd lambda : samples)
    defect = std::max(defect, std::abs(loop_eval(a, lambda).determinant() - cd(1.0)));
  return defect;
}

TwistedLoop loop_exp(const TwistedLoop& a) {
  // bound the operator norm on the circle by the total coefficient mass
  double total = 0.0;
  for (const auto& m : a.c) total += m.norm();
  int squarings = 0;
  while (total > 0.5 && squarings < 60) {
    total *= 0.5;
    ++squarings;
  }
  TwistedLoop b = loop_scale(a, std::ldexp(1.0, -squarings));
  TwistedLoop sum = loop_identity(a.N);
  sum.tail_tol = a.tail_tol;
  TwistedLoop term = sum;
  for (int k = 1; k <= 30; ++k) {
    term = loop_scale(loop_mul(term, b), 1.0 / k);
    sum = loop_add(sum, term);
    if (loop_norm(term) < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) sum = loop_mul(sum, sum);
  return sum;
}

FactorPair birkhoff(const TwistedLoop& a, double cond_threshold) {
  int N = a.N;
  int nb = N + 1;
  // unknowns: minus coefficients at degrees -N..0; equations: degrees -N..0
  // of a * minus, with the degree-0 block set to the identity
  Eigen::MatrixXcd sys = Eigen::MatrixXcd::Zero(2 * nb, 2 * nb);
  for (int d = -N; d <= 0; ++d)
    for (int e = -N; e <= 0; ++e) {
      int k = d - e;
      if (k < -N || k > N) continue;
      sys.block<2, 2>(2 * (d + N), 2 * (e + N)) = a.coeff(k);
    }
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(2 * nb, 2);
  rhs.block<2, 2>(2 * N, 0) = Mat2::Identity();

  Eigen::FullPivLU<Eigen::MatrixXcd> lu(sys);
  double pmax = std::abs(lu.matrixLU()(0, 0));
  double pmin = std::abs(lu.matrixLU()(2 * nb - 1, 2 * nb - 1));
  double cond = (pmin > 0.0) ? pmax / pmin : std::numeric_limits<double>::infinity();
  if (!lu.isInvertible() || cond > cond_threshold)
    throw big_cell_error("birkhoff: loop is outside the big cell (system condition " +
                         std::to_string(cond) + ")");

  Eigen::MatrixXcd x = lu.solve(rhs);
  FactorPair pair;
  pair.cond = cond;
  pair.minus = TwistedLoop(N, a.parity);
  pair.minus.tail_tol = a.tail_tol;
  for (int e = -N; e <= 0; ++e) pair.minus.at(e) = x.block<2, 2>(2 * (e + N), 0);

  // the residual negative part and dropped tail of this product measure the
  // truncation error; record them rather than failing the factorization
  TwistedLoop atol = a;
  atol.tail_mass = 0.0;
  atol.tail_tol = std::numeric_limits<double>::infinity();
  TwistedLoop prod = loop_mul(atol, pair.minus);
  pair.plus = TwistedLoop(N, a.parity);
  pair.plus.tail_tol = a.tail_tol;
  pair.plus.tail_mass = prod.tail_mass;
  for (int d = 0; d <= N; ++d) pair.plus.at(d) = prod.coeff(d);
  for (int d = -N; d <= -1; ++d) pair.plus.tail_mass += prod.coeff(d).norm();
  return pair;
}

} // namespace nilmin
