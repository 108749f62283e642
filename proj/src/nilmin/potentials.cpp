#include "nilmin/potentials.hpp"

#include <cmath>
#include <numbers>

namespace nilmin {

namespace {

cd poly_eval(const std::vector<cd>& coeffs, cd z) {
  cd acc(0.0, 0.0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double poly_scale(const std::vector<cd>& coeffs) {
  double s = 0.0;
  for (const cd& c : coeffs) s = std::max(s, std::abs(c));
  return s;
}

}  // namespace

cd Rational::eval(cd z) const {
  cd n = poly_eval(num, z);
  cd d = poly_eval(den, z);
  double scale = std::max(poly_scale(den), 1.0);
  if (std::abs(d) < 1e-14 * scale)
    throw pole_error("Rational::eval: denominator vanishes");
  return n / d;
}

bool Rational::is_zero() const {
  for (const cd& c : num)
    if (c != cd(0.0, 0.0)) return false;
  return true;
}

Rational rational_const(cd v) { return Rational{{v}, {cd(1.0, 0.0)}}; }

Rational rational_poly(std::vector<cd> coeffs) {
  if (coeffs.empty()) coeffs.push_back(cd(0.0, 0.0));
  return Rational{std::move(coeffs), {cd(1.0, 0.0)}};
}

Mat2 EtaTerm::eval(cd z) const {
  Mat2 acc = Mat2::Zero();
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * z + *it;
  return acc;
}

void PotentialSpec::validate() const {
  if (kind == Kind::normalized) {
    if (p.is_zero())
      throw parameter_error("PotentialSpec: normalized kind needs p != 0");
    if (p.den.empty() || b.den.empty())
      throw parameter_error("PotentialSpec: empty denominator");
  } else {
    if (eta.empty())
      throw parameter_error("PotentialSpec: holomorphic kind needs terms");
    for (const EtaTerm& t : eta) {
      if (t.deg < -1)
        throw parameter_error("PotentialSpec: degree below -1");
      bool odd = (t.deg % 2) != 0;
      for (const Mat2& m : t.poly) {
        if (odd) {
          if (std::abs(m(0, 0)) > 0.0 || std::abs(m(1, 1)) > 0.0)
            throw parameter_error(
                "PotentialSpec: odd degree must be off-diagonal");
        } else {
          if (std::abs(m(0, 1)) > 0.0 || std::abs(m(1, 0)) > 0.0)
            throw parameter_error(
                "PotentialSpec: even degree must be diagonal");
          if (std::abs(m(0, 0) + m(1, 1)) > 1e-15 * (1.0 + m.norm()))
            throw parameter_error(
                "PotentialSpec: even degree must be trace-free");
        }
      }
    }
  }
  if (initial.c.empty()) throw parameter_error("PotentialSpec: empty initial");
}

TwistedLoop PotentialSpec::coefficient(cd z, int N) const {
  TwistedLoop xi(N);
  if (kind == Kind::normalized) {
    xi.at(-1) = coefficient_minus1(z);
  } else {
    for (const EtaTerm& t : eta) {
      if (t.deg > N)
        throw truncation_error("PotentialSpec: degree beyond truncation");
      xi.at(t.deg) += t.eval(z);
    }
  }
  return xi;
}

Mat2 PotentialSpec::coefficient_minus1(cd z) const {
  Mat2 m = Mat2::Zero();
  if (kind == Kind::normalized) {
    cd pv = p.eval(z);
    double pscale = std::max(poly_scale(p.num), 1.0);
    if (std::abs(pv) < 1e-14 * pscale)
      throw pole_error("PotentialSpec: p vanishes on the path");
    m(0, 1) = -pv;
    m(1, 0) = b.eval(z) / pv;
  } else {
    for (const EtaTerm& t : eta)
      if (t.deg == -1) m += t.eval(z);
  }
  return m;
}

std::vector<cd> series_exp(const std::vector<cd>& s, int order) {
  // exp(s0) * exp(s - s0) with the standard recurrence
  // e_n = (1/n) sum_{k=1}^{n} k s_k e_{n-k}
  std::vector<cd> e(order + 1, cd(0.0, 0.0));
  cd lead = s.empty() ? cd(0.0, 0.0) : s[0];
  e[0] = std::exp(lead);
  for (int n = 1; n <= order; ++n) {
    cd acc(0.0, 0.0);
    for (int k = 1; k <= n && k < static_cast<int>(s.size()); ++k)
      acc += double(k) * s[k] * e[n - k];
    e[n] = acc / double(n);
  }
  return e;
}

PotentialSpec wu_potential(const Rational& b, const std::vector<cd>& hatw,
                           int order, cd base_point) {
  if (hatw.empty()) throw parameter_error("wu_potential: empty hatw series");
  if (order < 0) throw parameter_error("wu_potential: negative order");
  // exponent hatw(z) - hatw(0)/2, taken literally; checked against the
  // closed-form umbrella and paraboloid potentials
  std::vector<cd> s = hatw;
  s[0] *= 0.5;
  std::vector<cd> e = series_exp(s, order);
  if (base_point != cd(0.0, 0.0)) {
    // recenter sum e_n (z - z0)^n as a polynomial in z
    std::vector<cd> shifted(order + 1, cd(0.0, 0.0));
    std::vector<cd> pw{cd(1.0, 0.0)};
    for (int n = 0; n <= order; ++n) {
      for (int j = 0; j <= n; ++j) shifted[j] += e[n] * pw[j];
      std::vector<cd> next(pw.size() + 1, cd(0.0, 0.0));
      for (size_t j = 0; j < pw.size(); ++j) {
        next[j] -= base_point * pw[j];
        next[j + 1] += pw[j];
      }
      pw = std::move(next);
    }
    e = std::move(shifted);
  }
  PotentialSpec spec;
  spec.kind = PotentialSpec::Kind::normalized;
  spec.p = rational_poly(e);
  spec.b = b;
  spec.base_point = base_point;
  spec.initial = loop_identity(16);
  Mat2 g = Mat2::Zero();
  g(0, 0) = std::polar(1.0, -std::numbers::pi / 4.0);
  g(1, 1) = std::polar(1.0, std::numbers::pi / 4.0);
  spec.initial.at(0) = g;
  return spec;
}

}  // namespace nilmin
