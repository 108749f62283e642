#ifndef NILMIN_POTENTIALS_HPP
#define NILMIN_POTENTIALS_HPP

#include <vector>

#include "nilmin/loops.hpp"

namespace nilmin {

// rational function given by numerator/denominator coefficient lists,
// ascending powers of z
struct Rational {
  std::vector<cd> num{cd(0.0, 0.0)};
  std::vector<cd> den{cd(1.0, 0.0)};

  cd eval(cd z) const;
  bool is_zero() const;
};

Rational rational_const(cd v);
Rational rational_poly(std::vector<cd> coeffs);

// one lambda-degree of a holomorphic potential: a polynomial-in-z matrix
struct EtaTerm {
  int deg = -1;
  std::vector<Mat2> poly;  // ascending powers of z

  Mat2 eval(cd z) const;
};

// dz-coefficient of a potential 1-form.
// normalized: lambda^{-1} [[0, -p], [B/p, 0]] dz with p, B rational.
// holomorphic: sum over terms of lambda^deg * poly(z) dz, degrees >= -1,
// even degrees diagonal trace-free, odd degrees off-diagonal.
struct PotentialSpec {
  enum class Kind { normalized, holomorphic };

  Kind kind = Kind::normalized;
  Rational p;
  Rational b;
  std::vector<EtaTerm> eta;
  cd base_point{0.0, 0.0};
  TwistedLoop initial;

  void validate() const;

  // xi(z) as a twisted loop of the given truncation
  TwistedLoop coefficient(cd z, int N) const;

  // the lambda^{-1} coefficient matrix alone (exact gauge readouts need it)
  Mat2 coefficient_minus1(cd z) const;
};

// normalized potential from holomorphic data: B(z) rational and hatw(z)
// polynomial, where e^{hatw} extends e^w = -h^2/16 holomorphically.
// p = e^{hatw(z) - hatw(0)/2} (the halving applies to the base value only,
// so the off-diagonal product stays -B), expanded to the given order around
// the base point
PotentialSpec wu_potential(const Rational& b, const std::vector<cd>& hatw,
                           int order, cd base_point = cd(0.0, 0.0));

// series exponential: coefficients of exp(s(z)) for polynomial s, truncated
std::vector<cd> series_exp(const std::vector<cd>& s, int order);

}  // namespace nilmin

#endif
