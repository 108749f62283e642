#ifndef NILMIN_CATALOG_HPP
#define NILMIN_CATALOG_HPP

#include "nilmin/potentials.hpp"
#include "nilmin/sym.hpp"

namespace nilmin {

enum class ExampleName { umbrella, paraboloid, helicoid, catenoid };

// catalog entry: the named potential families with their standard initial
// loops. The catenoid slot reuses the helicoid potential with a different
// loop group initial condition; it ships with a fixed arbitrary default and
// accepts an override, since no closed form pins the choice down
struct ExampleSpec {
  ExampleName name = ExampleName::umbrella;
  double a = 0.3;
  TwistedLoop initial;
  bool has_initial = false;
};

PotentialSpec catalog_potential(const ExampleSpec& e);

// printed immersion formulas; umbrella needs |z| < 1, and only the umbrella
// and the paraboloid have one
Nil3Point closed_form(const ExampleSpec& e, cd z, cd lambda);

// quadratic differential coefficient of the named family, the convention of
// the closing sentences of the catalog: umbrella 0, paraboloid lambda^-2/8,
// helicoid -2 a^2 lambda^-2; twice the pipeline's B slot
cd ar_reference(const ExampleSpec& e, cd lambda);

// monodromy data of the 2 pi k vertical strip shift for the helicoid
// potential: M = exp(2 pi i k D), X = (i lambda dM/dlambda) M^-1,
// Y = i lambda dX/dlambda, evaluated at lambda; loop arithmetic throughout
void helicoid_monodromy(double a, double k, cd lambda, Mat2& m, Mat2& x,
                        Mat2& y, int N = 32);

// the shift acts on the surface as the helicoidal motion of pitch 8 a^2 and
// angle 2 pi k about the vertical axis through (-4a, 0, 0)
IsometryElement helicoid_deck_motion(double a, double k);

// largest normal component of the rotational Killing field about the
// vertical axis through axis_base, relative over defined non-branch nodes;
// zero exactly on surfaces of revolution about that axis
double rotational_defect(const SurfaceFamily& fam, int member = 0,
                         const Nil3Point& axis_base = Nil3Point{0.0, 0.0,
                                                               0.0});

}  // namespace nilmin

#endif
