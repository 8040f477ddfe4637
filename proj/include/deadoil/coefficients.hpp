// Nonlinear coefficient families phi, g, d with their derivatives and the
// runtime checks for the standing assumptions: phi and d take values in
// [c1, c2] with c1 > 0, first/second derivatives of phi and the first
// derivative of d are bounded by c3, phi''' and g, g', g'' are bounded.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "deadoil/common.hpp"

namespace deadoil {

struct CoefficientSet {
    std::string name;
    std::function<double(double)> phi, dphi, d2phi, d3phi;
    std::function<double(double)> g, dg, d2g;
    std::function<double(double)> d, dd;
    double c1 = 0, c2 = 0, c3 = 0;
};

// Named smooth families. "default": phi = d = c1 + (c2-c1)*logistic(r),
// g = (c2-c1)*tanh(r)*exp(-r^2/2). Stored c3 = max((c2-c1)/4, c2/4); the
// first term is the sharp derivative bound, the second keeps the explicit
// step-size formula conservative for the pressure diffusion d <= c2.
CoefficientSet builtin_set(const std::string& name, double c1, double c2);

// Custom coefficients from a CSV table of uniform samples
// "r,phi,dphi,d2phi,d3phi,g,dg,d2g,d,dd" plus header line; each column is
// interpolated independently with a local cubic (Catmull-Rom, one-sided at
// the ends, clamped outside the sampled range).
CoefficientSet tabulated_set(const std::string& path, double c1, double c2, double c3);

struct HypothesisCheck {
    std::string name;
    bool pass = false;
    double worst_r = 0;      // sample where the margin is worst
    double worst_value = 0;  // the quantity checked there
    double bound = 0;        // what it was checked against
};

struct HypothesisReport {
    std::vector<HypothesisCheck> checks;
    bool all_pass = false;
    std::string to_text() const;
};

// Samples [r_min, r_max] at `samples` uniform points, checks the range and
// derivative bounds above, and cross-checks every stored derivative against
// a central difference of its parent at step 1e-5 (tolerance 1e-6 relative
// to the derivative's scale over the sweep).
HypothesisReport verify_hypotheses(const CoefficientSet& coef, double r_min, double r_max,
                                   int samples);

}  // namespace deadoil
