#include "deadoil/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace deadoil {

namespace {

double logistic(double r) { return 1.0 / (1.0 + std::exp(-r)); }

}  // namespace

CoefficientSet builtin_set(const std::string& name, double c1, double c2) {
    require(name == "default", "builtin_set: unknown family '" + name + "'");
    require(c1 > 0 && c2 > c1, "builtin_set: need 0 < c1 < c2");
    const double a = c2 - c1;
    CoefficientSet cs;
    cs.name = name;
    cs.c1 = c1;
    cs.c2 = c2;
    cs.c3 = std::max(a / 4.0, c2 / 4.0);
    cs.phi = [c1, a](double r) { return c1 + a * logistic(r); };
    cs.dphi = [a](double r) {
        const double s = logistic(r);
        return a * s * (1.0 - s);
    };
    cs.d2phi = [a](double r) {
        const double s = logistic(r);
        return a * s * (1.0 - s) * (1.0 - 2.0 * s);
    };
    cs.d3phi = [a](double r) {
        const double s = logistic(r);
        const double q = s * (1.0 - s);
        return a * q * ((1.0 - 2.0 * s) * (1.0 - 2.0 * s) - 2.0 * q);
    };
    cs.d = cs.phi;
    cs.dd = cs.dphi;
    cs.g = [a](double r) { return a * std::tanh(r) * std::exp(-0.5 * r * r); };
    cs.dg = [a](double r) {
        const double t = std::tanh(r), e = std::exp(-0.5 * r * r);
        return a * e * ((1.0 - t * t) - r * t);
    };
    cs.d2g = [a](double r) {
        const double t = std::tanh(r), e = std::exp(-0.5 * r * r);
        const double sech2 = 1.0 - t * t;
        return a * e * (r * r * t - t - 2.0 * r * sech2 - 2.0 * sech2 * t);
    };
    return cs;
}

namespace {

// Uniform-grid Catmull-Rom on one sampled column; clamped outside the range.
struct CubicTable {
    double r0 = 0, dr = 0;
    std::vector<double> y;

    double operator()(double r) const {
        const int n = static_cast<int>(y.size());
        double s = (r - r0) / dr;
        if (s <= 0) return y.front();
        if (s >= n - 1) return y.back();
        int i = static_cast<int>(std::floor(s));
        i = std::min(i, n - 2);
        const double t = s - i;
        const double ym = i > 0 ? y[i - 1] : 2.0 * y[0] - y[1];
        const double yp = i + 2 < n ? y[i + 2] : 2.0 * y[n - 1] - y[n - 2];
        const double a0 = y[i];
        const double a1 = 0.5 * (y[i + 1] - ym);
        const double a2 = ym - 2.5 * y[i] + 2.0 * y[i + 1] - 0.5 * yp;
        const double a3 = 0.5 * (yp - ym) + 1.5 * (y[i] - y[i + 1]);
        return a0 + t * (a1 + t * (a2 + t * a3));
    }
};

}  // namespace

CoefficientSet tabulated_set(const std::string& path, double c1, double c2, double c3) {
    require(c1 > 0 && c2 > c1 && c3 > 0, "tabulated_set: need 0 < c1 < c2 and c3 > 0");
    std::ifstream in(path);
    require(in.good(), "tabulated_set: cannot open " + path);
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), "tabulated_set: empty table " + path);
    require(line == "r,phi,dphi,d2phi,d3phi,g,dg,d2g,d,dd",
            "tabulated_set: bad header in " + path);
    std::vector<std::vector<double>> cols(10);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        for (int c = 0; c < 10; ++c) {
            require(static_cast<bool>(std::getline(row, cell, ',')),
                    "tabulated_set: malformed row in " + path);
            cols[c].push_back(std::stod(cell));
        }
    }
    const size_t n = cols[0].size();
    require(n >= 4, "tabulated_set: need at least 4 samples");
    const double r0 = cols[0].front();
    const double dr = (cols[0].back() - r0) / static_cast<double>(n - 1);
    require(dr > 0, "tabulated_set: r column must be increasing");
    for (size_t i = 0; i < n; ++i)
        require(std::abs(cols[0][i] - (r0 + dr * static_cast<double>(i))) <= 1e-9 * std::max(1.0, std::abs(dr) * n),
                "tabulated_set: r samples are not uniform");

    auto make = [&](int c) {
        CubicTable t;
        t.r0 = r0;
        t.dr = dr;
        t.y = cols[c];
        return t;
    };
    CoefficientSet cs;
    cs.name = "tabulated:" + path;
    cs.c1 = c1;
    cs.c2 = c2;
    cs.c3 = c3;
    cs.phi = make(1);
    cs.dphi = make(2);
    cs.d2phi = make(3);
    cs.d3phi = make(4);
    cs.g = make(5);
    cs.dg = make(6);
    cs.d2g = make(7);
    cs.d = make(8);
    cs.dd = make(9);
    return cs;
}

namespace {

struct Sweep {
    double lo = 0, hi = 0, r_at_lo = 0, r_at_hi = 0, max_abs = 0;
};

Sweep sweep(const std::function<double(double)>& f, double r_min, double r_max, int samples) {
    Sweep s;
    s.lo = 1e300;
    s.hi = -1e300;
    for (int i = 0; i < samples; ++i) {
        const double r = r_min + (r_max - r_min) * i / (samples - 1);
        const double y = f(r);
        if (y < s.lo) {
            s.lo = y;
            s.r_at_lo = r;
        }
        if (y > s.hi) {
            s.hi = y;
            s.r_at_hi = r;
        }
        s.max_abs = std::max(s.max_abs, std::abs(y));
    }
    return s;
}

HypothesisCheck fd_consistency(const std::string& label, const std::function<double(double)>& parent,
                               const std::function<double(double)>& stored, double r_min,
                               double r_max, int samples) {
    const double step = 1e-5, tol = 1e-6;
    const double scale = std::max(sweep(stored, r_min, r_max, samples).max_abs, 1e-12);
    HypothesisCheck c;
    c.name = label;
    c.bound = tol;
    double worst = 0;
    for (int i = 0; i < samples; ++i) {
        const double r = r_min + (r_max - r_min) * i / (samples - 1);
        const double fd = (parent(r + step) - parent(r - step)) / (2.0 * step);
        const double rel = std::abs(fd - stored(r)) / scale;
        if (rel > worst) {
            worst = rel;
            c.worst_r = r;
        }
    }
    c.worst_value = worst;
    c.pass = finite(worst) && worst <= tol;
    return c;
}

}  // namespace

HypothesisReport verify_hypotheses(const CoefficientSet& coef, double r_min, double r_max,
                                   int samples) {
    require(samples >= 3 && r_max > r_min, "verify_hypotheses: bad sweep parameters");
    HypothesisReport rep;
    auto push = [&](HypothesisCheck c) { rep.checks.push_back(std::move(c)); };

    {
        HypothesisCheck c{"c1 > 0", coef.c1 > 0, 0, coef.c1, 0};
        push(c);
    }
    auto range_check = [&](const std::string& label, const std::function<double(double)>& f,
                           bool lower) {
        const Sweep s = sweep(f, r_min, r_max, samples);
        HypothesisCheck c;
        c.name = label;
        if (lower) {
            c.pass = finite(s.lo) && s.lo >= coef.c1;
            c.worst_r = s.r_at_lo;
            c.worst_value = s.lo;
            c.bound = coef.c1;
        } else {
            c.pass = finite(s.hi) && s.hi <= coef.c2;
            c.worst_r = s.r_at_hi;
            c.worst_value = s.hi;
            c.bound = coef.c2;
        }
        push(c);
    };
    range_check("c1 <= phi", coef.phi, true);
    range_check("phi <= c2", coef.phi, false);
    range_check("c1 <= d", coef.d, true);
    range_check("d <= c2", coef.d, false);

    auto bound_check = [&](const std::string& label, const std::function<double(double)>& f,
                           double bound) {
        const Sweep s = sweep(f, r_min, r_max, samples);
        HypothesisCheck c;
        c.name = label;
        c.pass = finite(s.max_abs) && s.max_abs <= bound;
        c.worst_r = std::abs(s.lo) > std::abs(s.hi) ? s.r_at_lo : s.r_at_hi;
        c.worst_value = s.max_abs;
        c.bound = bound;
        push(c);
    };
    bound_check("|phi'| <= c3", coef.dphi, coef.c3);
    bound_check("|phi''| <= c3", coef.d2phi, coef.c3);
    bound_check("|d'| <= c3", coef.dd, coef.c3);

    auto finite_check = [&](const std::string& label, const std::function<double(double)>& f) {
        const Sweep s = sweep(f, r_min, r_max, samples);
        HypothesisCheck c;
        c.name = label;
        c.pass = finite(s.max_abs);
        c.worst_value = s.max_abs;
        c.bound = std::numeric_limits<double>::infinity();
        push(c);
    };
    finite_check("|phi'''| bounded", coef.d3phi);
    finite_check("|g| bounded", coef.g);
    finite_check("|g'| bounded", coef.dg);
    finite_check("|g''| bounded", coef.d2g);

    push(fd_consistency("phi' consistent with phi", coef.phi, coef.dphi, r_min, r_max, samples));
    push(fd_consistency("phi'' consistent with phi'", coef.dphi, coef.d2phi, r_min, r_max, samples));
    push(fd_consistency("phi''' consistent with phi''", coef.d2phi, coef.d3phi, r_min, r_max,
                        samples));
    push(fd_consistency("g' consistent with g", coef.g, coef.dg, r_min, r_max, samples));
    push(fd_consistency("g'' consistent with g'", coef.dg, coef.d2g, r_min, r_max, samples));
    push(fd_consistency("d' consistent with d", coef.d, coef.dd, r_min, r_max, samples));

    rep.all_pass = true;
    for (const auto& c : rep.checks) rep.all_pass = rep.all_pass && c.pass;
    return rep;
}

std::string HypothesisReport::to_text() const {
    std::ostringstream out;
    for (const auto& c : checks) {
        out << (c.pass ? "pass" : "FAIL") << "  " << c.name << "  worst " << c.worst_value
            << " at r = " << c.worst_r << " (bound " << c.bound << ")\n";
    }
    out << (all_pass ? "all hypothesis checks passed\n" : "hypothesis checks FAILED\n");
    return out.str();
}

}  // namespace deadoil
