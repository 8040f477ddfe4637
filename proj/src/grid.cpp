#include "deadoil/grid.hpp"

#include <cmath>

namespace deadoil {

bool same_grid(const Grid2D& a, const Grid2D& b) {
    return a.nx == b.nx && a.ny == b.ny && a.lx == b.lx && a.ly == b.ly;
}

Grid2D build_grid(int nx, int ny, double lx, double ly) {
    require(nx >= 2 && ny >= 2, "build_grid: nx and ny must be >= 2");
    require(lx > 0 && ly > 0, "build_grid: lx and ly must be positive");
    Grid2D g;
    g.nx = nx;
    g.ny = ny;
    g.lx = lx;
    g.ly = ly;
    g.hx = lx / nx;
    g.hy = ly / ny;
    return g;
}

ScalarField sample_field(const Grid2D& g, const std::function<double(double, double)>& f) {
    ScalarField out(g);
    for (int jj = 0; jj < g.my(); ++jj)
        for (int ii = 0; ii < g.mx(); ++ii) out.at(ii, jj) = f(g.x(ii), g.y(jj));
    return out;
}

static void check_pair(const ScalarField& a, const ScalarField& b, const char* who) {
    require(same_grid(a.grid, b.grid), std::string(who) + ": fields use different grids");
}

ScalarField add(const ScalarField& a, const ScalarField& b) {
    check_pair(a, b, "add");
    ScalarField out = a;
    for (size_t k = 0; k < out.v.size(); ++k) out.v[k] += b.v[k];
    return out;
}

ScalarField sub(const ScalarField& a, const ScalarField& b) {
    check_pair(a, b, "sub");
    ScalarField out = a;
    for (size_t k = 0; k < out.v.size(); ++k) out.v[k] -= b.v[k];
    return out;
}

ScalarField scaled(const ScalarField& a, double c) {
    ScalarField out = a;
    for (double& x : out.v) x *= c;
    return out;
}

ScalarField product(const ScalarField& a, const ScalarField& b) {
    check_pair(a, b, "product");
    ScalarField out = a;
    for (size_t k = 0; k < out.v.size(); ++k) out.v[k] *= b.v[k];
    return out;
}

void axpy(ScalarField& y, double alpha, const ScalarField& x) {
    check_pair(y, x, "axpy");
    for (size_t k = 0; k < y.v.size(); ++k) y.v[k] += alpha * x.v[k];
}

ScalarField apply_fn(const std::function<double(double)>& fn, const ScalarField& a) {
    ScalarField out = a;
    for (double& x : out.v) x = fn(x);
    return out;
}

bool all_finite(const ScalarField& a) {
    for (double x : a.v)
        if (!std::isfinite(x)) return false;
    return true;
}

double inner(const ScalarField& a, const ScalarField& b) {
    check_pair(a, b, "inner");
    double s = 0;
    for (size_t k = 0; k < a.v.size(); ++k) s += a.v[k] * b.v[k];
    return a.grid.hx * a.grid.hy * s;
}

double norm_l2(const ScalarField& a) { return std::sqrt(inner(a, a)); }

double norm_max(const ScalarField& a) {
    double m = 0;
    for (double x : a.v) m = std::max(m, std::abs(x));
    return m;
}

ScalarField div_coeff_grad(const ScalarField& a, const ScalarField& v) {
    check_pair(a, v, "div_coeff_grad");
    const Grid2D& g = a.grid;
    const int mx = g.mx(), my = g.my();
    const double ihx2 = 1.0 / (g.hx * g.hx), ihy2 = 1.0 / (g.hy * g.hy);
    ScalarField out(g);
    for (int jj = 0; jj < my; ++jj) {
        for (int ii = 0; ii < mx; ++ii) {
            const double ac = a.at(ii, jj);
            const double vc = v.at(ii, jj);
            double s = 0;
            // east / west
            if (ii + 1 < mx)
                s += 0.5 * (ac + a.at(ii + 1, jj)) * (v.at(ii + 1, jj) - vc) * ihx2;
            else
                s += ac * (0.0 - vc) * ihx2;
            if (ii - 1 >= 0)
                s += 0.5 * (ac + a.at(ii - 1, jj)) * (v.at(ii - 1, jj) - vc) * ihx2;
            else
                s += ac * (0.0 - vc) * ihx2;
            // north / south
            if (jj + 1 < my)
                s += 0.5 * (ac + a.at(ii, jj + 1)) * (v.at(ii, jj + 1) - vc) * ihy2;
            else
                s += ac * (0.0 - vc) * ihy2;
            if (jj - 1 >= 0)
                s += 0.5 * (ac + a.at(ii, jj - 1)) * (v.at(ii, jj - 1) - vc) * ihy2;
            else
                s += ac * (0.0 - vc) * ihy2;
            out.at(ii, jj) = s;
        }
    }
    return out;
}

ScalarField laplacian(const ScalarField& v) {
    return div_coeff_grad(ScalarField(v.grid, 1.0), v);
}

ScalarField dot_grad(const ScalarField& a, const ScalarField& b) {
    check_pair(a, b, "dot_grad");
    const Grid2D& g = a.grid;
    const int mx = g.mx(), my = g.my();
    const double i2hx = 1.0 / (2.0 * g.hx), i2hy = 1.0 / (2.0 * g.hy);
    ScalarField out(g);
    for (int jj = 0; jj < my; ++jj) {
        for (int ii = 0; ii < mx; ++ii) {
            const double ae = ii + 1 < mx ? a.at(ii + 1, jj) : 0.0;
            const double aw = ii - 1 >= 0 ? a.at(ii - 1, jj) : 0.0;
            const double an = jj + 1 < my ? a.at(ii, jj + 1) : 0.0;
            const double as = jj - 1 >= 0 ? a.at(ii, jj - 1) : 0.0;
            const double be = ii + 1 < mx ? b.at(ii + 1, jj) : 0.0;
            const double bw = ii - 1 >= 0 ? b.at(ii - 1, jj) : 0.0;
            const double bn = jj + 1 < my ? b.at(ii, jj + 1) : 0.0;
            const double bs = jj - 1 >= 0 ? b.at(ii, jj - 1) : 0.0;
            out.at(ii, jj) = (ae - aw) * i2hx * (be - bw) * i2hx + (an - as) * i2hy * (bn - bs) * i2hy;
        }
    }
    return out;
}

double integrate_power(const ScalarField& v, double exponent) {
    require(exponent >= 1.0, "integrate_power: exponent must be >= 1");
    double s = 0;
    if (exponent == 2.0) {
        for (double x : v.v) s += x * x;
    } else {
        for (double x : v.v) s += std::pow(std::abs(x), exponent);
    }
    return v.grid.hx * v.grid.hy * s;
}

ScalarField div_coeff_grad_wrt_coeff(const ScalarField& v, const ScalarField& w) {
    check_pair(v, w, "div_coeff_grad_wrt_coeff");
    const Grid2D& g = v.grid;
    const int mx = g.mx(), my = g.my();
    const double ihx2 = 1.0 / (g.hx * g.hx), ihy2 = 1.0 / (g.hy * g.hy);
    ScalarField out(g);
    // x-faces: between (ii,jj) and (ii+1,jj), ii = -1..mx-1 (-1 and mx-1
    // rightmost are boundary faces).
    for (int jj = 0; jj < my; ++jj) {
        for (int ii = -1; ii < mx; ++ii) {
            const double vl = ii >= 0 ? v.at(ii, jj) : 0.0;
            const double vr = ii + 1 < mx ? v.at(ii + 1, jj) : 0.0;
            const double wl = ii >= 0 ? w.at(ii, jj) : 0.0;
            const double wr = ii + 1 < mx ? w.at(ii + 1, jj) : 0.0;
            const double contrib = -(vr - vl) * (wr - wl) * ihx2;
            if (ii >= 0 && ii + 1 < mx) {
                out.at(ii, jj) += 0.5 * contrib;
                out.at(ii + 1, jj) += 0.5 * contrib;
            } else if (ii >= 0) {
                out.at(ii, jj) += contrib;
            } else {
                out.at(ii + 1, jj) += contrib;
            }
        }
    }
    for (int ii = 0; ii < mx; ++ii) {
        for (int jj = -1; jj < my; ++jj) {
            const double vl = jj >= 0 ? v.at(ii, jj) : 0.0;
            const double vr = jj + 1 < my ? v.at(ii, jj + 1) : 0.0;
            const double wl = jj >= 0 ? w.at(ii, jj) : 0.0;
            const double wr = jj + 1 < my ? w.at(ii, jj + 1) : 0.0;
            const double contrib = -(vr - vl) * (wr - wl) * ihy2;
            if (jj >= 0 && jj + 1 < my) {
                out.at(ii, jj) += 0.5 * contrib;
                out.at(ii, jj + 1) += 0.5 * contrib;
            } else if (jj >= 0) {
                out.at(ii, jj) += contrib;
            } else {
                out.at(ii, jj + 1) += contrib;
            }
        }
    }
    return out;
}

}  // namespace deadoil
