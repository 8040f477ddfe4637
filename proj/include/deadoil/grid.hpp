// 2D uniform grid, boundary-free scalar fields, and the flux stencils
// every other module builds on.
//
// Convention: the rectangle (0,lx) x (0,ly) is cut into nx * ny cells.
// Only interior nodes (i*hx, j*hy), i = 1..nx-1, j = 1..ny-1 are stored;
// the homogeneous Dirichlet boundary value 0 is implied and never stored.
#pragma once

#include <functional>
#include <vector>

#include "deadoil/common.hpp"

namespace deadoil {

struct Grid2D {
    int nx = 0, ny = 0;      // cell counts per axis, >= 2
    double lx = 0, ly = 0;   // domain extents, > 0
    double hx = 0, hy = 0;   // cell sizes lx/nx, ly/ny

    int mx() const { return nx - 1; }  // interior nodes per row
    int my() const { return ny - 1; }  // interior rows
    int size() const { return mx() * my(); }
    double x(int ii) const { return (ii + 1) * hx; }  // ii = 0..mx()-1
    double y(int jj) const { return (jj + 1) * hy; }
};

bool same_grid(const Grid2D& a, const Grid2D& b);

Grid2D build_grid(int nx, int ny, double lx, double ly);

// Interior nodal values, row-major with x fastest. Boundary is identically 0.
struct ScalarField {
    Grid2D grid;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(const Grid2D& g, double init = 0.0)
        : grid(g), v(static_cast<size_t>(g.size()), init) {}

    double& at(int ii, int jj) { return v[static_cast<size_t>(jj) * grid.mx() + ii]; }
    double at(int ii, int jj) const { return v[static_cast<size_t>(jj) * grid.mx() + ii]; }
    size_t size() const { return v.size(); }
};

// Elementwise helpers. All binary ops insist on matching grids.
ScalarField sample_field(const Grid2D& g, const std::function<double(double, double)>& f);
ScalarField add(const ScalarField& a, const ScalarField& b);
ScalarField sub(const ScalarField& a, const ScalarField& b);
ScalarField scaled(const ScalarField& a, double c);
ScalarField product(const ScalarField& a, const ScalarField& b);
void axpy(ScalarField& y, double alpha, const ScalarField& x);  // y += alpha*x
ScalarField apply_fn(const std::function<double(double)>& fn, const ScalarField& a);
bool all_finite(const ScalarField& a);

// Quadrature-weighted inner product hx*hy*sum(a*b) and derived norms.
// Gradients everywhere in this project are representers in this product.
double inner(const ScalarField& a, const ScalarField& b);
double norm_l2(const ScalarField& a);
double norm_max(const ScalarField& a);

// 5-point conservative stencil for div(a grad v).
// Face coefficients are arithmetic means of the adjacent nodal a values;
// at a face touching the boundary the coefficient is the interior node's
// value (one-sided extrapolation). v beyond the boundary is 0.
ScalarField div_coeff_grad(const ScalarField& a, const ScalarField& v);

// Plain 5-point Laplacian: div_coeff_grad with unit coefficient.
ScalarField laplacian(const ScalarField& v);

// Central-difference gradients dotted together: grad(a) . grad(b).
// Out-of-range neighbors are the boundary value 0.
ScalarField dot_grad(const ScalarField& a, const ScalarField& b);

// hx*hy * sum |v|^exponent, exponent >= 1.
double integrate_power(const ScalarField& v, double exponent);

// Adjoint of the coefficient slot of div_coeff_grad: the field W with
//   inner(div_coeff_grad(a, v), w) == inner(a, W) for every a.
// Built by walking faces once: W_k = -sum over faces at k of
// weight * (delta_f v)(delta_f w)/h_axis^2, weight 1/2 per side on interior
// faces and 1 on the interior side of boundary faces (the extrapolation
// rule's derivative).
ScalarField div_coeff_grad_wrt_coeff(const ScalarField& v, const ScalarField& w);

}  // namespace deadoil
