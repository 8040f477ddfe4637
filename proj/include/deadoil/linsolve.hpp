// Matrix-free GMRES for the (possibly indefinite, nonsymmetric) aggregate
// adjoint operator. Full-recurrence with Givens rotations, no restarts,
// no preconditioning; dimensions here are a few thousand at most.
#pragma once

#include <functional>
#include <vector>

#include "deadoil/common.hpp"

namespace deadoil {

struct LinearOperator {
    size_t dim = 0;
    std::function<std::vector<double>(const std::vector<double>&)> apply;
};

struct LinearSolveResult {
    std::vector<double> x;
    int iterations = 0;
    double residual = 0;  // recomputed directly as ||op(x) - rhs||_2
    bool converged = false;
};

// Minimizes ||op(x) - rhs||_2 over the Krylov space from x0 = 0. Converged
// when the residual drops below tol * max(||rhs||_2, tiny). The returned
// residual is an honest recomputation, not the recurrence estimate.
LinearSolveResult solve_linear(const LinearOperator& op, const std::vector<double>& rhs,
                               double tol, int max_iter);

}  // namespace deadoil
