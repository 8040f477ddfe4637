#include "deadoil/linsolve.hpp"

#include <cmath>

namespace deadoil {

namespace {

double nrm2(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

}  // namespace

LinearSolveResult solve_linear(const LinearOperator& op, const std::vector<double>& rhs,
                               double tol, int max_iter) {
    require(op.dim == rhs.size(), "solve_linear: operator and rhs dimensions differ");
    require(tol > 0 && max_iter >= 1, "solve_linear: need tol > 0 and max_iter >= 1");
    const size_t n = op.dim;
    LinearSolveResult out;
    out.x.assign(n, 0.0);

    const double rhs_norm = nrm2(rhs);
    if (rhs_norm == 0.0) {
        out.converged = true;
        return out;
    }
    const double target = tol * rhs_norm;
    const int m = std::min<int>(max_iter, static_cast<int>(n));

    // Arnoldi basis and Hessenberg factors kept dense; Givens rotations
    // maintain the least-squares residual estimate.
    std::vector<std::vector<double>> V;
    V.push_back(rhs);
    for (double& x : V[0]) x /= rhs_norm;
    std::vector<std::vector<double>> H;  // H[j] holds column j, length j+2
    std::vector<double> cs, sn, beta;
    beta.push_back(rhs_norm);

    int j = 0;
    double est = rhs_norm;
    for (; j < m; ++j) {
        std::vector<double> w = op.apply(V[j]);
        require_numeric(w.size() == n, "solve_linear: operator changed dimension");
        std::vector<double> hcol(j + 2, 0.0);
        for (int i = 0; i <= j; ++i) {
            hcol[i] = dot(w, V[i]);
            for (size_t k = 0; k < n; ++k) w[k] -= hcol[i] * V[i][k];
        }
        const double subdiag = nrm2(w);
        hcol[j + 1] = subdiag;
        // apply the accumulated rotations to the new column
        for (int i = 0; i < j; ++i) {
            const double t = cs[i] * hcol[i] + sn[i] * hcol[i + 1];
            hcol[i + 1] = -sn[i] * hcol[i] + cs[i] * hcol[i + 1];
            hcol[i] = t;
        }
        const double denom = std::hypot(hcol[j], hcol[j + 1]);
        require_numeric(finite(denom), "solve_linear: nonfinite Arnoldi entries");
        double c = 1.0, s = 0.0;
        if (denom > 0) {
            c = hcol[j] / denom;
            s = hcol[j + 1] / denom;
        }
        cs.push_back(c);
        sn.push_back(s);
        beta.push_back(-s * beta[j]);
        beta[j] = c * beta[j];
        hcol[j] = denom;
        hcol[j + 1] = 0.0;
        H.push_back(std::move(hcol));
        est = std::abs(beta[j + 1]);

        if (est <= target) {
            ++j;
            break;
        }
        if (subdiag == 0.0) {  // happy breakdown: solution lies in the space
            ++j;
            break;
        }
        if (j + 1 < m) {
            std::vector<double> vnext = std::move(w);
            for (double& x : vnext) x /= subdiag;
            V.push_back(std::move(vnext));
        }
    }

    // back-substitute y from the triangularized system, x = V * y
    const int k = j;
    std::vector<double> y(k, 0.0);
    for (int i = k - 1; i >= 0; --i) {
        double s = beta[i];
        for (int l = i + 1; l < k; ++l) s -= H[l][i] * y[l];
        require_numeric(H[i][i] != 0.0, "solve_linear: singular least-squares system");
        y[i] = s / H[i][i];
    }
    for (int i = 0; i < k; ++i)
        for (size_t idx = 0; idx < n; ++idx) out.x[idx] += y[i] * V[i][idx];

    std::vector<double> r = op.apply(out.x);
    for (size_t idx = 0; idx < n; ++idx) r[idx] -= rhs[idx];
    out.residual = nrm2(r);
    out.iterations = k;
    out.converged = out.residual <= std::max(target, 1e2 * 1e-16 * rhs_norm);
    return out;
}

}  // namespace deadoil
