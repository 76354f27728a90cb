#include "canard/classify.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace canard {

namespace {

double det(const Matrix& m, const std::vector<int>& rows) {
    const int n = static_cast<int>(rows.size());
    if (n == 1) return m[rows[0]][rows[0]];
    double sum = 0.0;
    double sign = 1.0;
    for (int c = 0; c < n; ++c) {
        std::vector<int> minor_rows;
        for (int r = 1; r < n; ++r) minor_rows.push_back(rows[r]);
        // expand along the first row of the principal submatrix
        std::vector<int> cols;
        for (int cc = 0; cc < n; ++cc)
            if (cc != c) cols.push_back(rows[cc]);
        // build the (n-1) sub-determinant explicitly
        double sub;
        if (n == 2) {
            sub = m[minor_rows[0]][cols[0]];
        } else {
            // recurse on a dense copy restricted to (minor_rows x cols)
            Matrix block(n - 1, std::vector<double>(n - 1));
            for (int r = 0; r < n - 1; ++r)
                for (int cc = 0; cc < n - 1; ++cc)
                    block[r][cc] = m[minor_rows[r]][cols[cc]];
            std::vector<int> all(n - 1);
            for (int i = 0; i < n - 1; ++i) all[i] = i;
            sub = det(block, all);
        }
        sum += sign * m[rows[0]][rows[c]] * sub;
        sign = -sign;
    }
    return sum;
}

}  // namespace

double principal_minor_sum(const Matrix& m, int order) {
    const int n = static_cast<int>(m.size());
    double sum = 0.0;
    std::vector<int> idx(order);
    // enumerate index subsets of the given order (n <= 4, so this is cheap)
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == order) {
            sum += det(m, idx);
            return;
        }
        for (int i = start; i < n; ++i) {
            idx[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
    return sum;
}

Matrix normalized_slow_jacobian(const SlowFastSystem& system,
                                const PseudoSingularity& psp) {
    const int n = system.dim();
    const int y = system.k;
    const Jet2 g = system.fast_field.jet(psp.state, system.params);
    std::vector<Jet2> f(system.k);
    for (int i = 0; i < system.k; ++i)
        f[i] = system.slow_fields[i].jet(psp.state, system.params);

    Matrix jac(n, std::vector<double>(n, 0.0));
    // Fi = -fi * dg1/dy1
    for (int i = 0; i < system.k; ++i)
        for (int j = 0; j < n; ++j)
            jac[i][j] = -(f[i].grad(j) * g.grad(y) +
                          f[i].value() * g.hess(j, y));
    // G1 = sum_l dg1/dxl * fl
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < system.k; ++l)
            s += g.hess(l, j) * f[l].value() + g.grad(l) * f[l].grad(j);
        jac[y][j] = s;
    }
    return jac;
}

SigmaReport sigma_invariants(const Matrix& jacobian) {
    const int n = static_cast<int>(jacobian.size());
    if (n != 3 && n != 4)
        throw std::invalid_argument("sigma_invariants: matrix must be 3x3 or 4x4");
    for (const auto& row : jacobian)
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("sigma_invariants: matrix not square");

    SigmaReport rep;
    rep.k = n - 1;
    rep.sigma1 = principal_minor_sum(jacobian, 1);
    rep.sigma2 = principal_minor_sum(jacobian, 2);
    rep.sigma3 = principal_minor_sum(jacobian, 3);
    rep.sigma4 = n == 4 ? principal_minor_sum(jacobian, 4) : 0.0;
    rep.delta = rep.sigma1 * rep.sigma1 - 4.0 * rep.sigma2;

    if (rep.delta >= 0.0) {
        const double root = std::sqrt(rep.delta);
        rep.lambda1 = 0.5 * (rep.sigma1 + root);
        rep.lambda2 = 0.5 * (rep.sigma1 - root);
    } else {
        const double im = 0.5 * std::sqrt(-rep.delta);
        rep.lambda1 = {0.5 * rep.sigma1, im};
        rep.lambda2 = {0.5 * rep.sigma1, -im};
    }

    if (std::abs(rep.sigma2) < 1e-12)
        rep.kind = FoldedKind::Degenerate;
    else if (rep.sigma2 < 0.0)
        rep.kind = FoldedKind::Saddle;
    else if (rep.delta > 0.0)
        rep.kind = FoldedKind::Node;
    else
        rep.kind = FoldedKind::Focus;
    return rep;
}

NormalFormCoefficients normal_form_coefficients(const SlowFastSystem& system,
                                                const PseudoSingularity& psp) {
    const int y = system.k;
    const Jet2 g = system.fast_field.jet(psp.state, system.params);
    const Jet2 f1 = system.slow_fields[0].jet(psp.state, system.params);
    const double f2 = system.slow_fields[1](psp.state, system.params);
    const double gx1 = g.grad(0);
    const double gyy = g.hess(y, y);

    NormalFormCoefficients nf;
    nf.b_coeff = -gx1 * f1.grad(y);
    nf.a_coeff =
        0.5 * f2 * f2 * (g.hess(1, 1) * gyy - g.hess(1, y) * g.hess(1, y)) +
        0.5 * f2 * gx1 * (gyy * f1.grad(1) - g.hess(1, y) * f1.grad(y));
    if (system.k == 3) {
        const double f3 = system.slow_fields[2](psp.state, system.params);
        nf.a_coeff +=
            0.5 * f3 * f3 *
                (g.hess(2, 2) * gyy - g.hess(2, y) * g.hess(2, y)) +
            0.5 * f3 * gx1 * (gyy * f1.grad(2) - g.hess(2, y) * f1.grad(y)) +
            f2 * f3 * (g.hess(1, 2) * gyy - g.hess(1, y) * g.hess(2, y));
    }
    return nf;
}

SigmaReport classify_folded_singularity(const SlowFastSystem& system,
                                        const PseudoSingularity& psp) {
    return sigma_invariants(normalized_slow_jacobian(system, psp));
}

const char* folded_kind_name(FoldedKind kind) {
    switch (kind) {
        case FoldedKind::Saddle: return "folded-saddle";
        case FoldedKind::Node: return "folded-node";
        case FoldedKind::Focus: return "folded-focus";
        case FoldedKind::Degenerate: return "degenerate";
    }
    return "unknown";
}

}  // namespace canard
