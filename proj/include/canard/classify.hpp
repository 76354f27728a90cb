#pragma once

#include <complex>
#include <vector>

#include "canard/folded.hpp"
#include "canard/system.hpp"

namespace canard {

enum class FoldedKind { Saddle, Node, Focus, Degenerate };

/// Invariants of the normalized-slow-dynamics Jacobian at a
/// pseudo-singularity. sigma_i is the sum of all i-th order principal
/// minors; lambda1/lambda2 are the roots of lambda^2 - sigma1 lambda +
/// sigma2, the two nonzero eigenvalues.
struct SigmaReport {
    int k = 2;
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double sigma3 = 0.0;  // determinant for k = 2, 3x3 minor sum for k = 3
    double sigma4 = 0.0;  // determinant for k = 3, unused for k = 2
    double delta = 0.0;   // sigma1^2 - 4 sigma2
    std::complex<double> lambda1;
    std::complex<double> lambda2;
    FoldedKind kind = FoldedKind::Degenerate;

    bool canard_exists() const { return kind == FoldedKind::Saddle; }
};

struct NormalFormCoefficients {
    double a_coeff = 0.0;  // a (k = 2) or a-tilde (k = 3)
    double b_coeff = 0.0;  // b or b-tilde
};

using Matrix = std::vector<std::vector<double>>;

/// Jacobian of (F1, ..., Fk, G1) at a pseudo-singularity, where
/// Fi = -fi * dg1/dy1 and G1 = sum_j dg1/dxj * fj, assembled from jets.
Matrix normalized_slow_jacobian(const SlowFastSystem& system,
                                const PseudoSingularity& psp);

SigmaReport sigma_invariants(const Matrix& jacobian);

/// Sum of all principal minors of the given order, by exact subset
/// enumeration (matrix sizes <= 4).
double principal_minor_sum(const Matrix& m, int order);

/// Closed-form normal-form coefficients from the partials at the point;
/// satisfies sigma2 = 2 a and sigma1 = -b.
NormalFormCoefficients normal_form_coefficients(const SlowFastSystem& system,
                                                const PseudoSingularity& psp);

SigmaReport classify_folded_singularity(const SlowFastSystem& system,
                                        const PseudoSingularity& psp);

const char* folded_kind_name(FoldedKind kind);

}  // namespace canard
