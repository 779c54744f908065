#pragma once

#include "hjbfit/operator.hpp"

namespace hjbfit {

/// The two stencil weights produced by one axis-direction flux: the local
/// two-point boundary value problem on [x_lo, x_hi] yields
///   flux = up * v(x_hi) - down * v(x_lo)
/// with up = b x_hi^beta / (x_hi^beta - x_lo^beta), down the x_lo analogue and
/// beta = b / a_bar. Both weights stay positive for a_bar > 0.
struct FittedFactor {
    double beta = 0.0;
    double up = 0.0;
    double down = 0.0;
};

/// Evaluates the fitted weight pair. Requires 0 < x_lo < x_hi and a_bar >= 0
/// with (a_bar, b) != (0, 0). Below the degeneracy threshold
/// |b| <= 1e-10 * max(1, a_bar) the analytic limit a_bar / ln(x_hi/x_lo) is
/// returned for both weights. a_bar = 0 with b != 0 yields the pure upwind
/// limit (|beta| -> inf), which the assembly needs when the diffusion factor
/// vanishes at an admissible control.
FittedFactor fitted_pair(double b_mid, double a_bar_mid, double x_lo, double x_hi);

/// Explicit three-dimensional fitted finite volume assembly: seven-point
/// stencil with the degenerate-zone flux on the first cell of every axis that
/// starts at zero, forward-difference cross terms, all entries scaled by the
/// cell volume.
class FittedFvm3d final : public SpatialAssembler {
public:
    std::string_view name() const override { return "fitted3d"; }
    void row(const ControlProblem& problem, const TensorMesh& mesh, double tau,
             std::span<const int> idx, double alpha, StencilRow& out) const override;
};

/// Dimension-generic fitted finite volume assembly; agrees with FittedFvm3d
/// entrywise at n = 3.
class FittedFvmNd final : public SpatialAssembler {
public:
    std::string_view name() const override { return "fitted"; }
    void row(const ControlProblem& problem, const TensorMesh& mesh, double tau,
             std::span<const int> idx, double alpha, StencilRow& out) const override;
};

SpatialOperator assemble_3d(const ControlProblem& problem, const TensorMesh& mesh, double tau,
                            std::span<const double> alpha);
SpatialOperator assemble_nd(const ControlProblem& problem, const TensorMesh& mesh, double tau,
                            std::span<const double> alpha);

} // namespace hjbfit
