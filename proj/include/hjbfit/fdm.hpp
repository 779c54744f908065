#pragma once

#include "hjbfit/operator.hpp"

namespace hjbfit {

/// Standard finite difference comparison scheme: second derivatives by
/// central three-point differences with the diffusion coefficient frozen at
/// the node, first derivatives by first-order upwinding on the sign of the
/// node drift x_d * b_d, cross terms and boundary handling identical to the
/// fitted assembly. The first cell gets no special treatment.
class UpwindFdm final : public SpatialAssembler {
public:
    std::string_view name() const override { return "fdm"; }
    void row(const ControlProblem& problem, const TensorMesh& mesh, double tau,
             std::span<const int> idx, double alpha, StencilRow& out) const override;
};

SpatialOperator assemble_fdm(const ControlProblem& problem, const TensorMesh& mesh, double tau,
                             std::span<const double> alpha);

} // namespace hjbfit
