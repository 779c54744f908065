#pragma once

#include "hjbfit/mesh.hpp"

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace hjbfit {

/// Discretized compact control set: sorted samples spanning [lo, hi].
struct ControlSet {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> samples;

    static ControlSet uniform(double lo, double hi, int count);
    void check() const;
};

/// Dirichlet data source per box face.
struct BoundaryPolicy {
    enum class Mode { kCallback, kZero };

    explicit BoundaryPolicy(int dim, Mode all = Mode::kCallback)
        : faces(static_cast<size_t>(dim), {all, all}) {}

    Mode mode(int axis, int side) const { return faces[static_cast<size_t>(axis)][static_cast<size_t>(side)]; }
    void set(int axis, int side, Mode m) { faces[static_cast<size_t>(axis)][static_cast<size_t>(side)] = m; }

    std::vector<std::array<Mode, 2>> faces; // [axis][side]; side 0 = lower face, 1 = upper
};

/// Control problem in divergence form. The diffusion matrix factors as
/// a_ii = a_bar_i * x_i^2 and a_ir = d_ir * prod_k x_k (i != r, symmetric);
/// the convective field is (x_1 b_1, ..., x_n b_n) and c multiplies v.
/// Callbacks must be pure functions of (tau, point, alpha); axis arguments
/// are 0-based.
struct ControlProblem {
    int dim = 0;
    double horizon = 1.0;

    std::function<double(int axis, double tau, std::span<const double> x, double alpha)> a_bar;
    std::function<double(int axis, double tau, std::span<const double> x, double alpha)> drift;
    /// d_ir for i != r; may be null when the problem has no cross diffusion.
    std::function<double(int i, int r, double tau, std::span<const double> x, double alpha)> cross;
    std::function<double(double tau, std::span<const double> x, double alpha)> zeroth;
    /// Running reward f; may be null (treated as 0).
    std::function<double(double tau, std::span<const double> x, double alpha)> source;
    std::function<double(std::span<const double> x)> terminal;
    /// Dirichlet values on faces with Mode::kCallback.
    std::function<double(double tau, std::span<const double> x)> boundary;
    BoundaryPolicy boundary_policy{1};

    bool has_cross() const { return static_cast<bool>(cross); }
    double source_at(double tau, std::span<const double> x, double alpha) const {
        return source ? source(tau, x, alpha) : 0.0;
    }
    double boundary_value(int axis, int side, double tau, std::span<const double> x) const {
        return boundary_policy.mode(axis, side) == BoundaryPolicy::Mode::kZero ? 0.0 : boundary(tau, x);
    }
};

/// Entry (i, r) of the diffusion matrix A, 1-based per the usual matrix
/// notation. Returns 0 on degenerate faces (any zero coordinate) without
/// invoking the cross callback, which may be unbounded there.
double diffusion_entry(const ControlProblem& problem, double tau, std::span<const double> x,
                       double alpha, int i, int r);

/// One coefficient-hypothesis violation found by validate(). `count` is the
/// number of probes that failed for this (kind, axis pair, tau, alpha) bucket;
/// point/value describe the worst offender.
struct Violation {
    enum class Kind { kNonPositiveDiffusion, kAsymmetricCross, kNonNegativeZeroth };

    Kind kind;
    int axis_i = -1; // 0-based; for kAsymmetricCross the pair (axis_i, axis_r)
    int axis_r = -1;
    double tau = 0.0;
    double alpha = 0.0;
    std::vector<double> point;
    double value = 0.0;
    long count = 0;

    std::string describe() const;
};

/// Probes the coefficient callbacks over tau in {0, T/2, T}, every mesh node
/// with all-positive coordinates and every control sample. Reports a_bar <= 0,
/// asymmetric d_ir and c >= 0. Report-only: an empty result means the
/// monotonicity hypotheses hold on the probe set.
std::vector<Violation> validate(const ControlProblem& problem, const TensorMesh& mesh,
                                const ControlSet& controls);

} // namespace hjbfit
