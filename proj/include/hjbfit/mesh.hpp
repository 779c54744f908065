#pragma once

#include <span>
#include <vector>

namespace hjbfit {

/// One spatial axis of the tensor-product grid: strictly increasing nodes
/// x_0 < x_1 < ... < x_N plus the midpoint partition x_{k+1/2} with clamped
/// endpoints (x_{-1/2} = x_0, x_{N+1/2} = x_N).
class Axis {
public:
    explicit Axis(std::vector<double> nodes);

    /// Equally spaced axis with n_intervals cells on [lo, hi].
    static Axis uniform(double lo, double hi, int n_intervals);

    int intervals() const { return static_cast<int>(nodes_.size()) - 1; }
    int interior_count() const { return intervals() - 1; }

    double node(int k) const { return nodes_[static_cast<size_t>(k)]; }
    /// x_{k-1/2}; k in [0, intervals()].
    double mid_below(int k) const { return mid_[static_cast<size_t>(k)]; }
    /// x_{k+1/2}; k in [0, intervals()].
    double mid_above(int k) const { return mid_[static_cast<size_t>(k) + 1]; }
    /// h_{x_k} = x_{k+1/2} - x_{k-1/2}; k in [0, intervals()].
    double spacing(int k) const { return mid_above(k) - mid_below(k); }

    double lo() const { return nodes_.front(); }
    double hi() const { return nodes_.back(); }
    /// The first cell [x_0, x_1] is the degenerate zone only when x_0 = 0.
    bool starts_at_zero() const { return nodes_.front() == 0.0; }

    std::span<const double> nodes() const { return nodes_; }

private:
    std::vector<double> nodes_;
    std::vector<double> mid_; // mid_[k] = x_{k-1/2}, k = 0..N+1
};

/// Tensor product of axes. Interior nodes carry multi-indices with every
/// component in [1, N_d - 1]; they are linearized with axis 0 fastest,
/// matching I(i,j,k) = i + (j-1)n1 + (k-1)n1n2 (1-based).
class TensorMesh {
public:
    explicit TensorMesh(std::vector<Axis> axes);

    int dim() const { return static_cast<int>(axes_.size()); }
    const Axis& axis(int d) const { return axes_[static_cast<size_t>(d)]; }

    /// Number of interior nodes, prod_d (N_d - 1).
    long interior_count() const { return interior_count_; }

    bool is_interior(std::span<const int> idx) const;

    /// 1-based linearization of an interior multi-index onto 1..interior_count().
    long linearize(std::span<const int> idx) const;
    /// Inverse of linearize; writes dim() components.
    void delinearize(long flat, std::span<int> idx) const;

    /// Product of the per-axis spacings h at an interior multi-index.
    double cell_volume(std::span<const int> idx) const;

    /// Coordinates of the node at idx (any node, not only interior).
    void point(std::span<const int> idx, std::span<double> coords) const;

private:
    std::vector<Axis> axes_;
    std::vector<long> strides_;
    long interior_count_ = 0;
};

} // namespace hjbfit
