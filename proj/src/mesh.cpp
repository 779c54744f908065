#include "hjbfit/mesh.hpp"

#include <stdexcept>

namespace hjbfit {

Axis::Axis(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 3)
        throw std::invalid_argument("Axis: need at least 2 intervals (3 nodes)");
    if (nodes_.front() < 0.0)
        throw std::invalid_argument("Axis: first node must be >= 0");
    for (size_t k = 0; k + 1 < nodes_.size(); ++k)
        if (!(nodes_[k] < nodes_[k + 1]))
            throw std::invalid_argument("Axis: nodes must be strictly increasing");

    const size_t n = nodes_.size() - 1;
    mid_.resize(n + 2);
    mid_.front() = nodes_.front();
    for (size_t k = 1; k <= n; ++k)
        mid_[k] = 0.5 * (nodes_[k - 1] + nodes_[k]);
    mid_.back() = nodes_.back();
}

Axis Axis::uniform(double lo, double hi, int n_intervals) {
    if (!(hi > lo))
        throw std::invalid_argument("Axis::uniform: hi must exceed lo");
    if (n_intervals < 2)
        throw std::invalid_argument("Axis::uniform: need at least 2 intervals");
    std::vector<double> nodes(static_cast<size_t>(n_intervals) + 1);
    for (int k = 0; k <= n_intervals; ++k)
        nodes[static_cast<size_t>(k)] = lo + (hi - lo) * k / n_intervals;
    nodes.back() = hi;
    return Axis(std::move(nodes));
}

TensorMesh::TensorMesh(std::vector<Axis> axes) : axes_(std::move(axes)) {
    if (axes_.empty())
        throw std::invalid_argument("TensorMesh: need at least one axis");
    strides_.resize(axes_.size());
    long stride = 1;
    for (size_t d = 0; d < axes_.size(); ++d) {
        strides_[d] = stride;
        stride *= axes_[d].interior_count();
    }
    interior_count_ = stride;
}

bool TensorMesh::is_interior(std::span<const int> idx) const {
    for (int d = 0; d < dim(); ++d) {
        const int k = idx[static_cast<size_t>(d)];
        if (k < 1 || k > axes_[static_cast<size_t>(d)].intervals() - 1) return false;
    }
    return true;
}

long TensorMesh::linearize(std::span<const int> idx) const {
    if (!is_interior(idx))
        throw std::invalid_argument("TensorMesh::linearize: index not interior");
    long flat = 0;
    for (int d = 0; d < dim(); ++d)
        flat += static_cast<long>(idx[static_cast<size_t>(d)] - 1) * strides_[static_cast<size_t>(d)];
    return flat + 1;
}

void TensorMesh::delinearize(long flat, std::span<int> idx) const {
    if (flat < 1 || flat > interior_count_)
        throw std::invalid_argument("TensorMesh::delinearize: flat index out of range");
    long rem = flat - 1;
    for (int d = 0; d < dim(); ++d) {
        const long n = axes_[static_cast<size_t>(d)].interior_count();
        idx[static_cast<size_t>(d)] = static_cast<int>(rem % n) + 1;
        rem /= n;
    }
}

double TensorMesh::cell_volume(std::span<const int> idx) const {
    if (!is_interior(idx))
        throw std::invalid_argument("TensorMesh::cell_volume: index not interior");
    double vol = 1.0;
    for (int d = 0; d < dim(); ++d)
        vol *= axes_[static_cast<size_t>(d)].spacing(idx[static_cast<size_t>(d)]);
    return vol;
}

void TensorMesh::point(std::span<const int> idx, std::span<double> coords) const {
    for (int d = 0; d < dim(); ++d)
        coords[static_cast<size_t>(d)] = axes_[static_cast<size_t>(d)].node(idx[static_cast<size_t>(d)]);
}

} // namespace hjbfit
