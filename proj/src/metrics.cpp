#include "hjbfit/metrics.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace hjbfit {

double l2_spacetime_error(const Trajectory& trajectory, const ExactEvaluator& exact,
                          const TensorMesh& mesh, double dt) {
    const long N = mesh.interior_count();
    const int m = static_cast<int>(trajectory.steps.size());
    if (m < 1) throw std::invalid_argument("l2_spacetime_error: trajectory has no time steps");
    for (int n = 0; n < m; ++n)
        if (trajectory.level(n).size() != N)
            throw std::invalid_argument("l2_spacetime_error: level size does not match the mesh");

    const int dim = mesh.dim();
    std::vector<int> idx(static_cast<size_t>(dim));
    std::vector<double> pt(static_cast<size_t>(dim));

    double acc = 0.0;
    for (int n = 0; n < m; ++n) { // terminal level excluded
        const double tau = n * dt;
        const Eigen::VectorXd& v = trajectory.level(n);
        std::fill(idx.begin(), idx.end(), 1);
        for (long I = 0; I < N; ++I) {
            mesh.point(idx, pt);
            const double diff = v[I] - exact(tau, pt);
            acc += dt * mesh.cell_volume(idx) * diff * diff;
            for (int d = 0; d < dim; ++d) {
                if (++idx[static_cast<size_t>(d)] <= mesh.axis(d).intervals() - 1) break;
                idx[static_cast<size_t>(d)] = 1;
            }
        }
    }
    return std::sqrt(acc);
}

double fit_temporal_order(std::span<const ErrorRecord> records) {
    std::set<int> distinct;
    for (const auto& r : records) distinct.insert(r.time_steps);
    if (records.size() < 2 || distinct.size() < 2)
        throw std::invalid_argument("fit_temporal_order: need records at two or more step counts");

    // log(dt) = -log(m) up to the common horizon, which only shifts the intercept
    double sx = 0.0, sy = 0.0;
    for (const auto& r : records) {
        if (!(r.l2_error > 0.0))
            throw std::invalid_argument("fit_temporal_order: errors must be positive");
        sx += -std::log(static_cast<double>(r.time_steps));
        sy += std::log(r.l2_error);
    }
    const double mx = sx / static_cast<double>(records.size());
    const double my = sy / static_cast<double>(records.size());
    double sxx = 0.0, sxy = 0.0;
    for (const auto& r : records) {
        const double dx = -std::log(static_cast<double>(r.time_steps)) - mx;
        const double dy = std::log(r.l2_error) - my;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    return sxy / sxx;
}

} // namespace hjbfit
