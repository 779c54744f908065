#include "hjbfit/problem.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace hjbfit {

ControlSet ControlSet::uniform(double lo, double hi, int count) {
    if (!(hi >= lo))
        throw std::invalid_argument("ControlSet::uniform: hi must be >= lo");
    if (count < 1)
        throw std::invalid_argument("ControlSet::uniform: need at least one sample");
    ControlSet set;
    set.lo = lo;
    set.hi = hi;
    if (count == 1 || hi == lo) {
        set.samples.assign(1, lo);
        set.hi = set.samples.back();
        return set;
    }
    set.samples.resize(static_cast<size_t>(count));
    for (int k = 0; k < count; ++k)
        set.samples[static_cast<size_t>(k)] = lo + (hi - lo) * k / (count - 1);
    set.samples.back() = hi;
    return set;
}

void ControlSet::check() const {
    if (samples.empty())
        throw std::invalid_argument("ControlSet: samples must be nonempty");
    for (size_t k = 0; k + 1 < samples.size(); ++k)
        if (!(samples[k] < samples[k + 1]))
            throw std::invalid_argument("ControlSet: samples must be sorted strictly");
    if (samples.front() < lo || samples.back() > hi)
        throw std::invalid_argument("ControlSet: samples outside [lo, hi]");
}

double diffusion_entry(const ControlProblem& problem, double tau, std::span<const double> x,
                       double alpha, int i, int r) {
    if (i < 1 || i > problem.dim || r < 1 || r > problem.dim)
        throw std::invalid_argument("diffusion_entry: axis index out of range");
    const int a = i - 1;
    const int b = r - 1;
    if (i == r) {
        const double xi = x[static_cast<size_t>(a)];
        return problem.a_bar(a, tau, x, alpha) * xi * xi;
    }
    double prod = 1.0;
    for (int d = 0; d < problem.dim; ++d) prod *= x[static_cast<size_t>(d)];
    if (prod == 0.0 || !problem.cross) return 0.0;
    // evaluate with sorted pair so entry(i,r) == entry(r,i) exactly
    const int lo_ax = a < b ? a : b;
    const int hi_ax = a < b ? b : a;
    return problem.cross(lo_ax, hi_ax, tau, x, alpha) * prod;
}

std::string Violation::describe() const {
    const char* what = "";
    switch (kind) {
        case Kind::kNonPositiveDiffusion: what = "a_bar <= 0"; break;
        case Kind::kAsymmetricCross: what = "d_ir != d_ri"; break;
        case Kind::kNonNegativeZeroth: what = "c >= 0"; break;
    }
    char buf[256];
    if (kind == Kind::kAsymmetricCross)
        std::snprintf(buf, sizeof(buf), "%s (axes %d,%d) tau=%g alpha=%g value=%.6g probes=%ld",
                      what, axis_i, axis_r, tau, alpha, value, count);
    else if (kind == Kind::kNonPositiveDiffusion)
        std::snprintf(buf, sizeof(buf), "%s (axis %d) tau=%g alpha=%g value=%.6g probes=%ld",
                      what, axis_i, tau, alpha, value, count);
    else
        std::snprintf(buf, sizeof(buf), "%s tau=%g alpha=%g value=%.6g probes=%ld",
                      what, tau, alpha, value, count);
    return buf;
}

std::vector<Violation> validate(const ControlProblem& problem, const TensorMesh& mesh,
                                const ControlSet& controls) {
    controls.check();
    const int n = problem.dim;
    const double T = problem.horizon;
    const double taus[3] = {0.0, 0.5 * T, T};

    // one bucket per (kind, axis pair, tau index, sample index)
    std::map<std::tuple<int, int, int, int, int>, Violation> buckets;
    auto record = [&](Violation::Kind kind, int ai, int ar, int ti, int si,
                      std::span<const double> pt, double tau, double alpha, double value, bool worse) {
        auto key = std::make_tuple(static_cast<int>(kind), ai, ar, ti, si);
        auto it = buckets.find(key);
        if (it == buckets.end()) {
            Violation v;
            v.kind = kind;
            v.axis_i = ai;
            v.axis_r = ar;
            v.tau = tau;
            v.alpha = alpha;
            v.point.assign(pt.begin(), pt.end());
            v.value = value;
            v.count = 1;
            buckets.emplace(key, std::move(v));
        } else {
            ++it->second.count;
            if (worse) {
                it->second.value = value;
                it->second.point.assign(pt.begin(), pt.end());
            }
        }
    };

    std::vector<int> idx(static_cast<size_t>(n), 0);
    std::vector<double> pt(static_cast<size_t>(n), 0.0);
    const long total_nodes = [&] {
        long t = 1;
        for (int d = 0; d < n; ++d) t *= mesh.axis(d).intervals() + 1;
        return t;
    }();

    for (long node = 0; node < total_nodes; ++node) {
        long rem = node;
        bool positive = true;
        for (int d = 0; d < n; ++d) {
            const int nd = mesh.axis(d).intervals() + 1;
            idx[static_cast<size_t>(d)] = static_cast<int>(rem % nd);
            rem /= nd;
            pt[static_cast<size_t>(d)] = mesh.axis(d).node(idx[static_cast<size_t>(d)]);
            positive = positive && pt[static_cast<size_t>(d)] > 0.0;
        }
        if (!positive) continue; // cross factors may be unbounded on degenerate faces
        for (int ti = 0; ti < 3; ++ti) {
            for (int si = 0; si < static_cast<int>(controls.samples.size()); ++si) {
                const double tau = taus[ti];
                const double al = controls.samples[static_cast<size_t>(si)];
                for (int d = 0; d < n; ++d) {
                    const double a = problem.a_bar(d, tau, pt, al);
                    if (!(a > 0.0))
                        record(Violation::Kind::kNonPositiveDiffusion, d, -1, ti, si, pt, tau, al, a, a <= 0.0);
                }
                if (problem.cross) {
                    for (int i = 0; i < n; ++i)
                        for (int r = i + 1; r < n; ++r) {
                            const double dir = problem.cross(i, r, tau, pt, al);
                            const double dri = problem.cross(r, i, tau, pt, al);
                            const double gap = std::abs(dir - dri);
                            const double scale = std::abs(dir) + std::abs(dri) + 1.0;
                            if (gap > 1e-14 * scale)
                                record(Violation::Kind::kAsymmetricCross, i, r, ti, si, pt, tau, al, gap, true);
                        }
                }
                const double c = problem.zeroth(tau, pt, al);
                if (c >= 0.0)
                    record(Violation::Kind::kNonNegativeZeroth, -1, -1, ti, si, pt, tau, al, c, true);
            }
        }
    }

    std::vector<Violation> out;
    out.reserve(buckets.size());
    for (auto& [key, v] : buckets) out.push_back(std::move(v));
    return out;
}

} // namespace hjbfit
