#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "ctp/common.hpp"
#include "ctp/experiment.hpp"
#include "ctp/lattice.hpp"
#include "ctp/matrix.hpp"

namespace ctp {

/// Non-normalized per-slit wave function at a fixed slice.
struct WaveFunction {
    std::vector<Complex> values;
    int slit = 0; // originating slit (1-based)
    int time = 0;

    double norm_squared() const
    {
        double acc = 0.0;
        for (const Complex& v : values)
            acc += std::norm(v);
        return acc;
    }
};

/// Non-normalized density matrix rho(x+, x-) at a fixed slice.
struct DensityMatrix {
    ComplexMatrix entries;
    int time = 0;
    int rank_bound = 0;
};

/// psi_k at slice t, one per slit: the slit-k component of the prepared
/// state. Defined from the barrier slice onward.
inline std::vector<WaveFunction> slit_wavefunctions(const SlitExperiment& exp, int t)
{
    exp.validate();
    if (t < exp.barrier_t)
        throw DomainError("slit_wavefunctions: slice precedes the barrier");
    if (t > exp.config.steps)
        throw DomainError("slit_wavefunctions: slice beyond the lattice");
    std::vector<WaveFunction> out;
    out.reserve(static_cast<std::size_t>(exp.slit_count()));
    for (int k = 1; k <= exp.slit_count(); ++k)
        out.push_back(WaveFunction{component_state(exp, k, t), k, t});
    return out;
}

/// rho = sum over preparation components. Measured slits contribute one
/// rank-1 term each; the unmeasured slits form a single pure component, so
/// their psi_k are summed before the outer product.
inline DensityMatrix assemble_density(const std::vector<WaveFunction>& components,
                                      const SlitExperiment& exp)
{
    exp.validate();
    if (components.empty())
        throw DomainError("assemble_density: no components");
    const int sites = static_cast<int>(components.front().values.size());
    const int time = components.front().time;
    for (const WaveFunction& c : components) {
        if (static_cast<int>(c.values.size()) != sites)
            throw DomainError("assemble_density: component sizes differ");
        if (c.time != time)
            throw DomainError("assemble_density: components at different slices");
    }

    std::vector<std::size_t> order(components.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return components[a].slit < components[b].slit;
    });

    DensityMatrix rho;
    rho.entries = ComplexMatrix(sites, sites);
    rho.time = time;

    auto accumulate = [&](const std::vector<Complex>& psi) {
        for (int i = 0; i < sites; ++i)
            for (int j = 0; j < sites; ++j)
                rho.entries.at(i, j) += psi[static_cast<std::size_t>(i)]
                    * std::conj(psi[static_cast<std::size_t>(j)]);
    };

    std::vector<Complex> unmeasured_sum;
    bool have_unmeasured = false;
    for (std::size_t idx : order) {
        const WaveFunction& c = components[idx];
        if (exp.is_measured(c.slit)) {
            accumulate(c.values);
            ++rho.rank_bound;
        } else if (!have_unmeasured) {
            unmeasured_sum = c.values;
            have_unmeasured = true;
        } else {
            for (int i = 0; i < sites; ++i)
                unmeasured_sum[static_cast<std::size_t>(i)] +=
                    c.values[static_cast<std::size_t>(i)];
        }
    }
    if (have_unmeasured) {
        accumulate(unmeasured_sum);
        ++rho.rank_bound;
    }
    return rho;
}

/// diag(rho) as the real observed pattern at rho's slice.
inline std::vector<double> diagonal_pattern(const DensityMatrix& rho)
{
    const int n = rho.entries.rows();
    double scale = 1.0;
    for (int i = 0; i < n; ++i)
        scale = std::max(scale, std::abs(rho.entries.at(i, i).real()));
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Complex d = rho.entries.at(i, i);
        if (std::abs(d.imag()) > 1e-10 * scale)
            throw InvariantError("density diagonal has a non-real entry");
        out[static_cast<std::size_t>(i)] = d.real();
    }
    return out;
}

/// rho' = (M K) rho (M K)^H per step under the experiment's full geometry.
inline DensityMatrix evolve_density(const DensityMatrix& rho, const SlitExperiment& exp,
                                    int steps)
{
    exp.validate();
    if (steps < 0)
        throw DomainError("evolve_density: negative step count");
    if (rho.time + steps > exp.config.steps)
        throw DomainError("evolve_density: evolution passes the final slice");
    const LatticeConfig cfg = exp.masked_config();
    if (rho.entries.rows() != cfg.sites || rho.entries.cols() != cfg.sites)
        throw DomainError("evolve_density: matrix size does not match the lattice");
    const PropagatorMatrix kernel(cfg);
    const int hop = cfg.effective_hop_range();

    DensityMatrix out = rho;
    for (int step = 0; step < steps; ++step) {
        const int t_next = out.time + 1;
        const int n = cfg.sites;
        // tmp = K rho
        ComplexMatrix tmp(n, n);
        for (int i = 0; i < n; ++i) {
            if (!cfg.site_open(t_next, i))
                continue; // row masked
            const int lo = std::max(0, i - hop);
            const int hi = std::min(n - 1, i + hop);
            for (int j = 0; j < n; ++j) {
                Complex acc{};
                for (int m = lo; m <= hi; ++m)
                    acc += kernel.entry(i, m) * out.entries.at(m, j);
                tmp.at(i, j) = acc;
            }
        }
        // out = tmp K^H, columns masked
        ComplexMatrix next(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (!cfg.site_open(t_next, j))
                    continue;
                const int lo = std::max(0, j - hop);
                const int hi = std::min(n - 1, j + hop);
                Complex acc{};
                for (int m = lo; m <= hi; ++m)
                    acc += tmp.at(i, m) * std::conj(kernel.entry(j, m));
                next.at(i, j) = acc;
            }
        out.entries = std::move(next);
        out.time = t_next;
    }
    return out;
}

/// Structural summary used by the CLI dump and the invariant tests.
struct DensityReport {
    double hermiticity_residual = 0.0;
    double min_eigenvalue = 0.0;
    double trace = 0.0;
    int rank = 0;
};

inline DensityReport density_report(const DensityMatrix& rho)
{
    DensityReport r;
    r.hermiticity_residual = rho.entries.hermiticity_residual();
    auto eigs = hermitian_eigenvalues(rho.entries);
    r.min_eigenvalue = eigs.empty() ? 0.0 : eigs.front();
    r.trace = rho.entries.trace().real();
    r.rank = rank_estimate(rho.entries);
    return r;
}

} // namespace ctp
