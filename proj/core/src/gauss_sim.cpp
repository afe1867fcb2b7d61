#include "gaussint/gauss_sim.hpp"

#include <cmath>
#include <stdexcept>

#include "gaussint/random.hpp"

namespace gaussint {

NoiseSample sample_noise(const GridSpec& grid, std::uint64_t seed, std::uint64_t stream) {
    NoiseSample noise{grid, Eigen::VectorXd(grid.n_cells()), seed, stream};
    Rng rng(seed, stream);
    rng.fill_normal(std::span<double>(noise.z.data(), static_cast<std::size_t>(noise.z.size())));
    return noise;
}

double pairing(const L2Vec& f, const NoiseSample& noise) {
    require_same_grid(f.grid(), noise.grid, "pairing");
    return std::sqrt(noise.grid.h()) * f.coeffs().dot(noise.z);
}

GaussPath GaussPath::zero(const GridSpec& grid, int dim) {
    GaussPath p{grid, {}, "zero", 0};
    for (int d = 0; d < dim; ++d) p.values.push_back(Eigen::VectorXd::Zero(grid.n_cells() + 1));
    return p;
}

namespace {

Eigen::VectorXd integrate_noise(const L2Operator& op, const NoiseSample& noise) {
    require_same_grid(op.grid(), noise.grid, "integrator_path");
    const int n = noise.grid.n_cells();
    const double sh = std::sqrt(noise.grid.h());
    const Eigen::VectorXd w = op.is_diagonal() ? Eigen::VectorXd(op.matrix().diagonal().cwiseProduct(noise.z))
                                               : Eigen::VectorXd(op.matrix().transpose() * noise.z);
    Eigen::VectorXd x(n + 1);
    x[0] = 0.0;
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
        acc += w[k];
        x[k + 1] = sh * acc;
    }
    return x;
}

}  // namespace

GaussPath integrator_path(const L2Operator& op, const NoiseSample& noise) {
    return GaussPath{noise.grid, {integrate_noise(op, noise)}, op.label(), noise.seed};
}

GaussPath integrator_path(const L2Operator& op, std::span<const NoiseSample> noises) {
    if (noises.empty()) throw std::invalid_argument("integrator_path: no noise");
    GaussPath p{noises.front().grid, {}, op.label(), noises.front().seed};
    for (const auto& noise : noises) p.values.push_back(integrate_noise(op, noise));
    return p;
}

double covariance(const L2Operator& op, double s, double t) {
    const GridSpec& grid = op.grid();
    const L2Vec gs = cell_indicator(grid, 0, grid.aligned_node(s));
    const L2Vec gt = cell_indicator(grid, 0, grid.aligned_node(t));
    return inner(apply(op, gs), apply(op, gt));
}

Eigen::MatrixXd covariance_matrix(const L2Operator& op, std::span<const double> times) {
    const GridSpec& grid = op.grid();
    std::vector<L2Vec> images;
    for (double t : times) images.push_back(apply(op, cell_indicator(grid, 0, grid.aligned_node(t))));
    const auto m = static_cast<Eigen::Index>(times.size());
    Eigen::MatrixXd c(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            c(i, j) = c(j, i) = inner(images[static_cast<std::size_t>(i)], images[static_cast<std::size_t>(j)]);
        }
    }
    return c;
}

GaussPath bridge_path(std::span<const double> a, std::span<const NoiseSample> noises) {
    if (a.size() != noises.size() || a.empty() || a.size() > 2) {
        throw std::invalid_argument("bridge_path: need one endpoint coordinate per noise, dim 1 or 2");
    }
    const GridSpec grid = noises.front().grid;
    const int n = grid.n_cells();
    GaussPath p{grid, {}, "bridge", noises.front().seed};
    for (std::size_t d = 0; d < a.size(); ++d) {
        require_same_grid(grid, noises[d].grid, "bridge_path");
        const double sh = std::sqrt(grid.h());
        Eigen::VectorXd w(n + 1);
        w[0] = 0.0;
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
            acc += noises[d].z[k];
            w[k + 1] = sh * acc;
        }
        Eigen::VectorXd y(n + 1);
        for (int k = 0; k <= n; ++k) {
            const double t = grid.node(k);
            y[k] = (w[k] - t * w[n]) + a[d] * t;
        }
        p.values.push_back(std::move(y));
    }
    return p;
}

}  // namespace gaussint
