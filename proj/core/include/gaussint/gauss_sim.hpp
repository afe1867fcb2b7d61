#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gaussint/grid.hpp"
#include "gaussint/l2operator.hpp"
#include "gaussint/l2vec.hpp"

namespace gaussint {

/// Discretized white noise: one standard normal per cell.
struct NoiseSample {
    GridSpec grid;
    Eigen::VectorXd z;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

NoiseSample sample_noise(const GridSpec& grid, std::uint64_t seed, std::uint64_t stream = 0);

/// (f, xi) = sqrt(h) * sum f_i z_i.
double pairing(const L2Vec& f, const NoiseSample& noise);

/// Path sampled at the n_cells + 1 grid nodes; one value row per dimension.
struct GaussPath {
    GridSpec grid;
    std::vector<Eigen::VectorXd> values;
    std::string operator_id;
    std::uint64_t seed = 0;

    int dim() const noexcept { return static_cast<int>(values.size()); }
    /// Deterministic zero path (the image of the zero operator).
    static GaussPath zero(const GridSpec& grid, int dim = 1);
};

/// x(t_k) = (A 1_[0,t_k], xi), computed as prefix sums of sqrt(h) A^T z.
GaussPath integrator_path(const L2Operator& op, const NoiseSample& noise);

/// Same for several independent noises, one per dimension.
GaussPath integrator_path(const L2Operator& op, std::span<const NoiseSample> noises);

/// (A 1_[0,s], A 1_[0,t]) for grid-aligned s, t.
double covariance(const L2Operator& op, double s, double t);

/// Covariance matrix of (x(t_1), ..., x(t_m)).
Eigen::MatrixXd covariance_matrix(const L2Operator& op, std::span<const double> times);

/// y(t_k) = w(t_k) - t_k w(1) + a t_k per coordinate, w built from noises[d].
/// The endpoint a has one entry per dimension (1 or 2).
GaussPath bridge_path(std::span<const double> a, std::span<const NoiseSample> noises);

}  // namespace gaussint
