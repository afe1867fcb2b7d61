#pragma once

#include <Eigen/Dense>

#include "gaussint/l2operator.hpp"

namespace gaussint {

/// Evaluates ||A1 1_[0,t] - A2 1_[0,s]||^2 for arbitrary (not grid-aligned)
/// s, t in [0, 1], using the full L2 extension of each operator (matrix on
/// step functions, complement scale on the rest).
///
/// Dense operators cost O(n) per call after O(n^2) setup; when both
/// operators are diagonal each call is O(1).
class IndicatorImageNorm {
public:
    IndicatorImageNorm(const L2Operator& a1, const L2Operator& a2);

    double operator()(double t, double s) const;

    int n_cells() const noexcept { return n_; }

private:
    double dense(int kt, double th_t, int ks, double th_s) const;
    double diagonal(int kt, double th_t, int ks, double th_s) const;

    int n_;
    double h_;
    bool diagonal_;
    bool same_;
    Eigen::VectorXd alpha1_, alpha2_;
    // Dense: column prefix sums C1[:, k] = sum_{j<k} M1[:, j], D = M1 - M2.
    Eigen::MatrixXd m1_, c1_, d_, cd_;
    // Diagonal: prefix sums of squares.
    Eigen::VectorXd d1_, d2_, p1_, p2_, pd_;
};

}  // namespace gaussint
