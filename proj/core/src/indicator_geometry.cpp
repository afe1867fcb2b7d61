#include "gaussint/indicator_geometry.hpp"

#include <algorithm>
#include <cmath>

namespace gaussint {
namespace {

struct Located {
    int k;
    double theta;  // fraction of cell k covered by [0, t]
};

Located locate(double t, int n) {
    const double x = t * n;
    int k = static_cast<int>(std::floor(x));
    k = std::clamp(k, 0, n - 1);
    return {k, std::clamp(x - k, 0.0, 1.0)};
}

Eigen::VectorXd prefix_squares(const Eigen::VectorXd& d) {
    Eigen::VectorXd p(d.size() + 1);
    p[0] = 0.0;
    for (Eigen::Index i = 0; i < d.size(); ++i) p[i + 1] = p[i] + d[i] * d[i];
    return p;
}

Eigen::MatrixXd column_prefix(const Eigen::MatrixXd& m) {
    Eigen::MatrixXd c(m.rows(), m.cols());
    c.col(0).setZero();
    for (Eigen::Index j = 1; j < m.cols(); ++j) c.col(j) = c.col(j - 1) + m.col(j - 1);
    return c;
}

}  // namespace

IndicatorImageNorm::IndicatorImageNorm(const L2Operator& a1, const L2Operator& a2)
    : n_(a1.grid().n_cells()),
      h_(a1.grid().h()),
      diagonal_(a1.is_diagonal() && a2.is_diagonal()),
      same_(&a1.matrix() == &a2.matrix() || a1.matrix() == a2.matrix()),
      alpha1_(a1.complement_scale()),
      alpha2_(a2.complement_scale()) {
    require_same_grid(a1.grid(), a2.grid(), "IndicatorImageNorm");
    if (diagonal_) {
        d1_ = a1.matrix().diagonal();
        d2_ = a2.matrix().diagonal();
        p1_ = prefix_squares(d1_);
        p2_ = prefix_squares(d2_);
        pd_ = prefix_squares(d1_ - d2_);
        return;
    }
    m1_ = a1.matrix();
    c1_ = column_prefix(m1_);
    if (!same_) {
        d_ = a1.matrix() - a2.matrix();
        cd_ = column_prefix(d_);
    }
}

double IndicatorImageNorm::dense(int kt, double th_t, int ks, double th_s) const {
    Eigen::VectorXd w = c1_.col(kt) - c1_.col(ks) + th_t * m1_.col(kt) - th_s * m1_.col(ks);
    if (!same_) w += cd_.col(ks) + th_s * d_.col(ks);
    return h_ * w.squaredNorm();
}

double IndicatorImageNorm::diagonal(int kt, double th_t, int ks, double th_s) const {
    const int lo = std::min(kt, ks);
    double s = pd_[lo];
    if (kt == ks) {
        const double w = d1_[kt] * th_t - d2_[ks] * th_s;
        s += w * w;
    } else if (kt > ks) {
        const double w = d1_[ks] - d2_[ks] * th_s;
        const double e = d1_[kt] * th_t;
        s += w * w + (p1_[kt] - p1_[ks + 1]) + e * e;
    } else {
        const double w = d1_[kt] * th_t - d2_[kt];
        const double e = d2_[ks] * th_s;
        s += w * w + (p2_[ks] - p2_[kt + 1]) + e * e;
    }
    return h_ * s;
}

double IndicatorImageNorm::operator()(double t, double s) const {
    const Located lt = locate(t, n_);
    const Located ls = locate(s, n_);
    const double grid_part = diagonal_ ? diagonal(lt.k, lt.theta, ls.k, ls.theta)
                                       : dense(lt.k, lt.theta, ls.k, ls.theta);
    // Part of 1_[0,t] orthogonal to the step functions: 1_[t_k, t] - theta 1_cell,
    // with squared norm l (1 - theta), l = theta h.
    const double lt_len = lt.theta * h_;
    const double ls_len = ls.theta * h_;
    double comp;
    if (lt.k != ls.k) {
        const double a = alpha1_[lt.k];
        const double b = alpha2_[ls.k];
        comp = a * a * lt_len * (1.0 - lt.theta) + b * b * ls_len * (1.0 - ls.theta);
    } else {
        const double a = alpha1_[lt.k];
        const double b = alpha2_[ls.k];
        const double dl = lt_len - ls_len;
        const double diff_sq = std::abs(dl) - dl * dl / h_;                        // ||x_t - x_s||^2
        const double xs_sq = ls_len * (1.0 - ls.theta);                            // ||x_s||^2
        const double cross = std::min(lt_len, ls_len) - lt_len * ls_len / h_ - xs_sq;  // (x_t - x_s, x_s)
        comp = a * a * diff_sq + 2.0 * a * (a - b) * cross + (a - b) * (a - b) * xs_sq;
    }
    return std::max(grid_part + comp, 0.0);
}

}  // namespace gaussint
