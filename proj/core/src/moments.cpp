#include "gaussint/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "gaussint/indicator_geometry.hpp"
#include "gaussint/parallel.hpp"
#include "gaussint/quadrature.hpp"

namespace gaussint {
namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;  // 1 / sqrt(2 pi)
constexpr int kMaxInnerPieces = 512;

struct Level {
    int gl_order;
    double tol;
};

Level level(int refinement) {
    static constexpr int orders[] = {7, 10, 15, 20, 25, 30};
    const int r = std::clamp(refinement, 0, 5);
    return {orders[r], std::max(1e-6 * std::pow(10.0, -r), 1e-13)};
}

void require_invertible(const L2Operator& a, const char* what) {
    const Eigen::VectorXd& alpha = a.complement_scale();
    const double amin = alpha.cwiseAbs().minCoeff();
    const double amax = alpha.cwiseAbs().maxCoeff();
    if (a.is_singular() || !(amin > kInvertibilityThreshold * amax)) {
        std::ostringstream msg;
        msg << what << ": operator '" << a.label() << "' is not invertible on L2 (sigma_min=" << a.sigma_min()
            << ", complement scale min=" << amin << ")";
        throw SingularOperatorError(msg.str(), std::min(a.sigma_min(), amin), a.extended_sigma_max());
    }
}

/// int_0^1 dv int_0^{1-v^2} ds 2v / sqrt(N^2 + eps), with t = s + v^2 and
/// N^2 = ||A1 1_[0,t] - A2 1_[0,s]||^2 (late = true) or ||A1 1_[0,s] - A2 1_[0,t]||^2.
/// The substitution t - s = v^2 turns the 1/sqrt(t - s) singularity into a bounded integrand.
/// `floor` > 0 enables the lower-bound safeguard N >= floor * v.
double triangle(const IndicatorImageNorm& norm2, bool late, double eps, const Level& lv, double floor) {
    const int n = norm2.n_cells();
    const double h = 1.0 / n;
    const GaussRule& rule = gauss_legendre(lv.gl_order);

    auto inner = [&](double v) -> double {
        const double v2 = v * v;
        const double len = 1.0 - v2;
        if (!(len > 0.0) || v <= 0.0) return 0.0;
        std::vector<double> breaks;
        if (n <= kMaxInnerPieces) {
            breaks.reserve(static_cast<std::size_t>(2 * n + 2));
            breaks.push_back(0.0);
            breaks.push_back(len);
            // Kinks where s or t = s + v^2 crosses a grid node.
            for (int k = 1; k < n; ++k) {
                const double node = k * h;
                if (node < len) breaks.push_back(node);
                const double shifted = node - v2;
                if (shifted > 0.0 && shifted < len) breaks.push_back(shifted);
            }
            std::sort(breaks.begin(), breaks.end());
            breaks.erase(std::unique(breaks.begin(), breaks.end(),
                                     [](double x, double y) { return y - x < 1e-14; }),
                         breaks.end());
            if (breaks.back() != len) breaks.back() = len;
        } else {
            breaks.resize(kMaxInnerPieces + 1);
            for (int i = 0; i <= kMaxInnerPieces; ++i) breaks[static_cast<std::size_t>(i)] = len * i / kMaxInnerPieces;
        }
        double total = 0.0;
        for (std::size_t p = 1; p < breaks.size(); ++p) {
            const double a = breaks[p - 1];
            const double b = breaks[p];
            const double mid = 0.5 * (a + b);
            const double half = 0.5 * (b - a);
            double piece = 0.0;
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const double s = mid + half * rule.nodes[q];
                const double t = s + v2;
                const double n2 = late ? norm2(t, s) : norm2(s, t);
                if (floor > 0.0 && std::sqrt(n2) < floor * v * (1.0 - 1e-9)) {
                    std::ostringstream msg;
                    msg << "lower-bound safeguard violated at s=" << s << ", t=" << t << ": ||A 1_[s,t]||="
                        << std::sqrt(n2) << " < sigma_min * sqrt(t - s)=" << floor * v;
                    throw std::logic_error(msg.str());
                }
                const double denom = std::sqrt(n2 + eps);
                if (denom > 0.0) piece += rule.weights[q] * (2.0 * v / denom);
            }
            total += half * piece;
        }
        return total;
    };

    std::vector<double> vbreaks{0.0};
    for (int k = 1; k < n; k *= 2) vbreaks.push_back(std::sqrt(k * h));
    vbreaks.push_back(1.0);
    return integrate_pieces(inner, vbreaks, lv.tol, 12).value;
}

double check_finite(double value, double error, const char* what) {
    if (!std::isfinite(value) || !std::isfinite(error) || error > 0.1 * std::abs(value)) {
        std::ostringstream msg;
        msg << what << ": quadrature does not settle under refinement (value " << value << ", change " << error
            << "); the integrand is not integrable";
        throw std::runtime_error(msg.str());
    }
    return value;
}

template <class F>
MomentQuadrature with_error(std::string id, int refinement, F&& at_level) {
    MomentQuadrature out;
    out.integrand_id = std::move(id);
    out.refinement = refinement;
    out.value = at_level(level(refinement));
    const double other = at_level(level(refinement > 0 ? refinement - 1 : refinement + 1));
    out.error_estimate = std::abs(out.value - other);
    return out;
}

}  // namespace

MomentQuadrature second_moment_exact(const L2Operator& a, int refinement) {
    require_invertible(a, "second_moment_exact");
    const IndicatorImageNorm norm2(a, a);
    const double floor = a.extended_sigma_min();
    auto out = with_error("second_moment", refinement, [&](const Level& lv) {
        return 2.0 * kInvSqrt2Pi * triangle(norm2, true, 0.0, lv, floor);
    });
    check_finite(out.value, out.error_estimate, "second_moment_exact");
    return out;
}

MomentQuadrature cross_moment_exact(const L2Operator& a1, const L2Operator& a2, int refinement) {
    require_invertible(a1, "cross_moment_exact");
    require_invertible(a2, "cross_moment_exact");
    const IndicatorImageNorm norm2(a1, a2);
    auto out = with_error("cross_moment", refinement, [&](const Level& lv) {
        return kInvSqrt2Pi * (triangle(norm2, true, 0.0, lv, 0.0) + triangle(norm2, false, 0.0, lv, 0.0));
    });
    check_finite(out.value, out.error_estimate, "cross_moment_exact");
    return out;
}

MomentQuadrature second_moment_regularized(const L2Operator& a, double eps, int refinement) {
    if (!(eps > 0.0)) throw std::invalid_argument("second_moment_regularized: eps must be positive");
    const IndicatorImageNorm norm2(a, a);
    return with_error("second_moment_regularized", refinement, [&](const Level& lv) {
        return 2.0 * kInvSqrt2Pi * triangle(norm2, true, eps, lv, 0.0);
    });
}

std::vector<ConvergencePoint> lt_convergence_experiment(const std::function<L2Operator(int)>& sequence,
                                                        const L2Operator& limit, std::span<const int> ns,
                                                        int refinement) {
    const MomentQuadrature m_limit = second_moment_exact(limit, refinement);
    std::vector<ConvergencePoint> out(ns.size());
    parallel_for(ns.size(), [&](std::size_t i) {
        const L2Operator an = sequence(ns[i]);
        require_same_grid(an.grid(), limit.grid(), "lt_convergence_experiment");
        const MomentQuadrature m = second_moment_exact(an, refinement);
        const MomentQuadrature c = cross_moment_exact(an, limit, refinement);
        ConvergencePoint& p = out[i];
        p.n = ns[i];
        p.value = m.value - 2.0 * c.value + m_limit.value;
        p.error_estimate = m.error_estimate + 2.0 * c.error_estimate + m_limit.error_estimate;
        p.inverse_norm = 1.0 / an.extended_sigma_min();
    });
    return out;
}

}  // namespace gaussint
