#include "gaussint/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

namespace gaussint {

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                              unsigned max_depth) {
    if (a == b) return {};
    double error = 0.0;
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, max_depth, tol, &error);
    return {value, error};
}

QuadResult integrate_pieces(const std::function<double(double)>& f, std::span<const double> breaks, double tol,
                            unsigned max_depth) {
    QuadResult total;
    for (std::size_t i = 1; i < breaks.size(); ++i) {
        const QuadResult piece = integrate_adaptive(f, breaks[i - 1], breaks[i], tol, max_depth);
        total.value += piece.value;
        total.error += piece.error;
    }
    return total;
}

namespace {

template <unsigned N>
GaussRule build_rule() {
    using rule = boost::math::quadrature::gauss<double, N>;
    const auto& x = rule::abscissa();
    const auto& w = rule::weights();
    GaussRule out;
    // Boost stores the non-negative half; abscissa[0] is 0 for odd N.
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0) {
            out.nodes.push_back(0.0);
            out.weights.push_back(w[i]);
        } else {
            out.nodes.push_back(-x[i]);
            out.weights.push_back(w[i]);
            out.nodes.push_back(x[i]);
            out.weights.push_back(w[i]);
        }
    }
    return out;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
    static const GaussRule r7 = build_rule<7>();
    static const GaussRule r10 = build_rule<10>();
    static const GaussRule r15 = build_rule<15>();
    static const GaussRule r20 = build_rule<20>();
    static const GaussRule r25 = build_rule<25>();
    static const GaussRule r30 = build_rule<30>();
    if (order <= 7) return r7;
    if (order <= 10) return r10;
    if (order <= 15) return r15;
    if (order <= 20) return r20;
    if (order <= 25) return r25;
    return r30;
}

}  // namespace gaussint
