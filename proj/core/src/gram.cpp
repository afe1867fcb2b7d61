#include "gaussint/gram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gaussint {

PivotedCholesky pivoted_cholesky(const Eigen::MatrixXd& gram) {
    const Eigen::Index k = gram.rows();
    PivotedCholesky out;
    out.order.resize(static_cast<std::size_t>(k));
    std::iota(out.order.begin(), out.order.end(), 0);
    if (k == 0) {
        out.det = 1.0;
        out.full_rank = true;
        return out;
    }
    Eigen::MatrixXd a = gram;
    const double scale = a.diagonal().maxCoeff();
    if (!(scale > 0.0)) return out;
    double det = 1.0;
    int rank = 0;
    for (Eigen::Index j = 0; j < k; ++j) {
        Eigen::Index p = j;
        for (Eigen::Index i = j + 1; i < k; ++i) {
            if (a(i, i) > a(p, p)) p = i;
        }
        if (!(a(p, p) > kDependenceTolerance * scale)) break;
        if (p != j) {
            a.row(j).swap(a.row(p));
            a.col(j).swap(a.col(p));
            std::swap(out.order[static_cast<std::size_t>(j)], out.order[static_cast<std::size_t>(p)]);
        }
        const double pivot = a(j, j);
        det *= pivot;
        ++rank;
        const double l = std::sqrt(pivot);
        a.col(j).tail(k - j - 1) /= l;
        for (Eigen::Index c = j + 1; c < k; ++c) {
            a.col(c).tail(k - c) -= a(c, j) * a.col(j).tail(k - c);
        }
        // Keep the trailing block symmetric so diagonal pivots stay meaningful.
        for (Eigen::Index c = j + 1; c < k; ++c) {
            for (Eigen::Index r = c + 1; r < k; ++r) a(c, r) = a(r, c);
        }
    }
    out.rank = rank;
    out.full_rank = rank == k;
    out.det = (out.full_rank && det >= kDeterminantFloor) ? det : 0.0;
    return out;
}

Eigen::MatrixXd gram_matrix(std::span<const L2Vec> vs) {
    const auto k = static_cast<Eigen::Index>(vs.size());
    Eigen::MatrixXd g(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            g(i, j) = g(j, i) = inner(vs[static_cast<std::size_t>(i)], vs[static_cast<std::size_t>(j)]);
        }
    }
    return g;
}

GramSystem make_gram_system(std::span<const L2Vec> vs) {
    GramSystem sys;
    sys.vectors.assign(vs.begin(), vs.end());
    sys.gram = gram_matrix(vs);
    const PivotedCholesky chol = pivoted_cholesky(sys.gram);
    sys.det = chol.det;
    sys.chol_ok = chol.full_rank;
    sys.rank = chol.rank;
    sys.independent.assign(chol.order.begin(), chol.order.begin() + chol.rank);
    std::sort(sys.independent.begin(), sys.independent.end());
    return sys;
}

double gram_det(const Eigen::MatrixXd& gram) { return pivoted_cholesky(gram).det; }

double gram_det(std::span<const L2Vec> vs) { return gram_det(gram_matrix(vs)); }

std::vector<L2Vec> orthonormal_basis(std::span<const L2Vec> vs) {
    std::vector<L2Vec> basis;
    if (vs.empty()) return basis;
    const GramSystem sys = make_gram_system(vs);
    for (int idx : sys.independent) {
        L2Vec q = vs[static_cast<std::size_t>(idx)];
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : basis) q -= inner(q, b) * b;
        }
        const double nq = norm(q);
        if (nq > 0.0) basis.push_back((1.0 / nq) * q);
    }
    return basis;
}

L2Vec project(std::span<const L2Vec> vs, const L2Vec& h) {
    L2Vec result = L2Vec::zero(h.grid());
    for (const auto& q : orthonormal_basis(vs)) result += inner(h, q) * q;
    return result;
}

double ln_ratio(const std::function<L2Vec(double)>& path, std::span<const double> times) {
    if (times.empty()) throw std::invalid_argument("ln_ratio: no times");
    std::vector<L2Vec> family;
    family.reserve(times.size());
    L2Vec prev = path(times[0]);
    double denom = norm_squared(prev);
    if (!(denom > 0.0)) throw std::invalid_argument("ln_ratio: g(t_1) is zero");
    family.push_back(prev);
    for (std::size_t i = 1; i < times.size(); ++i) {
        L2Vec cur = path(times[i]);
        L2Vec inc = cur - prev;
        const double ni = norm_squared(inc);
        if (!(ni > 0.0)) {
            throw std::invalid_argument("ln_ratio: zero increment between t=" + std::to_string(times[i - 1]) +
                                        " and t=" + std::to_string(times[i]));
        }
        denom *= ni;
        family.push_back(std::move(inc));
        prev = std::move(cur);
    }
    const double ratio = gram_det(family) / denom;
    return std::clamp(ratio, 0.0, 1.0);
}

double ln_ratio_conditional(const std::function<L2Vec(double)>& path, std::span<const double> times) {
    std::vector<L2Vec> g;
    for (double t : times) g.push_back(path(t));
    const Eigen::MatrixXd cov = gram_matrix(g);
    double product = 1.0;
    for (std::size_t m = 1; m < g.size(); ++m) {
        const auto mm = static_cast<Eigen::Index>(m);
        // Var(x_m | x_0..x_{m-1}) by Schur complement.
        const Eigen::MatrixXd c11 = cov.topLeftCorner(mm, mm);
        const Eigen::VectorXd c12 = cov.col(mm).head(mm);
        const double cond = cov(mm, mm) - c12.dot(c11.ldlt().solve(c12));
        const double inc = norm_squared(g[m] - g[m - 1]);
        product *= std::max(cond, 0.0) / inc;
    }
    return product;
}

Eigen::VectorXd solve_gram(std::span<const L2Vec> es, const Eigen::VectorXd& targets) {
    const Eigen::MatrixXd g = gram_matrix(es);
    if (!pivoted_cholesky(g).full_rank) throw std::invalid_argument("solve_gram: vectors are linearly dependent");
    return g.ldlt().solve(targets);
}

L2Vec dual_vector(std::span<const L2Vec> fs) {
    if (fs.empty()) throw std::invalid_argument("dual_vector: empty family");
    const Eigen::VectorXd lambda =
        solve_gram(fs, Eigen::VectorXd::Ones(static_cast<Eigen::Index>(fs.size())));
    L2Vec f = L2Vec::zero(fs.front().grid());
    for (std::size_t i = 0; i < fs.size(); ++i) f += lambda[static_cast<Eigen::Index>(i)] * fs[i];
    return f;
}

}  // namespace gaussint
