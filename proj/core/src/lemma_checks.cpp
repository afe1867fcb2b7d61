#include "gaussint/lemma_checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "gaussint/gauss_sim.hpp"
#include "gaussint/gram.hpp"
#include "gaussint/random.hpp"
#include "gaussint/stats.hpp"

namespace gaussint {
namespace {

constexpr double kTiny = 1e-300;

std::vector<L2Vec> images(const L2Operator& a, std::span<const L2Vec> es) {
    std::vector<L2Vec> out;
    out.reserve(es.size());
    for (const auto& e : es) out.push_back(apply(a, e));
    return out;
}

void require_invertible(const L2Operator& a, const char* what) {
    if (a.is_singular()) {
        throw SingularOperatorError(std::string(what) + ": operator '" + a.label() + "' is singular", a.sigma_min(),
                                    a.sigma_max());
    }
}

std::string describe_values(std::span<const double> xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + format_double(xs[i]);
    return s + "]";
}

double relative_gap(double lhs, double rhs) { return (lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), kTiny}); }

}  // namespace

std::string describe(std::span<const L2Vec> vs) {
    std::string s;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const auto& c = vs[i].coeffs();
        s += (i ? ";" : "") + std::string("v") + std::to_string(i) + "=" +
             describe_values(std::span<const double>(c.data(), static_cast<std::size_t>(c.size())));
    }
    return s;
}

VerifyReport check_gram_lower_bound(const L2Operator& a, std::span<const L2Vec> es) {
    require_invertible(a, "check_gram_lower_bound");
    VerifyReport report = make_report("gram_lower_bound", 1e-10);
    const double lhs = gram_det(images(a, es));
    const double rhs = std::pow(a.sigma_min(), 2.0 * static_cast<double>(es.size())) * gram_det(es);
    report.observe(relative_gap(lhs, rhs), [&] {
        return "G(Ae)=" + format_double(lhs) + " bound=" + format_double(rhs) + " " + describe(es);
    });
    return report;
}

VerifyReport check_inverse_gram_quadratic(const L2Operator& a, std::span<const L2Vec> es,
                                          std::span<const double> u) {
    if (es.size() != u.size() || es.empty()) throw std::invalid_argument("check_inverse_gram_quadratic: size mismatch");
    std::vector<L2Vec> inc;
    for (std::size_t i = 0; i < es.size(); ++i) inc.push_back(i == 0 ? es[0] : es[i] - es[i - 1]);
    for (std::size_t i = 0; i < inc.size(); ++i) {
        const double ni = norm(inc[i]);
        if (!(ni > 0.0)) throw std::invalid_argument("check_inverse_gram_quadratic: zero increment " + std::to_string(i));
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(inner(inc[i], inc[j])) > 1e-10 * ni * norm(inc[j])) {
                throw std::invalid_argument("check_inverse_gram_quadratic: increments " + std::to_string(j) + " and " +
                                            std::to_string(i) + " are not orthogonal");
            }
        }
    }
    const Eigen::MatrixXd b = gram_matrix(images(a, es));
    if (!pivoted_cholesky(b).full_rank) {
        throw std::runtime_error("check_inverse_gram_quadratic: Gram matrix of Ae is numerically singular");
    }
    const Eigen::Map<const Eigen::VectorXd> uv(u.data(), static_cast<Eigen::Index>(u.size()));
    const double lhs = uv.dot(b.ldlt().solve(uv));
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double du = u[i] - (i ? u[i - 1] : 0.0);
        sum += du * du / norm_squared(inc[i]);
    }
    const double smax = a.sigma_max();
    const double rhs = sum / (smax * smax);
    VerifyReport report = make_report("inverse_gram_quadratic", 1e-8);
    report.observe(relative_gap(lhs, rhs), [&] {
        return "lhs=" + format_double(lhs) + " rhs=" + format_double(rhs) + " u=" + describe_values(u) + " " +
               describe(es);
    });
    return report;
}

double gaussian_log_density(const Eigen::MatrixXd& cov, const Eigen::VectorXd& u) {
    const Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) throw std::runtime_error("gaussian_log_density: covariance is singular");
    const Eigen::VectorXd z = llt.matrixL().solve(u);
    const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    const double n = static_cast<double>(u.size());
    return -0.5 * n * std::log(2.0 * std::numbers::pi) - 0.5 * log_det - 0.5 * z.squaredNorm();
}

VerifyReport check_density_bound(const L2Operator& a, std::span<const double> times, std::span<const double> us) {
    if (times.size() != us.size() || times.empty()) throw std::invalid_argument("check_density_bound: size mismatch");
    require_invertible(a, "check_density_bound");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > (i ? times[i - 1] : 0.0))) {
            throw std::invalid_argument("check_density_bound: times must be positive and increasing");
        }
    }
    const Eigen::MatrixXd cov = covariance_matrix(a, times);
    const Eigen::Map<const Eigen::VectorXd> uv(us.data(), static_cast<Eigen::Index>(us.size()));
    const double log_p = gaussian_log_density(cov, uv);
    const double n = static_cast<double>(times.size());
    const double smin = a.sigma_min();
    const double smax = a.sigma_max();
    double log_bound = -0.5 * n * std::log(2.0 * std::numbers::pi) - n * std::log(smin);
    double quad = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double ds = times[i] - (i ? times[i - 1] : 0.0);
        const double du = us[i] - (i ? us[i - 1] : 0.0);
        log_bound -= 0.5 * std::log(ds);
        quad += du * du / ds;
    }
    log_bound -= 0.5 * quad / (smax * smax);
    VerifyReport report = make_report("density_bound", 1e-9);
    report.observe(log_bound - log_p, [&] {
        return "ln p=" + format_double(log_p) + " ln bound=" + format_double(log_bound) + " s=" +
               describe_values(times) + " u=" + describe_values(us);
    });
    return report;
}

L2Vec synthesize_transfer_pair(const L2Operator& q, std::span<const L2Vec> es, const L2Vec& g) {
    const std::vector<L2Vec> qe = images(q, es);
    Eigen::VectorXd targets(static_cast<Eigen::Index>(es.size()));
    for (std::size_t i = 0; i < es.size(); ++i) targets[static_cast<Eigen::Index>(i)] = inner(g, qe[i]);
    const Eigen::VectorXd lambda = solve_gram(es, targets);
    L2Vec f = L2Vec::zero(g.grid());
    for (std::size_t i = 0; i < es.size(); ++i) f += lambda[static_cast<Eigen::Index>(i)] * es[i];
    return f;
}

VerifyReport check_projection_transfer(const L2Operator& q, std::span<const L2Vec> es, const L2Vec& f,
                                       const L2Vec& g) {
    const std::vector<L2Vec> qe = images(q, es);
    if (!make_gram_system(qe).chol_ok) {
        throw std::invalid_argument("check_projection_transfer: Q e_i are linearly dependent");
    }
    const double nf = norm(f);
    const double ng = norm(g);
    for (std::size_t i = 0; i < es.size(); ++i) {
        const double lhs = inner(f, es[i]);
        const double rhs = inner(g, qe[i]);
        if (std::abs(lhs - rhs) > 1e-8 * (nf * norm(es[i]) + ng * norm(qe[i])) + kTiny) {
            throw std::invalid_argument("check_projection_transfer: (f, e_" + std::to_string(i) + ") != (g, Q e_" +
                                        std::to_string(i) + ")");
        }
    }
    const double p1f = norm(project(es, f));
    const double p2g = norm(project(qe, g));
    const double floor = 1e-12 * (nf + ng);
    const double margin = (p2g * (1.0 + 1e-10) + floor - p1f) / std::max({p1f, p2g, floor, kTiny});
    VerifyReport report = make_report("projection_transfer", 0.0);
    report.observe(margin, [&] {
        return "||P1 f||=" + format_double(p1f) + " ||P2 g||=" + format_double(p2g) + " " + describe(es);
    });
    return report;
}

std::vector<double> residual_measures(std::span<const L2Vec> deltas) {
    std::vector<double> out;
    if (deltas.empty()) return out;
    const GridSpec grid = deltas.front().grid();
    std::vector<bool> covered(static_cast<std::size_t>(grid.n_cells()), false);
    for (const auto& d : deltas) {
        require_same_grid(grid, d.grid(), "residual_measures");
        long long fresh = 0;
        for (int i = 0; i < grid.n_cells(); ++i) {
            const double c = d[i];
            if (c != 0.0 && c != 1.0) throw std::invalid_argument("indicator_gram_bound: sets must be 0/1 step functions");
            if (c == 1.0 && !covered[static_cast<std::size_t>(i)]) {
                covered[static_cast<std::size_t>(i)] = true;
                ++fresh;
            }
        }
        out.push_back(static_cast<double>(fresh) * grid.h());
    }
    return out;
}

VerifyReport indicator_gram_bound(std::span<const L2Vec> deltas) {
    const std::vector<double> residual = residual_measures(deltas);
    double product = 1.0;
    for (double r : residual) product *= r;
    const double gamma = gram_det(deltas);
    VerifyReport report = make_report("indicator_gram_bound", 1e-12);
    report.observe(gamma - product, [&] {
        return "Gamma=" + format_double(gamma) + " product=" + format_double(product) + " " + describe(deltas);
    });
    return report;
}

SingularityIntegral check_singularity_integrability(const L2Vec& y, double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("check_singularity_integrability: need 0 <= alpha < 1");
    const GridSpec& grid = y.grid();
    const int n = grid.n_cells();
    const double h = grid.h();
    const double p = 0.5 * (1.0 + alpha);
    // D(t)^2 = a_j + l (1 - 2 y_j) for t = t_j + l in cell j.
    std::vector<double> suffix(static_cast<std::size_t>(n) + 1, 0.0);
    for (int i = n - 1; i >= 0; --i) suffix[static_cast<std::size_t>(i)] = suffix[static_cast<std::size_t>(i) + 1] + h * y[i] * y[i];
    std::vector<double> cells(static_cast<std::size_t>(n));
    double prefix = 0.0;
    for (int j = 0; j < n; ++j) {
        const double a = std::max(prefix + suffix[static_cast<std::size_t>(j)], 0.0);
        const double b = 1.0 - 2.0 * y[j];
        double value;
        if (a == 0.0) {
            value = b > 0.0 ? std::pow(b * h, 1.0 - p) / (b * (1.0 - p)) : std::numeric_limits<double>::infinity();
        } else if (b == 0.0) {
            value = h * std::pow(a, -p);
        } else {
            value = std::pow(a, 1.0 - p) * std::expm1((1.0 - p) * std::log1p(b * h / a)) / (b * (1.0 - p));
        }
        cells[static_cast<std::size_t>(j)] = value;
        prefix += h * (1.0 - y[j]) * (1.0 - y[j]);
    }
    SingularityIntegral out;
    out.value = pairwise_sum(cells);
    const double q = 1.0 / p;
    const double bstar = std::pow(4.0, p);
    out.majorant = bstar + 4.0 * std::pow(bstar, 1.0 - q) / (q - 1.0);
    out.report = make_report("singularity_integrability", 0.0);
    out.report.observe((out.majorant - out.value) / out.majorant, [&] {
        return "I=" + format_double(out.value) + " majorant=" + format_double(out.majorant) +
               " alpha=" + format_double(alpha) + " " + describe(std::span<const L2Vec>(&y, 1));
    });
    return out;
}

double fourier_wiener_product(std::span<const L2Vec> rs, const L2Vec& h) {
    const double m = static_cast<double>(rs.size());
    const double g = rs.empty() ? 1.0 : gram_det(rs);
    const double ph = rs.empty() ? 0.0 : norm_squared(project(rs, h));
    return std::pow(2.0 * std::numbers::pi, -0.5 * m) / std::sqrt(g) * std::exp(-0.5 * ph);
}

double fourier_wiener_integrated(std::span<const L2Vec> fs, const L2Vec& h) {
    const double n = static_cast<double>(fs.size());
    const L2Vec f = dual_vector(fs);
    const double nf2 = norm_squared(f);
    const L2Vec ph = project(fs, h);
    // P_{f-perp} h = P h - ((P h, f) / ||f||^2) f
    const L2Vec perp = ph - (inner(ph, f) / nf2) * f;
    return std::pow(2.0 * std::numbers::pi, -0.5 * (n - 1.0)) / (std::sqrt(gram_det(fs)) * std::sqrt(nf2)) *
           std::exp(-0.5 * norm_squared(perp));
}

double fourier_wiener_integrated_gram(std::span<const L2Vec> fs, const L2Vec& h) {
    const auto n = static_cast<Eigen::Index>(fs.size());
    const Eigen::MatrixXd b = gram_matrix(fs);
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(b);
    Eigen::VectorXd av(n);
    for (Eigen::Index i = 0; i < n; ++i) av[i] = inner(fs[static_cast<std::size_t>(i)], h);
    const Eigen::VectorXd e = Eigen::VectorXd::Ones(n);
    const Eigen::VectorXd binv_a = ldlt.solve(av);
    const Eigen::VectorXd binv_e = ldlt.solve(e);
    const double ee = binv_e.dot(e);
    const double expo = binv_a.dot(av) - binv_a.dot(e) * binv_a.dot(e) / ee;
    return std::pow(2.0 * std::numbers::pi, -0.5 * (static_cast<double>(n) - 1.0)) /
           (std::sqrt(gram_det(b)) * std::sqrt(ee)) * std::exp(-0.5 * expo);
}

VerifyReport check_delta_product_identity(std::span<const L2Vec> fs, std::uint64_t seed, int n_transforms) {
    if (fs.empty() || !make_gram_system(fs).chol_ok) {
        throw std::invalid_argument("check_delta_product_identity: f_1..f_n must be linearly independent");
    }
    const GridSpec grid = fs.front().grid();
    std::vector<L2Vec> rs;
    for (std::size_t j = 1; j < fs.size(); ++j) rs.push_back(fs[j] - fs[j - 1]);
    const L2Vec f = dual_vector(fs);
    const double nf2 = norm_squared(f);

    VerifyReport gram_part = make_report("delta_product_gram", 1e-8, seed);
    const double lhs = rs.empty() ? 1.0 : gram_det(rs);
    const double rhs = nf2 * gram_det(fs);
    gram_part.observe(-std::abs(relative_gap(lhs, rhs)), [&] {
        return "G(r)=" + format_double(lhs) + " |f|^2 G(f)=" + format_double(rhs) + " " + describe(fs);
    });

    // Projectors in an orthonormal basis of span(fs).
    VerifyReport span_part = make_report("delta_product_span", 1e-9, seed);
    const std::vector<L2Vec> basis = orthonormal_basis(fs);
    const auto n = static_cast<Eigen::Index>(basis.size());
    auto coords = [&](const L2Vec& v) {
        Eigen::VectorXd c(n);
        for (Eigen::Index i = 0; i < n; ++i) c[i] = inner(v, basis[static_cast<std::size_t>(i)]);
        return c;
    };
    Eigen::MatrixXd p_r = Eigen::MatrixXd::Zero(n, n);
    if (!rs.empty()) {
        Eigen::MatrixXd r(n, static_cast<Eigen::Index>(rs.size()));
        for (std::size_t j = 0; j < rs.size(); ++j) r.col(static_cast<Eigen::Index>(j)) = coords(rs[j]);
        const Eigen::HouseholderQR<Eigen::MatrixXd> qr(r);
        const Eigen::MatrixXd qm = qr.householderQ() * Eigen::MatrixXd::Identity(n, r.cols());
        p_r = qm * qm.transpose();
    }
    const Eigen::VectorXd phi = coords(f);
    const Eigen::MatrixXd p_perp = Eigen::MatrixXd::Identity(n, n) - phi * phi.transpose() / phi.squaredNorm();
    const double diff = (p_r - p_perp).cwiseAbs().maxCoeff();
    span_part.observe(-diff, [&] { return "projector difference " + format_double(diff) + " " + describe(fs); });

    VerifyReport transform_part = make_report("delta_product_transform", 1e-8, seed);
    Rng rng(seed, 0);
    for (int k = 0; k < n_transforms; ++k) {
        Eigen::VectorXd c(grid.n_cells());
        for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = rng.normal();
        const L2Vec h(grid, c);
        const double b3 = fourier_wiener_product(rs, h);
        const double b6 = fourier_wiener_integrated(fs, h);
        transform_part.observe(-std::abs(relative_gap(b3, b6)), [&] {
            return "B3=" + format_double(b3) + " B6=" + format_double(b6) + " " + describe(fs);
        });
    }

    const VerifyReport parts[] = {gram_part, span_part, transform_part};
    VerifyReport out = merge(parts, "delta_product_identity");
    out.trials = 1;
    out.note = "gram " + format_double(gram_part.worst_margin) + ", span " + format_double(span_part.worst_margin) +
               ", transform " + format_double(transform_part.worst_margin);
    return out;
}

}  // namespace gaussint
