#include "gaussint/l2operator.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>

namespace gaussint {

struct L2Operator::State {
    GridSpec grid;
    Eigen::MatrixXd matrix;
    Eigen::VectorXd complement_scale;
    std::string label;
    bool diagonal = false;

    mutable std::once_flag svd_once;
    mutable double sigma_min = 0.0;
    mutable double sigma_max = 0.0;
    bool singular_values_known = false;

    State(GridSpec g, Eigen::MatrixXd m, Eigen::VectorXd alpha, std::string name)
        : grid(g), matrix(std::move(m)), complement_scale(std::move(alpha)), label(std::move(name)) {
        const Eigen::Index n = grid.n_cells();
        if (matrix.rows() != n || matrix.cols() != n) {
            throw std::invalid_argument("L2Operator: matrix is " + std::to_string(matrix.rows()) + "x" +
                                        std::to_string(matrix.cols()) + " for a " + std::to_string(n) +
                                        "-cell grid");
        }
        if (complement_scale.size() != n) {
            throw std::invalid_argument("L2Operator: complement scale has wrong length");
        }
        diagonal = true;
        for (Eigen::Index j = 0; j < n && diagonal; ++j) {
            for (Eigen::Index i = 0; i < n; ++i) {
                if (i != j && matrix(i, j) != 0.0) {
                    diagonal = false;
                    break;
                }
            }
        }
    }

    void ensure_singular_values() const {
        std::call_once(svd_once, [this] {
            if (singular_values_known) return;
            if (diagonal) {
                const Eigen::VectorXd d = matrix.diagonal().cwiseAbs();
                sigma_min = d.minCoeff();
                sigma_max = d.maxCoeff();
                return;
            }
            Eigen::BDCSVD<Eigen::MatrixXd> svd(matrix);
            const auto& s = svd.singularValues();
            sigma_max = s.maxCoeff();
            sigma_min = s.minCoeff();
        });
    }
};

L2Operator::L2Operator(std::shared_ptr<const State> state) : state_(std::move(state)) {}

L2Operator::L2Operator(GridSpec grid, Eigen::MatrixXd matrix, std::string label)
    : L2Operator(grid, std::move(matrix), Eigen::VectorXd::Ones(grid.n_cells()), std::move(label)) {}

L2Operator::L2Operator(GridSpec grid, Eigen::MatrixXd matrix, Eigen::VectorXd complement_scale,
                       std::string label)
    : state_(std::make_shared<State>(grid, std::move(matrix), std::move(complement_scale),
                                     std::move(label))) {}

L2Operator L2Operator::with_singular_values(double sigma_min, double sigma_max) const {
    auto state = std::make_shared<State>(state_->grid, state_->matrix, state_->complement_scale,
                                         state_->label);
    state->sigma_min = sigma_min;
    state->sigma_max = sigma_max;
    state->singular_values_known = true;
    return L2Operator(std::move(state));
}

const GridSpec& L2Operator::grid() const noexcept { return state_->grid; }
const Eigen::MatrixXd& L2Operator::matrix() const noexcept { return state_->matrix; }
const Eigen::VectorXd& L2Operator::complement_scale() const noexcept { return state_->complement_scale; }
const std::string& L2Operator::label() const noexcept { return state_->label; }
bool L2Operator::is_diagonal() const noexcept { return state_->diagonal; }

double L2Operator::sigma_min() const {
    state_->ensure_singular_values();
    return state_->sigma_min;
}

double L2Operator::sigma_max() const {
    state_->ensure_singular_values();
    return state_->sigma_max;
}

double L2Operator::condition_number() const {
    const double lo = sigma_min();
    return lo > 0.0 ? sigma_max() / lo : std::numeric_limits<double>::infinity();
}

double L2Operator::extended_sigma_min() const {
    return std::min(sigma_min(), state_->complement_scale.cwiseAbs().minCoeff());
}

double L2Operator::extended_sigma_max() const {
    return std::max(sigma_max(), state_->complement_scale.cwiseAbs().maxCoeff());
}

bool L2Operator::is_singular() const { return !(sigma_min() > kInvertibilityThreshold * sigma_max()); }

L2Vec apply(const L2Operator& op, const L2Vec& f) {
    require_same_grid(op.grid(), f.grid(), "apply");
    if (op.is_diagonal()) {
        return L2Vec(f.grid(), op.matrix().diagonal().cwiseProduct(f.coeffs()));
    }
    return L2Vec(f.grid(), op.matrix() * f.coeffs());
}

L2Operator adjoint(const L2Operator& op) {
    L2Operator result(op.grid(), op.matrix().transpose(), op.complement_scale(), "adjoint(" + op.label() + ")");
    return result;
}

L2Operator compose(const L2Operator& first, const L2Operator& second) {
    require_same_grid(first.grid(), second.grid(), "compose");
    return L2Operator(first.grid(), first.matrix() * second.matrix(),
                      first.complement_scale().cwiseProduct(second.complement_scale()),
                      first.label() + "*" + second.label());
}

L2Operator invert(const L2Operator& op) {
    const double lo = op.sigma_min();
    const double hi = op.sigma_max();
    const Eigen::VectorXd& alpha = op.complement_scale();
    const double alpha_lo = alpha.cwiseAbs().minCoeff();
    const double alpha_hi = alpha.cwiseAbs().maxCoeff();
    if (!(lo > kInvertibilityThreshold * hi) || !(alpha_lo > kInvertibilityThreshold * alpha_hi)) {
        std::ostringstream msg;
        msg << "invert: operator '" << op.label() << "' is numerically singular (sigma_min=" << lo
            << ", sigma_max=" << hi << ", complement scale min=" << alpha_lo << ")";
        throw SingularOperatorError(msg.str(), lo, hi);
    }
    Eigen::MatrixXd inverse = op.is_diagonal()
                                  ? Eigen::MatrixXd(op.matrix().diagonal().cwiseInverse().asDiagonal())
                                  : Eigen::MatrixXd(op.matrix().partialPivLu().inverse());
    L2Operator result(op.grid(), std::move(inverse), alpha.cwiseInverse(), "inv(" + op.label() + ")");
    return result.with_singular_values(1.0 / hi, 1.0 / lo);
}

L2Operator scaled(double factor, const L2Operator& op) {
    L2Operator result(op.grid(), factor * op.matrix(), factor * op.complement_scale(),
                      std::to_string(factor) + "*" + op.label());
    if (op.is_diagonal() || op.state_->singular_values_known) {
        return result.with_singular_values(std::abs(factor) * op.sigma_min(), std::abs(factor) * op.sigma_max());
    }
    return result;
}

L2Operator linear_combination(double a, const L2Operator& lhs, double b, const L2Operator& rhs) {
    require_same_grid(lhs.grid(), rhs.grid(), "linear_combination");
    return L2Operator(lhs.grid(), a * lhs.matrix() + b * rhs.matrix(),
                      a * lhs.complement_scale() + b * rhs.complement_scale(),
                      lhs.label() + "+" + std::to_string(b) + "*" + rhs.label());
}

KernelTable read_kernel_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open kernel table '" + path + "'");
    KernelTable table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        KernelTable::Entry e{};
        if (!(fields >> e.row >> e.col >> e.value)) {
            if (line_no == 1) continue;  // header
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected row,col,value");
        }
        table.entries.push_back(e);
    }
    return table;
}

namespace builtin {

L2Operator identity(const GridSpec& grid) {
    const int n = grid.n_cells();
    return L2Operator(grid, Eigen::MatrixXd::Identity(n, n), "identity").with_singular_values(1.0, 1.0);
}

L2Operator volterra(const GridSpec& grid, const KernelFunction& kernel) {
    const int n = grid.n_cells();
    const double h = grid.h();
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        const double y = (j + 0.5) * h;
        k(j, j) = 0.5 * h * kernel(y, y);
        for (int i = j + 1; i < n; ++i) k(i, j) = h * kernel((i + 0.5) * h, y);
    }
    return L2Operator(grid, std::move(k), Eigen::VectorXd::Zero(n), "volterra");
}

L2Operator volterra(const GridSpec& grid, const KernelTable& table) {
    const int n = grid.n_cells();
    const double h = grid.h();
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : table.entries) {
        if (e.row < 0 || e.col < 0 || e.row >= n || e.col >= n) {
            throw std::invalid_argument("kernel table entry (" + std::to_string(e.row) + ", " +
                                        std::to_string(e.col) + ") outside a " + std::to_string(n) +
                                        "-cell grid");
        }
        if (e.col < e.row) {
            k(e.row, e.col) = h * e.value;
        } else if (e.col == e.row) {
            k(e.row, e.col) = 0.5 * h * e.value;
        }
    }
    return L2Operator(grid, std::move(k), Eigen::VectorXd::Zero(n), "volterra(table)");
}

L2Operator multiplication(const L2Vec& m) {
    const Eigen::VectorXd abs = m.coeffs().cwiseAbs();
    return L2Operator(m.grid(), Eigen::MatrixXd(m.coeffs().asDiagonal()), m.coeffs(), "multiplication")
        .with_singular_values(abs.minCoeff(), abs.maxCoeff());
}

L2Operator perturbation(double eps, const L2Operator& k) {
    if (eps == 0.0) return identity(k.grid());
    L2Operator sum = linear_combination(1.0, identity(k.grid()), eps, k);
    return L2Operator(sum.grid(), sum.matrix(), sum.complement_scale(),
                      "I+" + std::to_string(eps) + "*" + k.label());
}

L2Operator complement_projection(const L2Vec& v) {
    const L2Vec vs[] = {v};
    return complement_projection(std::span<const L2Vec>(vs));
}

L2Operator complement_projection(std::span<const L2Vec> vs) {
    if (vs.empty()) throw std::invalid_argument("complement_projection: empty span");
    const GridSpec grid = vs.front().grid();
    const int n = grid.n_cells();
    Eigen::MatrixXd basis(n, static_cast<Eigen::Index>(vs.size()));
    for (std::size_t j = 0; j < vs.size(); ++j) {
        require_same_grid(grid, vs[j].grid(), "complement_projection");
        basis.col(static_cast<Eigen::Index>(j)) = vs[j].coeffs();
    }
    // The weighted inner product h*<.,.> gives the same orthogonal projector as the
    // Euclidean one, so a thin QR of the coefficient matrix suffices.
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
    if (qr.rank() < basis.cols()) {
        throw std::invalid_argument("complement_projection: spanning vectors are linearly dependent");
    }
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, basis.cols());
    Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(n, n) - q * q.transpose();
    if (vs.size() == 1) {
        // Rank-one case in closed form keeps Q v = 0 free of QR round-off.
        const Eigen::VectorXd& c = vs.front().coeffs();
        proj = Eigen::MatrixXd::Identity(n, n) - (c * c.transpose()) / c.squaredNorm();
    }
    return L2Operator(grid, std::move(proj), "complement_projection").with_singular_values(0.0, 1.0);
}

}  // namespace builtin
}  // namespace gaussint
