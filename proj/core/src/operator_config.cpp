#include "gaussint/operator_config.hpp"

#include <cmath>

namespace gaussint {
namespace {

L2Operator volterra_from(const ParamTable& table, const GridSpec& grid) {
    const std::string kernel = table.require("kernel");
    if (kernel == "constant") {
        const double k0 = table.require_double("kernel_value");
        return builtin::volterra(grid, [k0](double, double) { return k0; });
    }
    if (kernel == "exp") {
        const double k0 = table.require_double("kernel_value");
        const double rate = table.require_double("kernel_rate");
        return builtin::volterra(grid, [k0, rate](double x, double y) { return k0 * std::exp(-rate * (x - y)); });
    }
    if (kernel == "table") {
        try {
            return builtin::volterra(grid, read_kernel_csv(table.require("kernel_table")));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        } catch (const std::runtime_error& e) {
            throw ConfigError(e.what());
        }
    }
    throw ConfigError("unknown kernel '" + kernel + "' (expected constant, exp or table)");
}

}  // namespace

L2Operator make_operator(const ParamTable& table, const GridSpec& grid) {
    const std::string kind = table.require("kind");
    L2Operator op = [&]() -> L2Operator {
        if (kind == "identity") return builtin::identity(grid);
        if (kind == "volterra") return volterra_from(table, grid);
        if (kind == "perturbation") {
            return builtin::perturbation(table.require_double("epsilon"), volterra_from(table, grid));
        }
        if (kind == "multiplication") {
            const auto values = table.require_double_list("values");
            const int n = grid.n_cells();
            const int blocks = static_cast<int>(values.size());
            if (n % blocks != 0) {
                throw ConfigError("multiplication: " + std::to_string(blocks) + " values do not divide " +
                                  std::to_string(n) + " cells");
            }
            Eigen::VectorXd m(n);
            for (int i = 0; i < n; ++i) m[i] = values[static_cast<std::size_t>(i / (n / blocks))];
            return builtin::multiplication(L2Vec(grid, std::move(m)));
        }
        if (kind == "complement_projection") {
            const double s = table.get_double("s", 0.0);
            const double t = table.get_double("t", 1.0);
            if (!(0.0 <= s && s < t && t <= 1.0)) throw ConfigError("complement_projection: need 0 <= s < t <= 1");
            return builtin::complement_projection(indicator(grid, s, t));
        }
        throw ConfigError("unknown operator kind '" + kind + "'");
    }();
    const double scale = table.get_double("scale", 1.0);
    return scale == 1.0 ? op : scaled(scale, op);
}

L2Operator reference_volterra(const GridSpec& grid) {
    return builtin::volterra(grid, [](double x, double y) { return 0.5 * std::exp(-(x - y)); });
}

}  // namespace gaussint
