#pragma once

#include <string>

#include "gaussint/grid.hpp"
#include "gaussint/l2operator.hpp"
#include "gaussint/param_table.hpp"

namespace gaussint {

/// Builds an operator from a parameter table.
///
///   kind = identity | volterra | multiplication | perturbation | complement_projection
///   scale = c                          (optional, multiplies the result; default 1)
///
///   volterra / perturbation kernel:
///     kernel = constant | exp | table
///     kernel_value = k0                (constant: k = k0; exp: k = k0 * exp(-rate (x - y)))
///     kernel_rate = rate               (exp only)
///     kernel_table = path.csv          (table only; rows "i,j,value")
///   perturbation:
///     epsilon = eps                    (I + eps K)
///   multiplication:
///     values = m_0, ..., m_{L-1}       (L must divide n_cells; value j fills block j)
///   complement_projection:
///     s = 0, t = 1                     (projects away indicator(s, t))
///
/// Keys not listed for the chosen kind are left unconsumed, so a strict caller
/// rejects them.
L2Operator make_operator(const ParamTable& table, const GridSpec& grid);

/// Fixed Volterra kernel k(x, y) = 0.5 exp(-(x - y)); its operator norm is below 0.5.
L2Operator reference_volterra(const GridSpec& grid);

}  // namespace gaussint
