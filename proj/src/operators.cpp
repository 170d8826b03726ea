#include "choqmax/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace choqmax {

void validate_alpha(double alpha, int n) {
    if (!(alpha >= 0.0) || !(alpha < static_cast<double>(n)) || !std::isfinite(alpha))
        throw ParamError("maximal operator order requires 0 <= alpha < n, got alpha=" +
                         std::to_string(alpha) + " with n=" + std::to_string(n));
}

MaximalParams::MaximalParams(double alpha_, const GridSpec& spec) : alpha(alpha_) {
    validate_alpha(alpha, spec.n);
}

GridFunction fractional_maximal(const GridFunction& f, double alpha) {
    const GridSpec& spec = f.spec();
    validate_alpha(alpha, spec.n);

    // Sweep levels root to leaves in Morton order; carry[m] is the best
    // candidate among ancestors of cube m including m itself.
    std::vector<double> carry{f.average(0, 0) * 1.0};
    for (int k = 1; k <= spec.L; ++k) {
        const double scale = std::exp2(-static_cast<double>(k) * alpha);
        std::vector<double> next(spec.cube_count(k));
        for (std::uint64_t m = 0; m < next.size(); ++m)
            next[m] = std::max(carry[m >> spec.n], f.average(k, m) * scale);
        carry = std::move(next);
    }

    const auto table = morton_of_cell_table(spec);
    std::vector<double> out(spec.cell_count());
    for (std::uint64_t cell = 0; cell < out.size(); ++cell) out[cell] = carry[table[cell]];
    return GridFunction(spec, std::move(out));
}

GridFunction maximal_on_indicator_closed_form(const DyadicCube& cube, double alpha,
                                              const GridSpec& spec) {
    validate_cube(cube, spec);
    validate_alpha(alpha, spec.n);

    const int k = cube.level;
    const double side_pow = std::exp2(-static_cast<double>(k) * alpha);
    std::vector<double> out(spec.cell_count(), 0.0);
    // Paint ancestors outermost first; each overwrite leaves a_j exactly on
    // the shell pi^j(Q) \ pi^(j-1)(Q).
    for (int j = k; j >= 0; --j) {
        const double a_j = side_pow * std::exp2((alpha - spec.n) * j);
        const DyadicCube shell_cube = ancestor(cube, j);
        for_each_cell(spec, shell_cube, [&](std::uint64_t cell) { out[cell] = a_j; });
    }
    return GridFunction(spec, std::move(out));
}

}  // namespace choqmax
