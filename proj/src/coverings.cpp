#include "choqmax/coverings.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace choqmax {

CubeFamily maximal_cubes(const GridFunction& f, double alpha, double t) {
    const GridSpec& spec = f.spec();
    if (!(t > 0.0) || !std::isfinite(t)) throw ParamError("maximal cube threshold requires t > 0");
    if (!(alpha >= 0.0) || !(alpha < static_cast<double>(spec.n)))
        throw ParamError("maximal cube order requires 0 <= alpha < n");

    // Same candidate expression as the maximal operator, so the emitted union
    // matches its superlevel set bit for bit.
    std::vector<double> scale(spec.L + 1);
    for (int k = 0; k <= spec.L; ++k) scale[k] = std::exp2(-static_cast<double>(k) * alpha);

    CubeFamily family{spec, {}, true};
    struct Frame {
        int level;
        std::uint64_t morton;
    };
    std::vector<Frame> stack{{0, 0}};
    const std::uint64_t fan = std::uint64_t{1} << spec.n;
    while (!stack.empty()) {
        const Frame fr = stack.back();
        stack.pop_back();
        if (f.average(fr.level, fr.morton) * scale[fr.level] > t) {
            family.cubes.push_back(cube_from_morton(spec.n, fr.level, fr.morton));
        } else if (fr.level < spec.L) {
            const std::uint64_t base = fr.morton << spec.n;
            for (std::uint64_t g = fan; g > 0; --g) stack.push_back({fr.level + 1, base | (g - 1)});
        }
    }
    return family;
}

int layer_index(double v) {
    const int e = std::ilogb(v);
    return std::exp2(static_cast<double>(e)) == v ? e - 1 : e;
}

LayerDecomposition layer_decomposition(const GridFunction& f, double p, const ContentParams& cp) {
    if (!(p > 0.0) || !std::isfinite(p))
        throw ParamError("layer decomposition requires 0 < p < inf");
    if (f.max_value() <= 0.0)
        throw ParamError("layer decomposition requires a function that is not identically 0");
    const ContentEvaluator eval(cp.weight, cp.d);

    std::map<int, std::vector<std::uint64_t>> cells_by_layer;
    for (std::uint64_t cell = 0; cell < f.spec().cell_count(); ++cell) {
        const double v = f.value(cell);
        if (v > 0.0) cells_by_layer[layer_index(v)].push_back(cell);
    }

    LayerDecomposition result{p, {}};
    for (const auto& [k, cells] : cells_by_layer) {
        const CellSet layer = CellSet::from_cells(f.spec(), cells);
        result.layers.push_back(
            {k, eval.optimal_cover(layer), std::exp2(p * (k + 1))});
    }
    return result;
}

namespace {

struct CubeKey {
    int level;
    std::uint64_t morton;
};

bool key_contains(const CubeKey& outer, const CubeKey& inner, int n) {
    return inner.level >= outer.level &&
           (inner.morton >> (n * (inner.level - outer.level))) == outer.morton;
}

}  // namespace

PackingResult packing_subfamily(const CubeFamily& family, double d) {
    const GridSpec& spec = family.spec;
    if (!std::isfinite(d) || !(d > 0.0) || !(d <= static_cast<double>(spec.n)))
        throw ParamError("packing requires 0 < d <= n");
    if (!family.is_pairwise_disjoint())
        throw ParamError("packing requires a pairwise disjoint family");

    std::vector<DyadicCube> order = family.cubes;
    std::sort(order.begin(), order.end(), [](const DyadicCube& a, const DyadicCube& b) {
        if (a.level != b.level) return a.level < b.level;
        return a.index < b.index;
    });

    std::vector<std::vector<double>> sums(spec.L + 1);
    for (int k = 0; k <= spec.L; ++k) sums[k].assign(spec.cube_count(k), 0.0);

    std::vector<CubeKey> residuals;
    PackingResult result{{spec, {}, true}, {spec, {}, true}};

    for (const auto& cube : order) {
        const CubeKey key{cube.level, cube_morton(cube, spec.n)};
        bool dead = false;
        for (const auto& r : residuals)
            if (key_contains(r, key, spec.n)) {
                dead = true;
                break;
            }
        if (dead) continue;

        const double own = std::exp2(-d * key.level);
        int violated = -1;
        for (int k = key.level - 1; k >= 0; --k) {
            const std::uint64_t anc = key.morton >> (spec.n * (key.level - k));
            if (sums[k][anc] + own > 2.0 * std::exp2(-d * k)) {
                violated = k;
                break;
            }
        }
        if (violated >= 0) {
            // The deepest over-budget ancestor becomes a residual; by then its
            // selected content already exceeds its own l^d, which is (iii).
            const CubeKey res{violated, key.morton >> (spec.n * (key.level - violated))};
            std::erase_if(residuals,
                          [&](const CubeKey& r) { return key_contains(res, r, spec.n); });
            residuals.push_back(res);
        } else {
            result.selected.cubes.push_back(cube);
            for (int k = 0; k <= key.level; ++k)
                sums[k][key.morton >> (spec.n * (key.level - k))] += own;
        }
    }
    for (const auto& r : residuals)
        result.residual.cubes.push_back(cube_from_morton(spec.n, r.level, r.morton));

    const std::string failure = check_packing(family, result, d);
    if (!failure.empty()) throw std::logic_error("packing postcondition failed: " + failure);
    return result;
}

std::string check_packing(const CubeFamily& family, const PackingResult& result, double d) {
    const GridSpec& spec = family.spec;
    const std::uint64_t fan = std::uint64_t{1} << spec.n;

    std::vector<std::vector<double>> total(spec.L + 1);
    for (int k = 0; k <= spec.L; ++k) total[k].assign(spec.cube_count(k), 0.0);
    for (const auto& cube : result.selected.cubes)
        total[cube.level][cube_morton(cube, spec.n)] += std::exp2(-d * cube.level);
    for (int k = spec.L - 1; k >= 0; --k)
        for (std::uint64_t m = 0; m < total[k].size(); ++m) {
            const std::uint64_t base = m << spec.n;
            for (std::uint64_t g = 0; g < fan; ++g) total[k][m] += total[k + 1][base | g];
        }

    for (int k = 0; k <= spec.L; ++k) {
        const double budget = 2.0 * std::exp2(-d * k);
        for (std::uint64_t m = 0; m < total[k].size(); ++m)
            if (total[k][m] > budget)
                return "(i) packing bound exceeded at level " + std::to_string(k);
    }

    const CellSet covered = set_union(result.selected.union_cells(), result.residual.union_cells());
    if (!is_subset(family.union_cells(), covered)) return "(ii) coverage lost";

    if (!result.residual.is_pairwise_disjoint()) return "residual cubes overlap";
    for (const auto& cube : result.residual.cubes) {
        const double inside = total[cube.level][cube_morton(cube, spec.n)];
        if (!(std::exp2(-d * cube.level) <= inside))
            return "(iii) residual bound failed at level " + std::to_string(cube.level);
    }
    return "";
}

}  // namespace choqmax
