#include "choqmax/content.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace choqmax {

ContentParams::ContentParams(double d_, GridFunction weight_)
    : d(d_), weight(std::move(weight_)) {
    const int n = weight.spec().n;
    if (!std::isfinite(d) || !(d > 0.0) || !(d <= static_cast<double>(n)))
        throw ParamError("content dimension requires 0 < d <= n, got d=" + std::to_string(d) +
                         " with n=" + std::to_string(n));
}

LorentzParams::LorentzParams(double p_, double q_) : p(p_), q(q_) {
    if (!std::isfinite(p) || !(p > 0.0))
        throw ParamError("Lorentz first exponent requires 0 < p < inf");
    if (!(q > 0.0) || std::isnan(q))
        throw ParamError("Lorentz second exponent requires q > 0 (may be inf)");
}

ContentEvaluator::ContentEvaluator(GridFunction weight, double exponent)
    : spec_(weight.spec()), exponent_(exponent), weight_(std::move(weight)) {
    if (!std::isfinite(exponent_) || !(exponent_ > 0.0))
        throw ParamError("content exponent must be positive and finite");
    coef_.resize(spec_.L + 1);
    for (int k = 0; k <= spec_.L; ++k) {
        const double side_pow = std::exp2(-static_cast<double>(k) * exponent_);
        coef_[k].resize(spec_.cube_count(k));
        for (std::uint64_t m = 0; m < coef_[k].size(); ++m)
            coef_[k][m] = weight_.average(k, m) * side_pow;
    }
    cell_to_morton_ = morton_of_cell_table(spec_);
}

void ContentEvaluator::check_spec(const GridSpec& other) const {
    if (!(other == spec_)) throw ParamError("grid spec does not match the content weight");
}

double ContentEvaluator::cube_cost(const DyadicCube& cube) const {
    validate_cube(cube, spec_);
    return coef_[cube.level][cube_morton(cube, spec_.n)];
}

double ContentEvaluator::covering_cost(const CubeFamily& family) const {
    check_spec(family.spec);
    double total = 0.0;
    for (const auto& cube : family.cubes) total += cube_cost(cube);
    return total;
}

std::vector<std::vector<double>> ContentEvaluator::dp_costs(const CellSet& set) const {
    std::vector<std::vector<double>> cost(spec_.L + 1);
    cost[spec_.L].assign(spec_.cell_count(), 0.0);
    for (std::uint64_t cell = 0; cell < spec_.cell_count(); ++cell)
        if (set.contains(cell)) {
            const std::uint32_t m = cell_to_morton_[cell];
            cost[spec_.L][m] = coef_[spec_.L][m];
        }
    const std::uint64_t fan = std::uint64_t{1} << spec_.n;
    for (int k = spec_.L - 1; k >= 0; --k) {
        cost[k].resize(spec_.cube_count(k));
        for (std::uint64_t m = 0; m < cost[k].size(); ++m) {
            double child_sum = 0.0;
            const std::uint64_t base = m << spec_.n;
            for (std::uint64_t g = 0; g < fan; ++g) child_sum += cost[k + 1][base | g];
            cost[k][m] = std::min(coef_[k][m], child_sum);
        }
    }
    return cost;
}

double ContentEvaluator::content(const CellSet& set) const {
    check_spec(set.spec());
    return dp_costs(set)[0][0];
}

CubeFamily ContentEvaluator::optimal_cover(const CellSet& set) const {
    check_spec(set.spec());
    const auto cost = dp_costs(set);

    std::vector<std::vector<std::uint8_t>> hit(spec_.L + 1);
    hit[spec_.L].assign(spec_.cell_count(), 0);
    for (std::uint64_t cell = 0; cell < spec_.cell_count(); ++cell)
        if (set.contains(cell)) hit[spec_.L][cell_to_morton_[cell]] = 1;
    const std::uint64_t fan = std::uint64_t{1} << spec_.n;
    for (int k = spec_.L - 1; k >= 0; --k) {
        hit[k].assign(spec_.cube_count(k), 0);
        for (std::uint64_t m = 0; m < hit[k].size(); ++m) {
            const std::uint64_t base = m << spec_.n;
            for (std::uint64_t g = 0; g < fan; ++g) hit[k][m] |= hit[k + 1][base | g];
        }
    }

    CubeFamily family{spec_, {}, true};
    // Take a cube when its own cost is no worse than its children's total
    // (ties to the larger cube); otherwise descend.
    struct Frame {
        int level;
        std::uint64_t morton;
    };
    std::vector<Frame> stack{{0, 0}};
    while (!stack.empty()) {
        const Frame fr = stack.back();
        stack.pop_back();
        if (!hit[fr.level][fr.morton]) continue;
        bool take = fr.level == spec_.L;
        if (!take) {
            double child_sum = 0.0;
            const std::uint64_t base = fr.morton << spec_.n;
            for (std::uint64_t g = 0; g < fan; ++g) child_sum += cost[fr.level + 1][base | g];
            take = coef_[fr.level][fr.morton] <= child_sum;
        }
        if (take) {
            family.cubes.push_back(cube_from_morton(spec_.n, fr.level, fr.morton));
        } else {
            const std::uint64_t base = fr.morton << spec_.n;
            for (std::uint64_t g = fan; g > 0; --g)
                stack.push_back({fr.level + 1, base | (g - 1)});
        }
    }
    return family;
}

std::vector<DistributionPoint> ContentEvaluator::distribution(const GridFunction& g) const {
    check_spec(g.spec());
    const std::uint64_t count = spec_.cell_count();

    std::vector<std::uint64_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::uint64_t a, std::uint64_t b) {
        if (g.value(a) != g.value(b)) return g.value(a) > g.value(b);
        return a < b;
    });

    // Sweep thresholds downward, adding each value class to the member set and
    // repairing the DP along the touched root paths. Fresh child-sum
    // recomputation keeps every node equal to the from-scratch DP bit for bit,
    // so each recorded root cost is exactly content({g >= t}).
    std::vector<std::vector<double>> cost(spec_.L + 1);
    for (int k = 0; k <= spec_.L; ++k) cost[k].assign(spec_.cube_count(k), 0.0);
    const std::uint64_t fan = std::uint64_t{1} << spec_.n;

    std::vector<DistributionPoint> points;
    std::vector<std::uint64_t> touched, next_touched;
    std::size_t pos = 0;
    while (pos < count) {
        const double t = g.value(order[pos]);
        if (t == 0.0) break;
        touched.clear();
        while (pos < count && g.value(order[pos]) == t) {
            const std::uint32_t m = cell_to_morton_[order[pos]];
            cost[spec_.L][m] = coef_[spec_.L][m];
            touched.push_back(m);
            ++pos;
        }
        for (int k = spec_.L - 1; k >= 0 && !touched.empty(); --k) {
            for (auto& m : touched) m >>= spec_.n;
            std::sort(touched.begin(), touched.end());
            touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
            next_touched.clear();
            for (std::uint64_t m : touched) {
                double child_sum = 0.0;
                const std::uint64_t base = m << spec_.n;
                for (std::uint64_t gi = 0; gi < fan; ++gi) child_sum += cost[k + 1][base | gi];
                const double v = std::min(coef_[k][m], child_sum);
                if (v != cost[k][m]) {
                    cost[k][m] = v;
                    next_touched.push_back(m);
                }
            }
            touched.swap(next_touched);
        }
        points.push_back({t, cost[0][0]});
    }
    std::reverse(points.begin(), points.end());
    return points;
}

double ContentEvaluator::choquet(const std::vector<DistributionPoint>& dist) const {
    double total = 0.0;
    double prev = 0.0;
    for (const auto& pt : dist) {
        total += (pt.t - prev) * pt.content;
        prev = pt.t;
    }
    return total;
}

double ContentEvaluator::choquet(const GridFunction& g) const { return choquet(distribution(g)); }

double ContentEvaluator::lorentz(const std::vector<DistributionPoint>& dist,
                                 const LorentzParams& lp) const {
    if (lp.weak()) {
        double best = 0.0;
        for (const auto& pt : dist) best = std::max(best, pt.t * safe_pow(pt.content, 1.0 / lp.p));
        return best;
    }
    double total = 0.0;
    double prev_pow = 0.0;
    for (const auto& pt : dist) {
        const double t_pow = safe_pow(pt.t, lp.q);
        total += safe_pow(pt.content, lp.q / lp.p) * (t_pow - prev_pow) / lp.q;
        prev_pow = t_pow;
    }
    return safe_pow(total, 1.0 / lp.q);
}

double ContentEvaluator::lorentz(const GridFunction& g, const LorentzParams& lp) const {
    return lorentz(distribution(g), lp);
}

double content(const CellSet& set, const ContentParams& params) {
    return ContentEvaluator(params.weight, params.d).content(set);
}

CubeFamily optimal_cover(const CellSet& set, const ContentParams& params) {
    return ContentEvaluator(params.weight, params.d).optimal_cover(set);
}

double choquet_integral(const GridFunction& f, const ContentParams& params) {
    return ContentEvaluator(params.weight, params.d).choquet(f);
}

double lorentz_quasinorm(const GridFunction& f, const LorentzParams& lp,
                         const ContentParams& cp) {
    return ContentEvaluator(cp.weight, cp.d).lorentz(f, lp);
}

}  // namespace choqmax
