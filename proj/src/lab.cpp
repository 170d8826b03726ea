#include "choqmax/lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

#include "choqmax/io.hpp"
#include "choqmax/rng.hpp"

namespace choqmax {

bool exact_product_equals(double x, int n, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return false;
    if (x == 0.0 || y == 0.0) return x * static_cast<double>(n) == y;
    int ex = 0;
    int ey = 0;
    const double fx = std::frexp(x, &ex);
    const double fy = std::frexp(y, &ey);
    const double two53 = 9007199254740992.0;
    __int128 lhs = static_cast<__int128>(static_cast<long long>(fx * two53)) * n;
    __int128 rhs = static_cast<__int128>(static_cast<long long>(fy * two53));
    const int shift = ex - ey;  // compare lhs*2^shift with rhs
    if (shift > 60 || shift < -60) return false;
    if (shift > 0)
        lhs <<= shift;
    else
        rhs <<= -shift;
    return lhs == rhs;
}

namespace {

void check_common_box(const GridSpec& spec, double d, double alpha, double gamma) {
    const double n = spec.n;
    if (!std::isfinite(d) || !(d > 0.0) || !(d <= n))
        throw ParamError("requires 0 < d <= n, got d=" + std::to_string(d));
    if (!std::isfinite(alpha) || !(alpha >= 0.0) || !(alpha < n))
        throw ParamError("requires 0 <= alpha < n, got alpha=" + std::to_string(alpha));
    if (!std::isfinite(gamma) || !(gamma >= 0.0) || !(gamma <= alpha))
        throw ParamError("requires 0 <= gamma <= alpha, got gamma=" + std::to_string(gamma));
}

}  // namespace

TheoremParams TheoremParams::strong_type(const GridSpec& spec, double d, double alpha,
                                         double gamma, double p, double q) {
    check_common_box(spec, d, alpha, gamma);
    const double n = spec.n;
    if (!std::isfinite(p) || !(p > d / n)) throw ParamError("strong type requires d/n < p");
    if (!std::isfinite(q) || !(p <= q)) throw ParamError("strong type requires p <= q < inf");
    if (gamma > 0.0 && !(q < n / gamma)) throw ParamError("strong type requires q < n/gamma");
    if (alpha > 0.0 && !(p < d / alpha)) throw ParamError("strong type requires p < d/alpha");
    TheoremParams tp{spec, Kind::strong, d, alpha, gamma, p, q, 0.0};
    tp.delta = (q / p) * (d - (alpha - gamma) * p);
    if (!(tp.delta > 0.0)) throw ParamError("strong type requires delta > 0");
    return tp;
}

TheoremParams TheoremParams::weak_type(const GridSpec& spec, double d, double alpha, double gamma,
                                       double q) {
    check_common_box(spec, d, alpha, gamma);
    const double n = spec.n;
    const double p = d / n;
    if (!exact_product_equals(p, spec.n, d))
        throw ParamError("weak type requires p = d/n exactly representable; adjust d");
    if (!std::isfinite(q) || !(q >= p)) throw ParamError("weak type requires d/n <= q < inf");
    if (alpha > 0.0 && !(q <= n / alpha)) throw ParamError("weak type requires q <= n/alpha");
    if (!(gamma * q < n))
        throw ParamError("weak type requires gamma*q < n (order of the weight transform)");
    TheoremParams tp{spec, Kind::weak, d, alpha, gamma, p, q, 0.0};
    // With p*n == d exact, q(n-alpha+gamma) and (q/p)(d-(alpha-gamma)p) are
    // the same rational; the first form is evaluated.
    tp.delta = q * (n - alpha + gamma);
    if (!(tp.delta > 0.0)) throw ParamError("weak type requires delta > 0");
    return tp;
}

GridFunction transformed_weight(const GridFunction& w, double gamma, double q, double p) {
    return pow_cellwise(fractional_maximal(w, gamma * q), p / q);
}

namespace {

void check_instance_spec(const GridFunction& g, const TheoremParams& tp) {
    if (!(g.spec() == tp.spec)) throw ParamError("instance grid does not match theorem params");
}

RatioReport make_report(const TheoremParams& tp, double lhs, double rhs, TheoremId id) {
    RatioReport r;
    r.params = tp;
    r.lhs = lhs;
    r.rhs = rhs;
    r.degenerate = rhs == 0.0;
    r.ratio = rhs > 0.0 ? lhs / rhs : 0.0;
    r.theorem_id = theorem_token(id);
    return r;
}

double strong_lhs(const GridFunction& f, const GridFunction& w, const TheoremParams& tp) {
    const GridFunction mf = fractional_maximal(f, tp.alpha);
    return ContentEvaluator(w, tp.delta).lorentz(mf, LorentzParams(tp.q, tp.p));
}

double weak_lhs(const GridFunction& f, const GridFunction& w, const TheoremParams& tp) {
    const GridFunction mf = fractional_maximal(f, tp.alpha);
    return ContentEvaluator(w, tp.delta).lorentz(mf, LorentzParams(tp.q, LorentzParams::kInf));
}

// Right side with the transformed weight inside the content.
double weighted_content_rhs(const GridFunction& f, const GridFunction& w,
                            const TheoremParams& tp) {
    const GridFunction wt = transformed_weight(w, tp.gamma, tp.q, tp.p);
    const double integral = ContentEvaluator(wt, tp.d).choquet(pow_cellwise(f, tp.p));
    return safe_pow(integral, 1.0 / tp.p);
}

// Right side with the transformed weight on the integrand, content unweighted.
double pointwise_weight_rhs(const GridFunction& f, const GridFunction& w,
                            const TheoremParams& tp) {
    const GridFunction wt = transformed_weight(w, tp.gamma, tp.q, tp.p);
    const GridFunction integrand = multiply(pow_cellwise(f, tp.p), wt);
    const GridFunction ones = GridFunction::constant(tp.spec, 1.0);
    const double integral = ContentEvaluator(ones, tp.d).choquet(integrand);
    return safe_pow(integral, 1.0 / tp.p);
}

}  // namespace

RatioReport verify_indicator_estimate(const DyadicCube& cube, const GridFunction& w,
                                      const TheoremParams& tp) {
    if (tp.kind != TheoremParams::Kind::strong)
        throw ParamError("indicator estimate requires strong-type params");
    check_instance_spec(w, tp);
    validate_cube(cube, tp.spec);

    const GridFunction f = GridFunction::indicator(tp.spec, cube);
    const double lhs = safe_pow(strong_lhs(f, w, tp), tp.p);
    const GridFunction wt = transformed_weight(w, tp.gamma, tp.q, tp.p);
    const double rhs = wt.average(cube) * std::exp2(-tp.d * cube.level);
    return make_report(tp, lhs, rhs, TheoremId::indicator);
}

RatioReport verify_strong_type(const GridFunction& f, const GridFunction& w,
                               const TheoremParams& tp) {
    if (tp.kind != TheoremParams::Kind::strong)
        throw ParamError("strong verifier requires strong-type params");
    check_instance_spec(f, tp);
    check_instance_spec(w, tp);
    return make_report(tp, strong_lhs(f, w, tp), weighted_content_rhs(f, w, tp),
                       TheoremId::strong);
}

RatioReport verify_weak_type(const GridFunction& f, const GridFunction& w,
                             const TheoremParams& tp) {
    if (tp.kind != TheoremParams::Kind::weak)
        throw ParamError("weak verifier requires weak-type params");
    check_instance_spec(f, tp);
    check_instance_spec(w, tp);
    return make_report(tp, weak_lhs(f, w, tp), pointwise_weight_rhs(f, w, tp), TheoremId::weak);
}

std::vector<RatioReport> verify_cube_threshold_bounds(const GridFunction& f,
                                                      const CubeFamily& family,
                                                      const TheoremParams& tp, double t) {
    if (tp.kind != TheoremParams::Kind::weak)
        throw ParamError("cube threshold bounds require weak-type params");
    check_instance_spec(f, tp);
    const CubeFamily expected = maximal_cubes(f, tp.alpha, t);
    if (!(expected.cubes == family.cubes))
        throw ParamError("family does not match the maximal cubes of (f, alpha, t)");

    const GridFunction ones = GridFunction::constant(tp.spec, 1.0);
    const ContentEvaluator plain(ones, tp.d);
    const GridFunction fp = pow_cellwise(f, tp.p);

    std::vector<RatioReport> reports;
    reports.reserve(family.cubes.size());
    for (const auto& cube : family.cubes) {
        const double integral_f = f.cube_sum(cube) * tp.spec.cell_volume();
        const double first = safe_pow(t, tp.q) * std::exp2(-tp.delta * cube.level);
        const double middle = safe_pow(std::exp2(-tp.gamma * cube.level) * integral_f, tp.q);
        // Exact consequence of average*l^alpha > t; slack covers pow rounding.
        if (first > middle * (1.0 + 1e-12))
            throw std::logic_error("threshold bound t^q l^delta <= (l^gamma int f)^q failed");

        const double integral_h = plain.choquet(restricted_to_cube(fp, cube));
        const double rhs = std::exp2(-tp.gamma * tp.q * cube.level) *
                           safe_pow(integral_h, tp.q / tp.p);
        reports.push_back(make_report(tp, middle, rhs, TheoremId::cube_bounds));
    }
    return reports;
}

RatioReport verify_conjecture(const GridFunction& f, const GridFunction& w,
                              const TheoremParams& tp, ConjectureVariant variant) {
    check_instance_spec(f, tp);
    check_instance_spec(w, tp);
    if (variant == ConjectureVariant::strong) {
        if (tp.kind != TheoremParams::Kind::strong)
            throw ParamError("conjectured strong variant requires strong-type params");
        return make_report(tp, strong_lhs(f, w, tp), pointwise_weight_rhs(f, w, tp),
                           TheoremId::conj_strong);
    }
    if (tp.kind != TheoremParams::Kind::weak)
        throw ParamError("conjectured weak variant requires weak-type params");
    return make_report(tp, weak_lhs(f, w, tp), weighted_content_rhs(f, w, tp),
                       TheoremId::conj_weak);
}

namespace {

GridFunction rough_function(const GridSpec& spec, Rng& rng) {
    std::vector<double> values(spec.cell_count());
    for (auto& v : values) v = std::exp2(rng.uniform(-8.0, 8.0));
    return GridFunction(spec, std::move(values));
}

DyadicCube random_cube(const GridSpec& spec, Rng& rng) {
    const int level = static_cast<int>(rng.below(spec.L + 1));
    std::vector<std::uint32_t> index(spec.n);
    for (auto& c : index) c = static_cast<std::uint32_t>(rng.below(std::uint64_t{1} << level));
    return DyadicCube(level, std::move(index));
}

GridFunction indicator_sum(const GridSpec& spec, Rng& rng, int max_cubes) {
    std::vector<double> values(spec.cell_count(), 0.0);
    const int count = 1 + static_cast<int>(rng.below(std::max(1, max_cubes)));
    for (int i = 0; i < count; ++i) {
        const DyadicCube cube = random_cube(spec, rng);
        const double coef = std::exp2(rng.uniform(-2.0, 2.0));
        for_each_cell(spec, cube, [&](std::uint64_t cell) { values[cell] += coef; });
    }
    return GridFunction(spec, std::move(values));
}

GridFunction lacunary_function(const GridSpec& spec, Rng& rng) {
    // Powers of two painted along a root-to-leaf chain; deeper cubes win, so
    // values increase toward the chain's leaf and sit exactly on layer edges.
    std::vector<std::uint32_t> leaf(spec.n);
    for (auto& c : leaf) c = static_cast<std::uint32_t>(rng.below(std::uint64_t{1} << spec.L));
    const double base = std::exp2(static_cast<double>(rng.below(5)) - 2.0);
    std::vector<double> values(spec.cell_count(), 0.0);
    for (int k = 0; k <= spec.L; ++k) {
        DyadicCube cube(k, leaf);
        for (auto& c : cube.index) c >>= (spec.L - k);
        const double v = base * std::exp2(static_cast<double>(k));
        for_each_cell(spec, cube, [&](std::uint64_t cell) { values[cell] = v; });
    }
    return GridFunction(spec, std::move(values));
}

GridFunction power_law_weight(const GridSpec& spec, Rng& rng, double beta) {
    if (!(beta > 0.0) || !(beta < static_cast<double>(spec.n)))
        throw ParamError("power-law weight requires 0 < beta < n");
    std::vector<double> center(spec.n);
    const double cells = std::exp2(static_cast<double>(spec.L));
    for (auto& c : center) c = (static_cast<double>(rng.below(std::uint64_t{1} << spec.L)) + 0.5) / cells;
    const double floor_r = std::exp2(-static_cast<double>(spec.L) - 1.0);
    std::vector<double> values(spec.cell_count());
    for (std::uint64_t cell = 0; cell < values.size(); ++cell) {
        const auto coords = cell_coords(spec, cell);
        double r2 = 0.0;
        for (int axis = 0; axis < spec.n; ++axis) {
            const double x = (static_cast<double>(coords[axis]) + 0.5) / cells;
            r2 += (x - center[axis]) * (x - center[axis]);
        }
        const double r = std::max(std::sqrt(r2), floor_r);
        values[cell] = safe_pow(r, -beta);
    }
    return GridFunction(spec, std::move(values));
}

}  // namespace

Instance generate_instance(const GeneratorSpec& gen, std::uint64_t seed) {
    Rng rng(seed);
    std::string id = gen.id;
    if (id == "mixed") {
        static const char* kRotation[4] = {"indsum", "lacunary", "rough", "a1"};
        id = kRotation[rng.below(4)];
    }
    if (id == "indsum") {
        GridFunction f = indicator_sum(gen.spec, rng, gen.max_cubes);
        GridFunction w = rough_function(gen.spec, rng);
        return {std::move(f), std::move(w)};
    }
    if (id == "lacunary") {
        GridFunction f = lacunary_function(gen.spec, rng);
        GridFunction w = rough_function(gen.spec, rng);
        return {std::move(f), std::move(w)};
    }
    if (id == "rough") {
        GridFunction f = rough_function(gen.spec, rng);
        GridFunction w = rough_function(gen.spec, rng);
        return {std::move(f), std::move(w)};
    }
    if (id == "a1") {
        const double beta = gen.beta < 0.0 ? gen.spec.n / 2.0 : gen.beta;
        GridFunction f = indicator_sum(gen.spec, rng, gen.max_cubes);
        GridFunction w = power_law_weight(gen.spec, rng, beta);
        return {std::move(f), std::move(w)};
    }
    if (id == "const") {
        GridFunction f = GridFunction::constant(gen.spec, 1.0);
        GridFunction w = GridFunction::constant(gen.spec, 1.0);
        return {std::move(f), std::move(w)};
    }
    throw ParamError("unknown generator id '" + gen.id + "'");
}

std::string instance_digest(const GridFunction& f, const GridFunction& w) {
    std::uint64_t h = 1469598103934665603ULL;
    const auto mix = [&h](const void* data, std::size_t len) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= bytes[i];
            h *= 1099511628211ULL;
        }
    };
    const std::uint32_t meta[2] = {static_cast<std::uint32_t>(f.spec().n),
                                   static_cast<std::uint32_t>(f.spec().L)};
    mix(meta, sizeof meta);
    mix(f.values().data(), f.values().size() * sizeof(double));
    mix(w.values().data(), w.values().size() * sizeof(double));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string theorem_token(TheoremId id) {
    switch (id) {
        case TheoremId::indicator: return "lemma21";
        case TheoremId::strong: return "strong";
        case TheoremId::weak: return "weak";
        case TheoremId::cube_bounds: return "eq21";
        case TheoremId::adams: return "adams";
        case TheoremId::tang: return "tang";
        case TheoremId::ov_strong: return "ov-strong";
        case TheoremId::ov_weak: return "ov-weak";
        case TheoremId::conj_strong: return "remark14-strong";
        case TheoremId::conj_weak: return "remark14-weak";
    }
    return "";
}

std::optional<TheoremId> parse_theorem_token(const std::string& token) {
    if (token == "lemma21") return TheoremId::indicator;
    if (token == "strong") return TheoremId::strong;
    if (token == "weak") return TheoremId::weak;
    if (token == "eq21") return TheoremId::cube_bounds;
    if (token == "adams") return TheoremId::adams;
    if (token == "tang") return TheoremId::tang;
    if (token == "ov-strong") return TheoremId::ov_strong;
    if (token == "ov-weak") return TheoremId::ov_weak;
    if (token == "remark14-strong") return TheoremId::conj_strong;
    if (token == "remark14-weak") return TheoremId::conj_weak;
    return std::nullopt;
}

bool theorem_uses_weak_box(TheoremId id) {
    return id == TheoremId::weak || id == TheoremId::ov_weak || id == TheoremId::conj_weak ||
           id == TheoremId::cube_bounds;
}

namespace {

void check_specialization(TheoremId id, const TheoremParams& tp) {
    const bool weak_box = theorem_uses_weak_box(id);
    if (weak_box && tp.kind != TheoremParams::Kind::weak)
        throw ParamError(theorem_token(id) + " requires weak-type params");
    if (!weak_box && tp.kind != TheoremParams::Kind::strong)
        throw ParamError(theorem_token(id) + " requires strong-type params");
    switch (id) {
        case TheoremId::adams:
            if (tp.gamma != 0.0) throw ParamError("adams requires gamma = 0");
            break;
        case TheoremId::tang:
            if (tp.gamma != 0.0 || tp.p != tp.q)
                throw ParamError("tang requires p = q and gamma = 0");
            break;
        case TheoremId::ov_strong:
            if (tp.alpha != 0.0 || tp.gamma != 0.0 || tp.p != tp.q)
                throw ParamError("ov-strong requires alpha = gamma = 0 and p = q");
            break;
        case TheoremId::ov_weak:
            if (tp.alpha != 0.0 || tp.gamma != 0.0 || tp.p != tp.q)
                throw ParamError("ov-weak requires alpha = gamma = 0 and p = q");
            break;
        default:
            break;
    }
}

}  // namespace

SuiteResult run_suite(TheoremId id, const TheoremParams& tp, const GeneratorSpec& gen,
                      std::uint64_t trials, std::uint64_t seed) {
    check_specialization(id, tp);
    if (!(gen.spec == tp.spec)) throw ParamError("generator grid does not match theorem params");
    const bool proven = id != TheoremId::conj_strong && id != TheoremId::conj_weak;
    const bool weak_structure = id == TheoremId::weak || id == TheoremId::ov_weak;

    SuiteResult result;
    result.constant = EstimatedConstant{tp, 0.0, "", trials, gen.id};
    result.reports.reserve(trials);

    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        const std::uint64_t sub = substream_seed(seed, trial);
        Instance inst = generate_instance(gen, sub);
        if (id == TheoremId::adams) inst.w = GridFunction::constant(tp.spec, 1.0);

        RatioReport report;
        Rng aux(substream_seed(sub, 0x715Cu));
        switch (id) {
            case TheoremId::indicator: {
                const DyadicCube cube = random_cube(tp.spec, aux);
                inst.f = GridFunction::indicator(tp.spec, cube);
                report = verify_indicator_estimate(cube, inst.w, tp);
                break;
            }
            case TheoremId::strong:
            case TheoremId::adams:
            case TheoremId::tang:
            case TheoremId::ov_strong:
                report = verify_strong_type(inst.f, inst.w, tp);
                break;
            case TheoremId::weak:
            case TheoremId::ov_weak:
                report = verify_weak_type(inst.f, inst.w, tp);
                break;
            case TheoremId::conj_strong:
                report = verify_conjecture(inst.f, inst.w, tp, ConjectureVariant::strong);
                break;
            case TheoremId::conj_weak:
                report = verify_conjecture(inst.f, inst.w, tp, ConjectureVariant::weak);
                break;
            case TheoremId::cube_bounds: {
                const GridFunction mf = fractional_maximal(inst.f, tp.alpha);
                const double top = mf.max_value();
                if (top <= 0.0) {
                    report = make_report(tp, 0.0, 0.0, TheoremId::cube_bounds);
                    break;
                }
                const double t = top * std::max(aux.uniform(), 0x1.0p-52);
                const CubeFamily family = maximal_cubes(inst.f, tp.alpha, t);
                const auto cube_reports = verify_cube_threshold_bounds(inst.f, family, tp, t);
                report = make_report(tp, 0.0, 0.0, TheoremId::cube_bounds);
                for (const auto& cr : cube_reports) {
                    result.second_bound_sup = std::max(result.second_bound_sup, cr.ratio);
                    if (cr.ratio >= report.ratio) report = cr;
                }
                break;
            }
        }

        if (weak_structure) {
            const GridFunction mf = fractional_maximal(inst.f, tp.alpha);
            const double top = mf.max_value();
            if (top > 0.0) {
                const double t = top * std::max(aux.uniform(), 0x1.0p-52);
                const CubeFamily family = maximal_cubes(inst.f, tp.alpha, t);
                packing_subfamily(family, tp.d);
                result.families_checked += 1;
                for (const auto& cr : verify_cube_threshold_bounds(inst.f, family, tp, t))
                    result.second_bound_sup = std::max(result.second_bound_sup, cr.ratio);
            }
        }

        report.theorem_id = theorem_token(id);
        report.seed = sub;
        report.generator_id = gen.id;
        report.instance_digest = instance_digest(inst.f, inst.w);
        if (proven && report.violation()) result.violations += 1;
        if (report.degenerate) result.degenerate_count += 1;
        if (report.ratio > result.constant.sup_ratio ||
            result.constant.argmax_digest.empty()) {
            result.constant.sup_ratio = std::max(result.constant.sup_ratio, report.ratio);
            result.constant.argmax_digest = report.instance_digest;
        }
        result.reports.push_back(std::move(report));
    }
    return result;
}

EstimatedConstant estimate_constant(TheoremId id, const TheoremParams& tp,
                                    const GeneratorSpec& gen, std::uint64_t trials,
                                    std::uint64_t seed) {
    if (trials < 1) throw ParamError("estimate_constant requires trials >= 1");
    return run_suite(id, tp, gen, trials, seed).constant;
}

namespace {

RatioReport dispatch_pair_verifier(TheoremId id, const TheoremParams& tp, const Instance& inst);

}  // namespace

RatioReport run_single(TheoremId id, const TheoremParams& tp, const Instance& inst) {
    check_specialization(id, tp);
    RatioReport report = dispatch_pair_verifier(id, tp, inst);
    report.instance_digest = instance_digest(inst.f, inst.w);
    report.theorem_id = theorem_token(id);
    return report;
}

namespace {

RatioReport dispatch_pair_verifier(TheoremId id, const TheoremParams& tp, const Instance& inst) {
    switch (id) {
        case TheoremId::strong:
        case TheoremId::adams:
        case TheoremId::tang:
        case TheoremId::ov_strong:
            return verify_strong_type(inst.f, inst.w, tp);
        case TheoremId::weak:
        case TheoremId::ov_weak:
            return verify_weak_type(inst.f, inst.w, tp);
        case TheoremId::conj_strong:
            return verify_conjecture(inst.f, inst.w, tp, ConjectureVariant::strong);
        case TheoremId::conj_weak:
            return verify_conjecture(inst.f, inst.w, tp, ConjectureVariant::weak);
        default:
            throw ParamError("hill climb supports verifiers taking an (f, w) pair");
    }
}

}  // namespace

ClimbResult hill_climb_adversary(TheoremId id, const TheoremParams& tp, const GeneratorSpec& gen,
                                 std::uint64_t init_seed, std::uint64_t steps) {
    check_specialization(id, tp);
    Instance best = generate_instance(gen, substream_seed(init_seed, 0));
    double best_ratio = dispatch_pair_verifier(id, tp, best).ratio;

    ClimbResult result{EstimatedConstant{tp, best_ratio, "", steps + 1, gen.id},
                       best,
                       {best_ratio}};

    Rng rng(substream_seed(init_seed, 1));
    for (std::uint64_t step = 0; step < steps; ++step) {
        const bool hit_f = rng.coin();
        const std::uint64_t cell = rng.below(tp.spec.cell_count());
        const double factor = rng.coin() ? 2.0 : 0.5;

        std::vector<double> values = (hit_f ? result.best.f : result.best.w).values();
        const double proposed = values[cell] * factor;
        if (!(proposed < 1e300)) continue;
        values[cell] = proposed;
        GridFunction changed(tp.spec, std::move(values));
        Instance candidate = hit_f ? Instance{std::move(changed), result.best.w}
                                   : Instance{result.best.f, std::move(changed)};

        const double ratio = dispatch_pair_verifier(id, tp, candidate).ratio;
        if (ratio > best_ratio) {
            best_ratio = ratio;
            result.best = std::move(candidate);
            result.accepted_ratios.push_back(ratio);
        }
    }
    result.constant.sup_ratio = best_ratio;
    result.constant.argmax_digest = instance_digest(result.best.f, result.best.w);
    return result;
}

std::string report_to_jsonl(const RatioReport& r) {
    nlohmann::ordered_json j;
    j["params"] = nlohmann::ordered_json{{"n", r.params.spec.n},     {"L", r.params.spec.L},
                                         {"d", r.params.d},          {"alpha", r.params.alpha},
                                         {"gamma", r.params.gamma},  {"p", r.params.p},
                                         {"q", r.params.q},          {"delta", r.params.delta}};
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["ratio"] = r.ratio;
    j["degenerate"] = r.degenerate;
    j["seed"] = r.seed;
    j["instance_digest"] = r.instance_digest;
    j["generator_id"] = r.generator_id;
    j["theorem_id"] = r.theorem_id;
    return j.dump();
}

std::string summary_csv_header() {
    return "theorem_id,n,L,d,alpha,gamma,p,q,delta,generator_id,trials,sup_ratio,argmax_digest,"
           "violations";
}

std::string summary_csv_row(const std::string& theorem_id, const TheoremParams& tp,
                            const EstimatedConstant& est, std::uint64_t violations) {
    std::string row = theorem_id;
    row += ',' + std::to_string(tp.spec.n) + ',' + std::to_string(tp.spec.L);
    for (double v : {tp.d, tp.alpha, tp.gamma, tp.p, tp.q, tp.delta}) {
        row += ',';
        row += format_value(v);
    }
    row += ',' + est.generator_id + ',' + std::to_string(est.trials) + ',' +
           format_value(est.sup_ratio) + ',' + est.argmax_digest + ',' +
           std::to_string(violations);
    return row;
}

}  // namespace choqmax
