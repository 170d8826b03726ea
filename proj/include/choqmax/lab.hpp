#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "choqmax/content.hpp"
#include "choqmax/coverings.hpp"
#include "choqmax/grid.hpp"
#include "choqmax/operators.hpp"

namespace choqmax {

// Admissible parameter set for one inequality. The two boxes:
//   strong: d/n < p <= q < n/gamma (q finite), p < d/alpha when alpha > 0,
//           delta = (q/p)(d - (alpha-gamma)p);
//   weak:   p = d/n, d/n <= q <= n/alpha, gamma*q < n,
//           delta = q(n - alpha + gamma).
// Both require 0 < d <= n, 0 <= alpha < n, 0 <= gamma <= alpha. In the weak
// box the two delta formulas coincide exactly when p*n equals d as a real
// number; construction verifies that identity on the doubles' exact values.
struct TheoremParams {
    enum class Kind { strong, weak };

    GridSpec spec;
    Kind kind = Kind::strong;
    double d = 1.0;
    double alpha = 0.0;
    double gamma = 0.0;
    double p = 1.0;
    double q = 1.0;
    double delta = 1.0;  // derived from the box

    static TheoremParams strong_type(const GridSpec& spec, double d, double alpha, double gamma,
                                     double p, double q);
    static TheoremParams weak_type(const GridSpec& spec, double d, double alpha, double gamma,
                                   double q);
};

// True iff x*n == y holds exactly for the rationals the doubles denote.
bool exact_product_equals(double x, int n, double y);

struct RatioReport {
    TheoremParams params;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;     // lhs/rhs, 0 when rhs = 0
    bool degenerate = false;  // rhs = 0
    std::uint64_t seed = 0;
    std::string instance_digest;
    std::string generator_id;
    std::string theorem_id;

    // rhs = 0 < lhs breaks a proven inequality's validity invariant.
    [[nodiscard]] bool violation() const { return rhs == 0.0 && lhs > 0.0; }
};

struct EstimatedConstant {
    TheoremParams params;
    double sup_ratio = 0.0;
    std::string argmax_digest;
    std::uint64_t trials = 0;
    std::string generator_id;
};

// (M_{gamma*q} w)^{p/q}, the transformed weight on the theorem right sides.
GridFunction transformed_weight(const GridFunction& w, double gamma, double q, double p);

// Indicator estimate: lhs = p-th power of the L^{q,p}(H^delta_w) quasinorm of
// M_alpha applied to the indicator of `cube`; rhs = average over the cube of
// the transformed weight times l(cube)^d.
RatioReport verify_indicator_estimate(const DyadicCube& cube, const GridFunction& w,
                                      const TheoremParams& tp);

// Strong type: lhs = L^{q,p}(H^delta_w) quasinorm of M_alpha f; rhs = p-th
// root of the layer-cake integral of f^p under the content H^d weighted by
// the transformed weight.
RatioReport verify_strong_type(const GridFunction& f, const GridFunction& w,
                               const TheoremParams& tp);

// Weak type: lhs = sup over breakpoints t of t * H^delta_w({M_alpha f >= t})^{1/q};
// rhs = p-th root of the integral of f^p * transformed weight against the
// unweighted H^d (the weight rides on the integrand, not on the content).
RatioReport verify_weak_type(const GridFunction& f, const GridFunction& w,
                             const TheoremParams& tp);

// Per maximal cube: asserts t^q l^delta <= (l^gamma * integral of f)^q (an
// exact consequence of the threshold), throwing std::logic_error on failure,
// and reports the ratio of (l^gamma integral f)^q to
// l^{gamma q} (integral of f^p dH^d)^{q/p}, whose constant is only empirical.
std::vector<RatioReport> verify_cube_threshold_bounds(const GridFunction& f,
                                                      const CubeFamily& family,
                                                      const TheoremParams& tp, double t);

// Conjectured pairings: variant strong takes the strong lhs with the
// weak-style rhs; variant weak takes the weak lhs with the strong-style rhs.
// Nothing is asserted; with w constant both collapse to the proven forms.
enum class ConjectureVariant { strong, weak };
RatioReport verify_conjecture(const GridFunction& f, const GridFunction& w,
                              const TheoremParams& tp, ConjectureVariant variant);

// Instance generation. Families:
//   indsum   f = sum of random cube indicators, w rough;
//   lacunary f = powers of two on a nested cube chain, w rough;
//   rough    f and w log-uniform per cell over [2^-8, 2^8];
//   a1       f = indicator sum, w = clamped power law |x - x0|^(-beta);
//   constant f = w = 1;
//   mixed    rotates through the four random families by seed.
struct GeneratorSpec {
    std::string id = "mixed";
    GridSpec spec;
    int max_cubes = 4;     // indsum
    double beta = -1.0;    // a1 exponent; default n/2 when unset
};

struct Instance {
    GridFunction f;
    GridFunction w;
};

Instance generate_instance(const GeneratorSpec& gen, std::uint64_t seed);

// FNV-1a over (n, L, f bits, w bits), 16 hex digits.
std::string instance_digest(const GridFunction& f, const GridFunction& w);

enum class TheoremId {
    indicator,       // token lemma21
    strong,          // token strong
    weak,            // token weak
    cube_bounds,     // token eq21
    adams,           // token adams
    tang,            // token tang
    ov_strong,       // token ov (strong half)
    ov_weak,         // token ov (weak half)
    conj_strong,     // token remark14-strong
    conj_weak,       // token remark14-weak
};

std::string theorem_token(TheoremId id);
std::optional<TheoremId> parse_theorem_token(const std::string& token);
// Tokens accepted by the verify command ("ov" covers both halves).
bool theorem_uses_weak_box(TheoremId id);

struct SuiteResult {
    std::vector<RatioReport> reports;
    EstimatedConstant constant;
    std::uint64_t violations = 0;        // rhs = 0 < lhs events
    std::uint64_t degenerate_count = 0;
    std::uint64_t families_checked = 0;  // packing invocations (weak suites)
    double second_bound_sup = 0.0;       // cube_bounds only
};

// Runs `trials` generated instances through the verifier for `id`. Weak-box
// suites also exercise the covering machinery per trial: maximal cubes at a
// random threshold, the packing postconditions, and the exact cube threshold
// bound. Deterministic given (seed, gen, trials).
SuiteResult run_suite(TheoremId id, const TheoremParams& tp, const GeneratorSpec& gen,
                      std::uint64_t trials, std::uint64_t seed);

// One verifier invocation on a supplied instance (replay path). Only the
// verifiers taking an (f, w) pair are supported.
RatioReport run_single(TheoremId id, const TheoremParams& tp, const Instance& inst);

EstimatedConstant estimate_constant(TheoremId id, const TheoremParams& tp,
                                    const GeneratorSpec& gen, std::uint64_t trials,
                                    std::uint64_t seed);

struct ClimbResult {
    EstimatedConstant constant;
    Instance best;
    std::vector<double> accepted_ratios;  // nondecreasing, starts at the seed instance
};

// Local search: single-cell x2 / x0.5 perturbations of f or w, accepted when
// the ratio strictly increases. Deterministic given the seed.
ClimbResult hill_climb_adversary(TheoremId id, const TheoremParams& tp, const GeneratorSpec& gen,
                                 std::uint64_t init_seed, std::uint64_t steps);

// Report rows in the external schema.
std::string report_to_jsonl(const RatioReport& report);
std::string summary_csv_header();
std::string summary_csv_row(const std::string& theorem_id, const TheoremParams& tp,
                            const EstimatedConstant& est, std::uint64_t violations);

}  // namespace choqmax
