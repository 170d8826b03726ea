#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "choqmax/grid.hpp"

namespace choqmax {

// Dimension parameter and weight of the content H^d_w. d is restricted to
// (0, n]; evaluations with larger exponents (the delta of the theorem margins)
// go through ContentEvaluator directly.
struct ContentParams {
    double d;
    GridFunction weight;
    ContentParams(double d_, GridFunction weight_);
};

// First and second exponent of the space L^{p,q}. Only positivity is checked
// here: the verification harness uses both orderings of the pair (the theorem
// sides live in L^{q,p} with p <= q), so an ordering constraint would reject
// required instances. q may be infinity (weak space).
struct LorentzParams {
    double p;
    double q;
    static constexpr double kInf = std::numeric_limits<double>::infinity();
    LorentzParams(double p_, double q_);
    [[nodiscard]] bool weak() const { return q == kInf; }
};

// One breakpoint of a distribution function: threshold t and the content of
// {g >= t}. Breakpoints are the distinct positive values of g, ascending.
struct DistributionPoint {
    double t;
    double content;
};

// Min-cost covering machinery for one fixed (weight, exponent) pair. Cube
// costs average(w,Q)*2^(-level*exponent) are precomputed per level in Morton
// order; content is a bottom-up tree fold
//   cost(Q) = min(own cost, sum of child costs),  leaves: own cost iff in E,
// whose minimum over the root is exact because optimal coverings can be taken
// to be antichains. Any exponent > 0 is accepted.
class ContentEvaluator {
  public:
    ContentEvaluator(GridFunction weight, double exponent);

    [[nodiscard]] const GridSpec& spec() const { return spec_; }
    [[nodiscard]] double exponent() const { return exponent_; }
    [[nodiscard]] const GridFunction& weight() const { return weight_; }

    [[nodiscard]] double cube_cost(int level, std::uint64_t morton) const {
        return coef_[level][morton];
    }
    [[nodiscard]] double cube_cost(const DyadicCube& cube) const;
    [[nodiscard]] double covering_cost(const CubeFamily& family) const;

    [[nodiscard]] double content(const CellSet& set) const;
    [[nodiscard]] CubeFamily optimal_cover(const CellSet& set) const;

    // All breakpoints (t_i, content({g >= t_i})) in one incremental sweep,
    // descending thresholds internally, bit-identical to content() per point.
    [[nodiscard]] std::vector<DistributionPoint> distribution(const GridFunction& g) const;

    // Layer-cake integral of g against this content.
    [[nodiscard]] double choquet(const GridFunction& g) const;
    [[nodiscard]] double choquet(const std::vector<DistributionPoint>& dist) const;

    // L^{p,q} quasinorm of g with this content as the distribution measure.
    [[nodiscard]] double lorentz(const GridFunction& g, const LorentzParams& lp) const;
    [[nodiscard]] double lorentz(const std::vector<DistributionPoint>& dist,
                                 const LorentzParams& lp) const;

  private:
    GridSpec spec_;
    double exponent_;
    GridFunction weight_;
    std::vector<std::vector<double>> coef_;     // [level][morton] cube cost
    std::vector<std::uint32_t> cell_to_morton_;  // row-major cell -> leaf morton

    void check_spec(const GridSpec& other) const;
    [[nodiscard]] std::vector<std::vector<double>> dp_costs(const CellSet& set) const;
};

double content(const CellSet& set, const ContentParams& params);
CubeFamily optimal_cover(const CellSet& set, const ContentParams& params);
double choquet_integral(const GridFunction& f, const ContentParams& params);
double lorentz_quasinorm(const GridFunction& f, const LorentzParams& lp,
                         const ContentParams& cp);

}  // namespace choqmax
