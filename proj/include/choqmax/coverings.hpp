#pragma once

#include <vector>

#include "choqmax/content.hpp"
#include "choqmax/grid.hpp"

namespace choqmax {

// One dyadic value layer {2^k < f <= 2^(k+1)} together with a nonoverlapping
// covering family and the bookkeeping coefficient 2^(p(k+1)).
struct Layer {
    int k;
    CubeFamily family;
    double coefficient;
};

struct LayerDecomposition {
    double p;
    std::vector<Layer> layers;
};

// Inclusion-maximal dyadic cubes with average(f,Q)*l(Q)^alpha > t. Disjoint by
// maximality; their union is exactly the superlevel set {M_alpha f > t}.
CubeFamily maximal_cubes(const GridFunction& f, double alpha, double t);

// Index k of the layer holding value v > 0, i.e. 2^k < v <= 2^(k+1).
int layer_index(double v);

// Covers each nonempty layer of f by an optimal family under cp; the factor-2
// budget of the coefficient bookkeeping is met with room to spare. Empty
// layers are skipped; f identically 0 is rejected.
LayerDecomposition layer_decomposition(const GridFunction& f, double p, const ContentParams& cp);

struct PackingResult {
    CubeFamily selected;
    CubeFamily residual;
};

// Splits a disjoint family into a packed subfamily and residual cubes with:
//   (i)   sum over selected cubes inside Q of l^d <= 2 l(Q)^d, every dyadic Q;
//   (ii)  union(family) covered by union(selected) + union(residual);
//   (iii) l(R)^d <= sum over selected cubes inside R of l^d, every residual R.
// Greedy by decreasing side; a cube whose admission would break (i) turns its
// deepest over-budget ancestor into a residual instead. All three properties
// are re-checked on every call; a violation throws std::logic_error.
PackingResult packing_subfamily(const CubeFamily& family, double d);

// Post-hoc verification of (i)-(iii); returns an empty string when all hold,
// else a description of the first failure.
std::string check_packing(const CubeFamily& family, const PackingResult& result, double d);

}  // namespace choqmax
