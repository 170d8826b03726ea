#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace choqmax {

/// Raised when a parameter violates an admissibility constraint (CLI exit 3).
class ParamError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised on malformed input files (CLI exit 2). Messages name the offending line.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Finite dyadic grid over [0,1)^n subdivided to depth L. Finest cells have
/// side 2^-L; there are 2^(n*L) of them, stored row-major with axis 0 fastest.
struct GridSpec {
    int n = 1;
    int L = 0;

    static constexpr int kMaxDim = 8;
    static constexpr int kMaxCellBits = 24;  // hard cap on n*L

    GridSpec() = default;
    GridSpec(int n_, int L_);

    std::uint64_t cell_count() const { return std::uint64_t{1} << (n * L); }
    std::uint64_t cube_count(int level) const { return std::uint64_t{1} << (n * level); }
    std::uint64_t total_cube_count() const;
    double cell_volume() const;

    bool operator==(const GridSpec&) const = default;
};

/// One node of the dyadic tree: level k in [0,L], integer coordinates in [0,2^k)^n.
/// The level-0 cube is the root [0,1)^n; side length is 2^-k.
struct DyadicCube {
    int level = 0;
    std::vector<std::uint32_t> index;  // one coordinate per axis

    DyadicCube() = default;
    DyadicCube(int level_, std::vector<std::uint32_t> index_)
        : level(level_), index(std::move(index_)) {}

    double side_length() const;
    double volume(int n) const;

    bool operator==(const DyadicCube&) const = default;
};

DyadicCube root_cube(const GridSpec& spec);
void validate_cube(const DyadicCube& cube, const GridSpec& spec);

/// Smallest dyadic cube strictly containing `cube` (coordinates floor-halved).
DyadicCube parent(const DyadicCube& cube);

/// The 2^n level+1 cubes partitioning `cube`, in child-group order
/// (axis-0 bit least significant).
std::vector<DyadicCube> children(const DyadicCube& cube, const GridSpec& spec);

/// j-th ancestor: parent applied j times.
DyadicCube ancestor(const DyadicCube& cube, int j);

// Internal tree addressing: nodes of each level are stored in Morton order, so
// that the children of node m at level k are {m*2^n + g : g in [0,2^n)} at
// level k+1 and the parent of m is m >> n.
std::uint64_t cube_morton(const DyadicCube& cube, int n);
DyadicCube cube_from_morton(int n, int level, std::uint64_t morton);

/// Row-major index of the finest-level cell with the given coordinates.
std::uint64_t cell_index(const GridSpec& spec, const std::vector<std::uint32_t>& coords);
std::vector<std::uint32_t> cell_coords(const GridSpec& spec, std::uint64_t cell);

/// Table mapping row-major cell index -> Morton index at level L.
std::vector<std::uint32_t> morton_of_cell_table(const GridSpec& spec);

/// Invoke fn(cell_index) for every finest-level cell inside `cube`.
template <typename Fn>
void for_each_cell(const GridSpec& spec, const DyadicCube& cube, Fn&& fn) {
    const int shift = spec.L - cube.level;
    const std::uint64_t per_axis = std::uint64_t{1} << shift;
    std::vector<std::uint64_t> offset(spec.n, 0);
    for (;;) {
        std::uint64_t idx = 0;
        for (int axis = spec.n - 1; axis >= 0; --axis) {
            const std::uint64_t coord = (std::uint64_t{cube.index[axis]} << shift) + offset[axis];
            idx = (idx << spec.L) | coord;
        }
        fn(idx);
        int axis = 0;
        while (axis < spec.n && ++offset[axis] == per_axis) {
            offset[axis] = 0;
            ++axis;
        }
        if (axis == spec.n) break;
    }
}

/// Nonnegative step function constant on finest-level cells. Immutable; the
/// constructor builds a bottom-up sum tree so cube sums and averages are O(1).
class GridFunction {
public:
    GridFunction(GridSpec spec, std::vector<double> values);

    static GridFunction constant(const GridSpec& spec, double value);
    static GridFunction indicator(const GridSpec& spec, const DyadicCube& cube);

    const GridSpec& spec() const { return spec_; }
    const std::vector<double>& values() const { return values_; }
    double value(std::uint64_t cell) const { return values_[cell]; }

    double cube_sum(int level, std::uint64_t morton) const { return level_sums_[level][morton]; }
    double cube_sum(const DyadicCube& cube) const;
    double average(int level, std::uint64_t morton) const;
    double average(const DyadicCube& cube) const;

    double total() const { return level_sums_[0][0]; }
    double max_value() const;
    double min_value() const;

private:
    GridSpec spec_;
    std::vector<double> values_;                    // row-major cells
    std::vector<std::vector<double>> level_sums_;   // [level][morton]
};

/// Integral average of f over Q.
double average(const GridFunction& f, const DyadicCube& cube);

/// Subset of the finest-level cells, stored as a row-major membership mask.
class CellSet {
public:
    explicit CellSet(GridSpec spec);
    CellSet(GridSpec spec, std::vector<std::uint8_t> membership);

    static CellSet from_cube(const GridSpec& spec, const DyadicCube& cube);
    static CellSet from_cells(const GridSpec& spec, const std::vector<std::uint64_t>& cells);
    static CellSet full(const GridSpec& spec);

    const GridSpec& spec() const { return spec_; }
    const std::vector<std::uint8_t>& membership() const { return membership_; }
    bool contains(std::uint64_t cell) const { return membership_[cell] != 0; }
    std::uint64_t count() const;
    bool empty() const { return count() == 0; }

    bool operator==(const CellSet&) const = default;

private:
    GridSpec spec_;
    std::vector<std::uint8_t> membership_;
};

CellSet set_union(const CellSet& a, const CellSet& b);
CellSet set_intersection(const CellSet& a, const CellSet& b);
bool is_subset(const CellSet& a, const CellSet& b);

/// Cells where f > t (strict).
CellSet level_set(const GridFunction& f, double t);

// Cellwise arithmetic. Each returns a fresh function (sum tree rebuilt).
GridFunction add(const GridFunction& a, const GridFunction& b);
GridFunction multiply(const GridFunction& a, const GridFunction& b);
GridFunction scale(const GridFunction& f, double c);
GridFunction pow_cellwise(const GridFunction& f, double exponent);
GridFunction restricted_to_cube(const GridFunction& f, const DyadicCube& cube);

/// pow with the small-base guard: exact zeros stay zero, tiny bases go through
/// log space so that underflow is monotone.
double safe_pow(double base, double exponent);

/// Ordered list of dyadic cubes (coverings, threshold families, packing output).
/// `disjoint` records the producer's pairwise-disjointness promise.
struct CubeFamily {
    GridSpec spec;
    std::vector<DyadicCube> cubes;
    bool disjoint = false;

    bool is_pairwise_disjoint() const;
    CellSet union_cells() const;
};

}  // namespace choqmax
