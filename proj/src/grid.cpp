#include "choqmax/grid.hpp"

#include <algorithm>
#include <cmath>

namespace choqmax {

GridSpec::GridSpec(int n_, int L_) : n(n_), L(L_) {
    if (n < 1) throw ParamError("grid spec requires n >= 1");
    if (n > kMaxDim) throw ParamError("grid spec requires n <= " + std::to_string(kMaxDim));
    if (L < 0) throw ParamError("grid spec requires L >= 0");
    if (n * L > kMaxCellBits)
        throw ParamError("grid spec requires n*L <= " + std::to_string(kMaxCellBits) +
                         " (cell store would not fit)");
}

std::uint64_t GridSpec::total_cube_count() const {
    std::uint64_t total = 0;
    for (int k = 0; k <= L; ++k) total += cube_count(k);
    return total;
}

double GridSpec::cell_volume() const { return std::exp2(-static_cast<double>(n) * L); }

double DyadicCube::side_length() const { return std::exp2(-static_cast<double>(level)); }

double DyadicCube::volume(int n) const { return std::exp2(-static_cast<double>(n) * level); }

DyadicCube root_cube(const GridSpec& spec) {
    return DyadicCube(0, std::vector<std::uint32_t>(spec.n, 0));
}

void validate_cube(const DyadicCube& cube, const GridSpec& spec) {
    if (cube.level < 0 || cube.level > spec.L)
        throw ParamError("cube level " + std::to_string(cube.level) + " outside [0, " +
                         std::to_string(spec.L) + "]");
    if (static_cast<int>(cube.index.size()) != spec.n)
        throw ParamError("cube has " + std::to_string(cube.index.size()) +
                         " coordinates, grid has n=" + std::to_string(spec.n));
    const std::uint64_t limit = std::uint64_t{1} << cube.level;
    for (std::uint32_t c : cube.index)
        if (c >= limit)
            throw ParamError("cube coordinate " + std::to_string(c) + " outside [0, 2^level)");
}

DyadicCube parent(const DyadicCube& cube) {
    if (cube.level == 0) throw ParamError("root cube has no parent");
    DyadicCube p(cube.level - 1, cube.index);
    for (auto& c : p.index) c >>= 1;
    return p;
}

std::vector<DyadicCube> children(const DyadicCube& cube, const GridSpec& spec) {
    validate_cube(cube, spec);
    if (cube.level >= spec.L) throw ParamError("leaf cube has no children");
    const int n = spec.n;
    std::vector<DyadicCube> result;
    result.reserve(std::size_t{1} << n);
    for (std::uint32_t g = 0; g < (std::uint32_t{1} << n); ++g) {
        DyadicCube child(cube.level + 1, cube.index);
        for (int axis = 0; axis < n; ++axis)
            child.index[axis] = (cube.index[axis] << 1) | ((g >> axis) & 1u);
        result.push_back(std::move(child));
    }
    return result;
}

DyadicCube ancestor(const DyadicCube& cube, int j) {
    DyadicCube a = cube;
    for (int i = 0; i < j; ++i) a = parent(a);
    return a;
}

std::uint64_t cube_morton(const DyadicCube& cube, int n) {
    std::uint64_t m = 0;
    for (int s = 0; s < cube.level; ++s) {
        std::uint64_t group = 0;
        for (int axis = 0; axis < n; ++axis)
            group |= static_cast<std::uint64_t>((cube.index[axis] >> s) & 1u) << axis;
        m |= group << (n * s);
    }
    return m;
}

DyadicCube cube_from_morton(int n, int level, std::uint64_t morton) {
    DyadicCube cube(level, std::vector<std::uint32_t>(n, 0));
    for (int s = 0; s < level; ++s) {
        const std::uint64_t group = (morton >> (n * s)) & ((std::uint64_t{1} << n) - 1);
        for (int axis = 0; axis < n; ++axis)
            cube.index[axis] |= static_cast<std::uint32_t>((group >> axis) & 1u) << s;
    }
    return cube;
}

std::uint64_t cell_index(const GridSpec& spec, const std::vector<std::uint32_t>& coords) {
    std::uint64_t idx = 0;
    for (int axis = spec.n - 1; axis >= 0; --axis) idx = (idx << spec.L) | coords[axis];
    return idx;
}

std::vector<std::uint32_t> cell_coords(const GridSpec& spec, std::uint64_t cell) {
    std::vector<std::uint32_t> coords(spec.n);
    const std::uint64_t mask = (std::uint64_t{1} << spec.L) - 1;
    for (int axis = 0; axis < spec.n; ++axis) {
        coords[axis] = static_cast<std::uint32_t>(cell & mask);
        cell >>= spec.L;
    }
    return coords;
}

std::vector<std::uint32_t> morton_of_cell_table(const GridSpec& spec) {
    const std::uint64_t count = spec.cell_count();
    std::vector<std::uint32_t> table(count);
    for (std::uint64_t cell = 0; cell < count; ++cell) {
        std::uint64_t m = 0;
        std::uint64_t rest = cell;
        // interleave the base-2^L digits of the row-major index
        std::vector<std::uint32_t> coords(spec.n);
        const std::uint64_t mask = (std::uint64_t{1} << spec.L) - 1;
        for (int axis = 0; axis < spec.n; ++axis) {
            coords[axis] = static_cast<std::uint32_t>(rest & mask);
            rest >>= spec.L;
        }
        for (int s = 0; s < spec.L; ++s) {
            std::uint64_t group = 0;
            for (int axis = 0; axis < spec.n; ++axis)
                group |= static_cast<std::uint64_t>((coords[axis] >> s) & 1u) << axis;
            m |= group << (spec.n * s);
        }
        table[cell] = static_cast<std::uint32_t>(m);
    }
    return table;
}

GridFunction::GridFunction(GridSpec spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
    const std::uint64_t count = spec_.cell_count();
    if (values_.size() != count)
        throw ParamError("grid function has " + std::to_string(values_.size()) +
                         " values, expected " + std::to_string(count));
    for (double v : values_)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ParamError("grid function values must be nonnegative and finite");

    level_sums_.resize(spec_.L + 1);
    auto& leaves = level_sums_[spec_.L];
    leaves.resize(count);
    const auto table = morton_of_cell_table(spec_);
    for (std::uint64_t cell = 0; cell < count; ++cell) leaves[table[cell]] = values_[cell];
    const std::uint64_t fan = std::uint64_t{1} << spec_.n;
    for (int k = spec_.L - 1; k >= 0; --k) {
        auto& dst = level_sums_[k];
        const auto& src = level_sums_[k + 1];
        dst.resize(spec_.cube_count(k));
        for (std::uint64_t i = 0; i < dst.size(); ++i) {
            double s = 0.0;
            const std::uint64_t base = i << spec_.n;
            for (std::uint64_t g = 0; g < fan; ++g) s += src[base | g];
            dst[i] = s;
        }
    }
}

GridFunction GridFunction::constant(const GridSpec& spec, double value) {
    return GridFunction(spec, std::vector<double>(spec.cell_count(), value));
}

GridFunction GridFunction::indicator(const GridSpec& spec, const DyadicCube& cube) {
    validate_cube(cube, spec);
    std::vector<double> values(spec.cell_count(), 0.0);
    for_each_cell(spec, cube, [&](std::uint64_t cell) { values[cell] = 1.0; });
    return GridFunction(spec, std::move(values));
}

double GridFunction::cube_sum(const DyadicCube& cube) const {
    validate_cube(cube, spec_);
    return level_sums_[cube.level][cube_morton(cube, spec_.n)];
}

double GridFunction::average(int level, std::uint64_t morton) const {
    const double cells = std::exp2(static_cast<double>(spec_.n) * (spec_.L - level));
    return level_sums_[level][morton] / cells;
}

double GridFunction::average(const DyadicCube& cube) const {
    validate_cube(cube, spec_);
    return average(cube.level, cube_morton(cube, spec_.n));
}

double GridFunction::max_value() const {
    return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

double GridFunction::min_value() const {
    return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end());
}

double average(const GridFunction& f, const DyadicCube& cube) { return f.average(cube); }

CellSet::CellSet(GridSpec spec) : spec_(spec), membership_(spec.cell_count(), 0) {}

CellSet::CellSet(GridSpec spec, std::vector<std::uint8_t> membership)
    : spec_(spec), membership_(std::move(membership)) {
    if (membership_.size() != spec_.cell_count())
        throw ParamError("cell set membership length does not match cell count");
}

CellSet CellSet::from_cube(const GridSpec& spec, const DyadicCube& cube) {
    validate_cube(cube, spec);
    std::vector<std::uint8_t> mask(spec.cell_count(), 0);
    for_each_cell(spec, cube, [&](std::uint64_t cell) { mask[cell] = 1; });
    return CellSet(spec, std::move(mask));
}

CellSet CellSet::from_cells(const GridSpec& spec, const std::vector<std::uint64_t>& cells) {
    std::vector<std::uint8_t> mask(spec.cell_count(), 0);
    for (std::uint64_t c : cells) {
        if (c >= mask.size()) throw ParamError("cell index out of range");
        mask[c] = 1;
    }
    return CellSet(spec, std::move(mask));
}

CellSet CellSet::full(const GridSpec& spec) {
    return CellSet(spec, std::vector<std::uint8_t>(spec.cell_count(), 1));
}

std::uint64_t CellSet::count() const {
    std::uint64_t c = 0;
    for (std::uint8_t b : membership_) c += b;
    return c;
}

CellSet set_union(const CellSet& a, const CellSet& b) {
    if (!(a.spec() == b.spec())) throw ParamError("cell set union requires matching grid specs");
    std::vector<std::uint8_t> mask(a.membership());
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = mask[i] | b.membership()[i];
    return CellSet(a.spec(), std::move(mask));
}

CellSet set_intersection(const CellSet& a, const CellSet& b) {
    if (!(a.spec() == b.spec()))
        throw ParamError("cell set intersection requires matching grid specs");
    std::vector<std::uint8_t> mask(a.membership());
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = mask[i] & b.membership()[i];
    return CellSet(a.spec(), std::move(mask));
}

bool is_subset(const CellSet& a, const CellSet& b) {
    if (!(a.spec() == b.spec())) throw ParamError("subset check requires matching grid specs");
    for (std::size_t i = 0; i < a.membership().size(); ++i)
        if (a.membership()[i] && !b.membership()[i]) return false;
    return true;
}

CellSet level_set(const GridFunction& f, double t) {
    if (!(t >= 0.0)) throw ParamError("level set threshold must be >= 0");
    std::vector<std::uint8_t> mask(f.spec().cell_count(), 0);
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = f.values()[i] > t ? 1 : 0;
    return CellSet(f.spec(), std::move(mask));
}

GridFunction add(const GridFunction& a, const GridFunction& b) {
    if (!(a.spec() == b.spec())) throw ParamError("grid function add requires matching specs");
    std::vector<double> values(a.values());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += b.values()[i];
    return GridFunction(a.spec(), std::move(values));
}

GridFunction multiply(const GridFunction& a, const GridFunction& b) {
    if (!(a.spec() == b.spec())) throw ParamError("grid function multiply requires matching specs");
    std::vector<double> values(a.values());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] *= b.values()[i];
    return GridFunction(a.spec(), std::move(values));
}

GridFunction scale(const GridFunction& f, double c) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw ParamError("scale factor must be >= 0 and finite");
    std::vector<double> values(f.values());
    for (auto& v : values) v *= c;
    return GridFunction(f.spec(), std::move(values));
}

GridFunction pow_cellwise(const GridFunction& f, double exponent) {
    if (!(exponent > 0.0)) throw ParamError("cellwise power requires a positive exponent");
    std::vector<double> values(f.values());
    for (auto& v : values) v = safe_pow(v, exponent);
    return GridFunction(f.spec(), std::move(values));
}

GridFunction restricted_to_cube(const GridFunction& f, const DyadicCube& cube) {
    validate_cube(cube, f.spec());
    std::vector<double> values(f.spec().cell_count(), 0.0);
    for_each_cell(f.spec(), cube, [&](std::uint64_t cell) { values[cell] = f.value(cell); });
    return GridFunction(f.spec(), std::move(values));
}

double safe_pow(double base, double exponent) {
    if (base == 0.0) return 0.0;
    if (base < 1e-300) return std::exp(exponent * std::log(base));
    return std::pow(base, exponent);
}

bool CubeFamily::is_pairwise_disjoint() const {
    // Dyadic cubes overlap iff one is an ancestor of the other.
    struct Key {
        int level;
        std::uint64_t morton;
    };
    std::vector<Key> keys;
    keys.reserve(cubes.size());
    for (const auto& c : cubes) keys.push_back({c.level, cube_morton(c, spec.n)});
    for (std::size_t i = 0; i < keys.size(); ++i)
        for (std::size_t j = i + 1; j < keys.size(); ++j) {
            const Key& a = keys[i].level <= keys[j].level ? keys[i] : keys[j];
            const Key& b = keys[i].level <= keys[j].level ? keys[j] : keys[i];
            if ((b.morton >> (spec.n * (b.level - a.level))) == a.morton) return false;
        }
    return true;
}

CellSet CubeFamily::union_cells() const {
    std::vector<std::uint8_t> mask(spec.cell_count(), 0);
    for (const auto& c : cubes)
        for_each_cell(spec, c, [&](std::uint64_t cell) { mask[cell] = 1; });
    return CellSet(spec, std::move(mask));
}

}  // namespace choqmax
