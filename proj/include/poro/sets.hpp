#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "poro/vec.hpp"

namespace poro {

// Axis-aligned contraction x -> ratio * x + translation, no rotation part.
// Every construction here keeps the unit cube invariant.
struct Similitude {
    double ratio;
    Vec translation;

    Similitude(double ratio_, Vec translation_);
    Vec apply(const Vec& x) const;
};

class IfsSystem {
public:
    IfsSystem(std::size_t n, std::vector<Similitude> maps, bool open_set_condition = false);

    std::size_t ambient_dim() const noexcept { return n_; }
    const std::vector<Similitude>& maps() const noexcept { return maps_; }
    bool declared_osc() const noexcept { return osc_; }
    std::vector<double> ratios() const;

    // Checks that no two map images of the unit cube overlap with positive
    // volume (face contact allowed).
    bool audit_open_set_condition() const;

private:
    std::size_t n_;
    std::vector<Similitude> maps_;
    bool osc_;
};

// A subset of [0,1]^n rasterized as closed dyadic cubes of side 2^-depth.
// Cells are stored as packed integer tuples in lexicographic order.
class DyadicCubeSet {
public:
    using CellTuple = std::array<std::uint32_t, kMaxDim>;

    DyadicCubeSet(std::size_t n, int depth, std::vector<std::uint64_t> sorted_packed_cells);

    static DyadicCubeSet from_tuples(std::size_t n, int depth,
                                     std::vector<std::vector<std::uint32_t>> cells);
    static DyadicCubeSet full_cube(std::size_t n, int depth);
    static DyadicCubeSet segment(std::size_t n, int depth);   // [0,1] x {0}^(n-1)
    static DyadicCubeSet single_cell(std::size_t n, int depth); // middle cell

    std::size_t ambient_dim() const noexcept { return n_; }
    int depth() const noexcept { return depth_; }
    std::size_t size() const noexcept { return cells_.size(); }
    std::uint32_t grid_size() const noexcept { return std::uint32_t(1) << depth_; }
    const std::vector<std::uint64_t>& packed_cells() const noexcept { return cells_; }

    CellTuple cell(std::size_t i) const;
    Vec cell_center(std::size_t i) const;
    bool contains_cell(const CellTuple& t) const;

    std::uint64_t pack(const CellTuple& t) const;
    CellTuple unpack(std::uint64_t key) const;

    double cell_side() const noexcept { return std::ldexp(1.0, -depth_); }

private:
    std::size_t n_;
    int depth_;
    std::vector<std::uint64_t> cells_;
};

struct NaturalMeasure {
    std::shared_ptr<const DyadicCubeSet> base;
    std::vector<double> weights; // sums to 1

    double mass() const;
};

// The two-map lambda-Cantor system {x -> lx, x -> lx + 1 - l} on [0,1].
IfsSystem cantor_ifs(double lambda);

// The interval [0,1] as the two-map half system {x/2, x/2 + 1/2}.
IfsSystem interval_ifs();

// Product of two systems whose maps all share one common ratio; pairs every
// map of A with every map of B.
IfsSystem product_ifs(const IfsSystem& a, const IfsSystem& b);

// Nested-corner carpet: for each level i in 1..l, the 2^n - 1 maps of ratio
// 2^-i whose images are the non-origin half-subcubes of [0, 2^-(i-1)]^n.
// The images tile [0,1]^n minus the interior of the corner cube [0, 2^-l]^n.
IfsSystem corner_carpet_ifs(std::size_t n, int levels);

struct RasterOptions {
    std::size_t max_cells = std::size_t(1) << 26;
};

// Marks every depth-j cell whose closed cube meets a terminal image box of
// the iteration; guaranteed over-approximation of the attractor with excess
// bounded by one cell neighborhood.
DyadicCubeSet rasterize(const IfsSystem& f, int depth, const RasterOptions& opts = {});

DyadicCubeSet raster_product(const DyadicCubeSet& a, const DyadicCubeSet& b);

// corner carpet in the first m axes times the full cube in the rest.
DyadicCubeSet corner_cylinder(std::size_t n, std::size_t m, int levels, int depth);

NaturalMeasure natural_measure(DyadicCubeSet set);
NaturalMeasure natural_measure(std::shared_ptr<const DyadicCubeSet> set);

// Canonical text form (JSON document with format_version/n/depth/cell_count/
// cells) or the compact binary form (magic "DCS1"). load auto-detects.
void save_set_text(const DyadicCubeSet& set, const std::string& path);
void save_set_binary(const DyadicCubeSet& set, const std::string& path);
DyadicCubeSet load_set(const std::string& path);

} // namespace poro
