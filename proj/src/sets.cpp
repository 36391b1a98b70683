#include "poro/sets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "poro/errors.hpp"

namespace poro {

namespace {

void check_depth(std::size_t n, int depth) {
    if (depth < 1 || depth > 30) throw input_error("DyadicCubeSet: depth must lie in [1, 30]");
    if (static_cast<std::size_t>(depth) * n > 60)
        throw resource_error("DyadicCubeSet: n * depth exceeds the 60-bit cell budget");
}

} // namespace

Similitude::Similitude(double ratio_, Vec translation_)
    : ratio(ratio_), translation(std::move(translation_)) {
    check_dim(translation.size(), "Similitude");
    if (!(ratio > 0.0 && ratio < 1.0)) throw input_error("Similitude: ratio must lie in (0, 1)");
    for (double t : translation)
        if (!(t >= -1e-12 && t + ratio <= 1.0 + 1e-12))
            throw input_error("Similitude: image of the unit cube leaves the unit cube");
}

Vec Similitude::apply(const Vec& x) const {
    check_same_dim(x, translation, "Similitude::apply");
    Vec y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = ratio * x[i] + translation[i];
    return y;
}

IfsSystem::IfsSystem(std::size_t n, std::vector<Similitude> maps, bool open_set_condition)
    : n_(n), maps_(std::move(maps)), osc_(open_set_condition) {
    check_dim(n_, "IfsSystem");
    if (maps_.empty()) throw input_error("IfsSystem: at least one map required");
    for (const auto& m : maps_)
        if (m.translation.size() != n_) throw input_error("IfsSystem: map dimension mismatch");
}

std::vector<double> IfsSystem::ratios() const {
    std::vector<double> r;
    r.reserve(maps_.size());
    for (const auto& m : maps_) r.push_back(m.ratio);
    return r;
}

bool IfsSystem::audit_open_set_condition() const {
    for (std::size_t i = 0; i < maps_.size(); ++i) {
        for (std::size_t j = i + 1; j < maps_.size(); ++j) {
            double overlap = 1.0;
            for (std::size_t a = 0; a < n_ && overlap > 0.0; ++a) {
                const double lo = std::max(maps_[i].translation[a], maps_[j].translation[a]);
                const double hi = std::min(maps_[i].translation[a] + maps_[i].ratio,
                                           maps_[j].translation[a] + maps_[j].ratio);
                overlap = std::min(overlap, hi - lo);
            }
            if (overlap > 1e-12) return false;
        }
    }
    return true;
}

DyadicCubeSet::DyadicCubeSet(std::size_t n, int depth,
                             std::vector<std::uint64_t> sorted_packed_cells)
    : n_(n), depth_(depth), cells_(std::move(sorted_packed_cells)) {
    check_dim(n_, "DyadicCubeSet");
    check_depth(n_, depth_);
    const std::uint64_t limit = std::uint64_t(1) << (static_cast<std::uint64_t>(depth_) * n_);
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        if (cells_[i] >= limit) throw input_error("DyadicCubeSet: cell out of range");
        if (i > 0 && cells_[i] <= cells_[i - 1])
            throw input_error("DyadicCubeSet: cells must be strictly sorted");
    }
}

DyadicCubeSet DyadicCubeSet::from_tuples(std::size_t n, int depth,
                                         std::vector<std::vector<std::uint32_t>> cells) {
    check_dim(n, "DyadicCubeSet");
    check_depth(n, depth);
    const std::uint32_t grid = std::uint32_t(1) << depth;
    std::vector<std::uint64_t> packed;
    packed.reserve(cells.size());
    for (const auto& t : cells) {
        if (t.size() != n) throw input_error("DyadicCubeSet: tuple arity mismatch");
        std::uint64_t key = 0;
        for (std::size_t a = 0; a < n; ++a) {
            if (t[a] >= grid) throw input_error("DyadicCubeSet: coordinate out of range");
            key = (key << depth) | t[a];
        }
        packed.push_back(key);
    }
    std::sort(packed.begin(), packed.end());
    packed.erase(std::unique(packed.begin(), packed.end()), packed.end());
    return DyadicCubeSet(n, depth, std::move(packed));
}

DyadicCubeSet DyadicCubeSet::full_cube(std::size_t n, int depth) {
    check_dim(n, "DyadicCubeSet");
    check_depth(n, depth);
    const std::uint64_t count = std::uint64_t(1) << (static_cast<std::uint64_t>(depth) * n);
    if (count > (std::uint64_t(1) << 26))
        throw resource_error("full_cube: raster exceeds the cell budget");
    std::vector<std::uint64_t> cells(count);
    for (std::uint64_t i = 0; i < count; ++i) cells[i] = i;
    return DyadicCubeSet(n, depth, std::move(cells));
}

DyadicCubeSet DyadicCubeSet::segment(std::size_t n, int depth) {
    check_dim(n, "DyadicCubeSet");
    check_depth(n, depth);
    const std::uint64_t count = std::uint64_t(1) << depth;
    std::vector<std::uint64_t> cells(count);
    const int shift = depth * static_cast<int>(n - 1);
    for (std::uint64_t i = 0; i < count; ++i) cells[i] = i << shift;
    return DyadicCubeSet(n, depth, std::move(cells));
}

DyadicCubeSet DyadicCubeSet::single_cell(std::size_t n, int depth) {
    check_dim(n, "DyadicCubeSet");
    check_depth(n, depth);
    const std::uint32_t mid = std::uint32_t(1) << (depth - 1);
    std::uint64_t key = 0;
    for (std::size_t a = 0; a < n; ++a) key = (key << depth) | mid;
    return DyadicCubeSet(n, depth, {key});
}

DyadicCubeSet::CellTuple DyadicCubeSet::cell(std::size_t i) const {
    return unpack(cells_[i]);
}

Vec DyadicCubeSet::cell_center(std::size_t i) const {
    const CellTuple t = unpack(cells_[i]);
    const double side = cell_side();
    Vec c(n_);
    for (std::size_t a = 0; a < n_; ++a) c[a] = (static_cast<double>(t[a]) + 0.5) * side;
    return c;
}

bool DyadicCubeSet::contains_cell(const CellTuple& t) const {
    const std::uint64_t key = pack(t);
    return std::binary_search(cells_.begin(), cells_.end(), key);
}

std::uint64_t DyadicCubeSet::pack(const CellTuple& t) const {
    std::uint64_t key = 0;
    for (std::size_t a = 0; a < n_; ++a) key = (key << depth_) | t[a];
    return key;
}

DyadicCubeSet::CellTuple DyadicCubeSet::unpack(std::uint64_t key) const {
    CellTuple t{};
    const std::uint64_t mask = (std::uint64_t(1) << depth_) - 1;
    for (std::size_t a = n_; a-- > 0;) {
        t[a] = static_cast<std::uint32_t>(key & mask);
        key >>= depth_;
    }
    return t;
}

double NaturalMeasure::mass() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

IfsSystem cantor_ifs(double lambda) {
    if (!(lambda > 0.0 && lambda < 0.5))
        throw input_error("cantor_ifs: lambda must lie in (0, 1/2)");
    std::vector<Similitude> maps;
    maps.emplace_back(lambda, Vec{0.0});
    maps.emplace_back(lambda, Vec{1.0 - lambda});
    return IfsSystem(1, std::move(maps), true);
}

IfsSystem interval_ifs() {
    std::vector<Similitude> maps;
    maps.emplace_back(0.5, Vec{0.0});
    maps.emplace_back(0.5, Vec{0.5});
    return IfsSystem(1, std::move(maps), true);
}

IfsSystem product_ifs(const IfsSystem& a, const IfsSystem& b) {
    const auto common_ratio = [](const IfsSystem& s, const char* which) {
        const double r = s.maps().front().ratio;
        for (const auto& m : s.maps())
            if (std::abs(m.ratio - r) > 1e-12)
                throw input_error(std::string("product_ifs: ") + which +
                                  " system has mixed contraction ratios");
        return r;
    };
    const double ra = common_ratio(a, "first");
    const double rb = common_ratio(b, "second");
    if (std::abs(ra - rb) > 1e-12)
        throw input_error("product_ifs: contraction ratios of the factors differ");

    const std::size_t n = a.ambient_dim() + b.ambient_dim();
    check_dim(n, "product_ifs");
    std::vector<Similitude> maps;
    maps.reserve(a.maps().size() * b.maps().size());
    for (const auto& ma : a.maps()) {
        for (const auto& mb : b.maps()) {
            Vec t(n);
            std::copy(ma.translation.begin(), ma.translation.end(), t.begin());
            std::copy(mb.translation.begin(), mb.translation.end(),
                      t.begin() + static_cast<std::ptrdiff_t>(a.ambient_dim()));
            maps.emplace_back(ra, std::move(t));
        }
    }
    return IfsSystem(n, std::move(maps), a.declared_osc() && b.declared_osc());
}

IfsSystem corner_carpet_ifs(std::size_t n, int levels) {
    check_dim(n, "corner_carpet_ifs");
    if (levels < 1) throw input_error("corner_carpet_ifs: levels must be >= 1");
    std::vector<Similitude> maps;
    maps.reserve(static_cast<std::size_t>(levels) * ((std::size_t(1) << n) - 1));
    for (int i = 1; i <= levels; ++i) {
        const double r = std::ldexp(1.0, -i);
        for (std::uint32_t v = 1; v < (std::uint32_t(1) << n); ++v) {
            Vec t(n, 0.0);
            for (std::size_t a = 0; a < n; ++a)
                if (v & (std::uint32_t(1) << a)) t[a] = r;
            maps.emplace_back(r, std::move(t));
        }
    }
    return IfsSystem(n, std::move(maps), true);
}

DyadicCubeSet rasterize(const IfsSystem& f, int depth, const RasterOptions& opts) {
    const std::size_t n = f.ambient_dim();
    check_dim(n, "rasterize");
    check_depth(n, depth);

    const double cell = std::ldexp(1.0, -depth);
    const double stop_side = cell / std::sqrt(static_cast<double>(n));
    const double grid = std::ldexp(1.0, depth);
    const std::int64_t grid_max = (std::int64_t(1) << depth) - 1;

    struct Box {
        Vec lo;
        double side;
    };
    std::vector<Box> stack;
    stack.push_back({Vec(n, 0.0), 1.0});

    std::vector<std::uint64_t> marks;
    while (!stack.empty()) {
        Box box = std::move(stack.back());
        stack.pop_back();
        if (box.side <= stop_side) {
            // Mark every cell whose closed cube meets the closed box.
            std::array<std::int64_t, kMaxDim> lo{}, hi{};
            bool empty = false;
            for (std::size_t a = 0; a < n; ++a) {
                lo[a] = std::max<std::int64_t>(
                    0, static_cast<std::int64_t>(std::ceil(box.lo[a] * grid - 1.0)));
                hi[a] = std::min<std::int64_t>(
                    grid_max, static_cast<std::int64_t>(std::floor((box.lo[a] + box.side) * grid)));
                if (lo[a] > hi[a]) empty = true;
            }
            if (empty) continue;
            std::array<std::int64_t, kMaxDim> idx = lo;
            for (;;) {
                std::uint64_t key = 0;
                for (std::size_t a = 0; a < n; ++a)
                    key = (key << depth) | static_cast<std::uint64_t>(idx[a]);
                marks.push_back(key);
                if (marks.size() > opts.max_cells)
                    throw resource_error("rasterize: cell budget exceeded");
                std::size_t a = n;
                while (a-- > 0) {
                    if (++idx[a] <= hi[a]) break;
                    idx[a] = lo[a];
                    if (a == 0) goto done_box;
                }
            }
        done_box:;
            continue;
        }
        for (const auto& m : f.maps()) {
            Box child;
            child.side = box.side * m.ratio;
            child.lo = Vec(n);
            for (std::size_t a = 0; a < n; ++a)
                child.lo[a] = m.ratio * box.lo[a] + m.translation[a];
            stack.push_back(std::move(child));
            if (stack.size() > opts.max_cells)
                throw resource_error("rasterize: work stack budget exceeded");
        }
    }

    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
    return DyadicCubeSet(n, depth, std::move(marks));
}

DyadicCubeSet raster_product(const DyadicCubeSet& a, const DyadicCubeSet& b) {
    if (a.depth() != b.depth()) throw input_error("raster_product: depth mismatch");
    const std::size_t n = a.ambient_dim() + b.ambient_dim();
    check_dim(n, "raster_product");
    check_depth(n, a.depth());
    const std::uint64_t count = static_cast<std::uint64_t>(a.size()) * b.size();
    if (count > (std::uint64_t(1) << 26)) throw resource_error("raster_product: cell budget exceeded");

    const int shift = a.depth() * static_cast<int>(b.ambient_dim());
    std::vector<std::uint64_t> cells;
    cells.reserve(count);
    for (std::uint64_t ka : a.packed_cells())
        for (std::uint64_t kb : b.packed_cells())
            cells.push_back((ka << shift) | kb);
    // a-major concatenation of sorted blocks is already sorted
    return DyadicCubeSet(n, a.depth(), std::move(cells));
}

DyadicCubeSet corner_cylinder(std::size_t n, std::size_t m, int levels, int depth) {
    check_dim(n, "corner_cylinder");
    if (m < 1 || m > n) throw input_error("corner_cylinder: m must lie in [1, n]");
    DyadicCubeSet carpet = rasterize(corner_carpet_ifs(m, levels), depth);
    if (m == n) return carpet;
    return raster_product(carpet, DyadicCubeSet::full_cube(n - m, depth));
}

NaturalMeasure natural_measure(DyadicCubeSet set) {
    return natural_measure(std::make_shared<const DyadicCubeSet>(std::move(set)));
}

NaturalMeasure natural_measure(std::shared_ptr<const DyadicCubeSet> set) {
    if (!set || set->size() == 0) throw input_error("natural_measure: empty set");
    NaturalMeasure mu;
    mu.base = std::move(set);
    mu.weights.assign(mu.base->size(), 1.0 / static_cast<double>(mu.base->size()));
    return mu;
}

void save_set_text(const DyadicCubeSet& set, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw resource_error("save_set_text: cannot open " + path);
    out << "{\n";
    out << "  \"format_version\": 1,\n";
    out << "  \"n\": " << set.ambient_dim() << ",\n";
    out << "  \"depth\": " << set.depth() << ",\n";
    out << "  \"cell_count\": " << set.size() << ",\n";
    out << "  \"cells\": [";
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto t = set.cell(i);
        out << (i == 0 ? "\n" : ",\n") << "    [";
        for (std::size_t a = 0; a < set.ambient_dim(); ++a)
            out << (a == 0 ? "" : ", ") << t[a];
        out << "]";
    }
    out << "\n  ]\n}\n";
    if (!out) throw resource_error("save_set_text: write failed for " + path);
}

void save_set_binary(const DyadicCubeSet& set, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw resource_error("save_set_binary: cannot open " + path);
    out.write("DCS1", 4);
    const std::uint8_t n8 = static_cast<std::uint8_t>(set.ambient_dim());
    const std::uint8_t d8 = static_cast<std::uint8_t>(set.depth());
    out.put(static_cast<char>(n8));
    out.put(static_cast<char>(d8));
    std::uint64_t count = set.size();
    std::uint8_t buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<std::uint8_t>((count >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(buf), 8);
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto t = set.cell(i);
        for (std::size_t a = 0; a < set.ambient_dim(); ++a) {
            const std::uint32_t c = t[a];
            std::uint8_t b4[4] = {static_cast<std::uint8_t>(c & 0xff),
                                  static_cast<std::uint8_t>((c >> 8) & 0xff),
                                  static_cast<std::uint8_t>((c >> 16) & 0xff),
                                  static_cast<std::uint8_t>((c >> 24) & 0xff)};
            out.write(reinterpret_cast<const char*>(b4), 4);
        }
    }
    if (!out) throw resource_error("save_set_binary: write failed for " + path);
}

namespace {

DyadicCubeSet load_set_binary(const std::string& path, std::ifstream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "DCS1", 4) != 0)
        throw parse_error("load_set: bad magic in " + path, 0);
    const int n = in.get();
    const int depth = in.get();
    std::uint8_t buf[8];
    in.read(reinterpret_cast<char*>(buf), 8);
    if (!in) throw parse_error("load_set: truncated header in " + path, 6);
    std::uint64_t count = 0;
    for (int i = 0; i < 8; ++i) count |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    if (n < 1 || n > kMaxDim) throw parse_error("load_set: bad dimension in " + path, 4);
    if (count > (std::uint64_t(1) << 32)) throw parse_error("load_set: implausible cell count", 6);

    std::vector<std::vector<std::uint32_t>> cells;
    cells.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        std::vector<std::uint32_t> t(static_cast<std::size_t>(n));
        for (int a = 0; a < n; ++a) {
            std::uint8_t b4[4];
            in.read(reinterpret_cast<char*>(b4), 4);
            if (!in)
                throw parse_error("load_set: truncated cell data in " + path,
                                  14 + static_cast<std::size_t>(i) * n * 4);
            t[static_cast<std::size_t>(a)] =
                static_cast<std::uint32_t>(b4[0]) | (static_cast<std::uint32_t>(b4[1]) << 8) |
                (static_cast<std::uint32_t>(b4[2]) << 16) | (static_cast<std::uint32_t>(b4[3]) << 24);
        }
        cells.push_back(std::move(t));
    }
    try {
        return DyadicCubeSet::from_tuples(static_cast<std::size_t>(n), depth, std::move(cells));
    } catch (const input_error& e) {
        throw parse_error(std::string("load_set: ") + e.what(), 14);
    }
}

DyadicCubeSet load_set_text(const std::string& path, std::ifstream& in) {
    std::ostringstream all;
    all << in.rdbuf();
    const std::string text = all.str();
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error("load_set: " + std::string(e.what()), e.byte);
    }
    if (!doc.is_object()) throw parse_error("load_set: top level is not an object", 0);
    if (!doc.contains("format_version") || doc["format_version"] != 1)
        throw parse_error("load_set: unsupported format_version in " + path, 0);
    for (const char* key : {"n", "depth", "cell_count", "cells"})
        if (!doc.contains(key))
            throw parse_error(std::string("load_set: missing field '") + key + "'", 0);
    const std::size_t n = doc["n"].get<std::size_t>();
    const int depth = doc["depth"].get<int>();
    std::vector<std::vector<std::uint32_t>> cells;
    cells.reserve(doc["cells"].size());
    for (const auto& row : doc["cells"]) {
        if (!row.is_array()) throw parse_error("load_set: cell entry is not an array", 0);
        cells.push_back(row.get<std::vector<std::uint32_t>>());
    }
    if (cells.size() != doc["cell_count"].get<std::size_t>())
        throw parse_error("load_set: cell_count does not match cells length", 0);
    try {
        return DyadicCubeSet::from_tuples(n, depth, std::move(cells));
    } catch (const input_error& e) {
        throw parse_error(std::string("load_set: ") + e.what(), 0);
    }
}

} // namespace

DyadicCubeSet load_set(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("load_set: cannot open " + path);
    const int first = in.peek();
    if (first == 'D') return load_set_binary(path, in);
    return load_set_text(path, in);
}

} // namespace poro
