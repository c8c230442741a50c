#ifndef LIYLAB_FIELDS_HPP
#define LIYLAB_FIELDS_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace liylab {

// ---------------------------------------------------------------------------
// Error types
// ---------------------------------------------------------------------------

/// Two fields that must live on the same grid do not.
struct GridMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Non-finite values where finite ones are required.
struct DataError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A tensor outside the conformal family was handed to a conformal-only op.
struct UnsupportedTensorError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Time stepping produced NaN/Inf; carries the first offending point.
struct BlowupError : std::runtime_error {
    double t;
    int ix, iy;
    BlowupError(const std::string& what, double t_, int ix_, int iy_)
        : std::runtime_error(what), t(t_), ix(ix_), iy(iy_) {}
};

// ---------------------------------------------------------------------------
// Grid
// ---------------------------------------------------------------------------

struct GridPoint {
    int ix = 0;
    int iy = 0;
    bool operator==(const GridPoint& o) const { return ix == o.ix && iy == o.iy; }
};

/// Periodic structured grid on S^1 (dim 1) or T^2 (dim 2).
/// Points along axis k sit at i * spacing(k), i = 0..size-1, with wraparound.
class ManifoldGrid {
  public:
    ManifoldGrid() = default;
    ManifoldGrid(int dim, std::array<int, 2> sizes,
                 std::array<double, 2> periods = {1.0, 1.0});

    static ManifoldGrid circle(int n, double period = 1.0) {
        return ManifoldGrid(1, {n, 1}, {period, period});
    }
    static ManifoldGrid torus(int nx, int ny, double lx = 1.0, double ly = 1.0) {
        return ManifoldGrid(2, {nx, ny}, {lx, ly});
    }

    int dim() const { return dim_; }
    int nx() const { return sizes_[0]; }
    int ny() const { return sizes_[1]; }
    int size(int axis) const { return sizes_[axis]; }
    double period(int axis) const { return periods_[axis]; }
    double spacing(int axis) const { return periods_[axis] / sizes_[axis]; }
    double min_spacing() const {
        return dim_ == 1 ? spacing(0) : std::min(spacing(0), spacing(1));
    }
    std::size_t point_count() const {
        return static_cast<std::size_t>(sizes_[0]) * (dim_ == 2 ? sizes_[1] : 1);
    }
    double coord(int axis, int i) const { return spacing(axis) * i; }

    /// Linear index, row-major with x fastest. Inputs need not be wrapped.
    std::size_t index(int ix, int iy = 0) const {
        ix = wrap(ix, sizes_[0]);
        iy = dim_ == 2 ? wrap(iy, sizes_[1]) : 0;
        return static_cast<std::size_t>(iy) * sizes_[0] + ix;
    }
    GridPoint point(std::size_t linear) const {
        return {static_cast<int>(linear % sizes_[0]),
                static_cast<int>(linear / sizes_[0])};
    }

    bool operator==(const ManifoldGrid& o) const {
        return dim_ == o.dim_ && sizes_ == o.sizes_ && periods_ == o.periods_;
    }
    bool operator!=(const ManifoldGrid& o) const { return !(*this == o); }

    static int wrap(int i, int n) {
        i %= n;
        return i < 0 ? i + n : i;
    }

  private:
    int dim_ = 1;
    std::array<int, 2> sizes_{8, 1};
    std::array<double, 2> periods_{1.0, 1.0};
};

void require_same_grid(const ManifoldGrid& a, const ManifoldGrid& b,
                       const char* where);

// ---------------------------------------------------------------------------
// Fields
// ---------------------------------------------------------------------------

/// Grid-sampled real function.
class ScalarField {
  public:
    ScalarField() = default;
    explicit ScalarField(const ManifoldGrid& grid, double fill = 0.0)
        : grid_(grid), values_(grid.point_count(), fill) {}
    ScalarField(const ManifoldGrid& grid, std::vector<double> values);

    const ManifoldGrid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    double at(int ix, int iy = 0) const { return values_[grid_.index(ix, iy)]; }
    double& at(int ix, int iy = 0) { return values_[grid_.index(ix, iy)]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    double max_abs() const;
    double min() const;
    double max() const;
    bool all_finite() const;

  private:
    ManifoldGrid grid_;
    std::vector<double> values_;
};

/// Rank-1 field (d components per point). Whether components are covariant
/// or contravariant is a convention of the producing operation.
class VectorField {
  public:
    VectorField() = default;
    explicit VectorField(const ManifoldGrid& grid)
        : grid_(grid) {
        comps_[0].assign(grid.point_count(), 0.0);
        if (grid.dim() == 2) comps_[1].assign(grid.point_count(), 0.0);
    }

    const ManifoldGrid& grid() const { return grid_; }
    int ncomp() const { return grid_.dim(); }
    const std::vector<double>& comp(int c) const { return comps_[c]; }
    std::vector<double>& comp(int c) { return comps_[c]; }

  private:
    ManifoldGrid grid_;
    std::array<std::vector<double>, 2> comps_;
};

/// Symmetric rank-2 tensor field; upper triangle storage so symmetry is
/// structural. Component order: 1-D {xx}; 2-D {xx, xy, yy}.
class TensorField {
  public:
    enum Comp { XX = 0, XY = 1, YY = 2 };

    TensorField() = default;
    explicit TensorField(const ManifoldGrid& grid)
        : grid_(grid) {
        comps_[XX].assign(grid.point_count(), 0.0);
        if (grid.dim() == 2) {
            comps_[XY].assign(grid.point_count(), 0.0);
            comps_[YY].assign(grid.point_count(), 0.0);
        }
    }

    const ManifoldGrid& grid() const { return grid_; }
    int ncomp() const { return grid_.dim() == 1 ? 1 : 3; }
    const std::vector<double>& comp(int c) const { return comps_[c]; }
    std::vector<double>& comp(int c) { return comps_[c]; }

    /// Component (i,j) at a linear point index, i,j in {0,..,dim-1}.
    double entry(std::size_t p, int i, int j) const {
        if (grid_.dim() == 1) return comps_[XX][p];
        return comps_[i + j][p];  // (0,0)->0, (0,1)/(1,0)->1, (1,1)->2
    }

    double max_abs() const;

  private:
    ManifoldGrid grid_;
    std::array<std::vector<double>, 3> comps_;
};

/// Conformal metric g = e^{2 phi} * (flat metric). Caches e^{±2 phi}.
class MetricField {
  public:
    MetricField() = default;
    explicit MetricField(ScalarField phi);
    static MetricField flat(const ManifoldGrid& grid) {
        return MetricField(ScalarField(grid, 0.0));
    }

    const ManifoldGrid& grid() const { return phi_.grid(); }
    const ScalarField& phi() const { return phi_; }
    /// e^{2 phi} (metric coefficient); positive by construction.
    const std::vector<double>& conf() const { return conf_; }
    /// e^{-2 phi} (inverse-metric coefficient).
    const std::vector<double>& inv_conf() const { return inv_conf_; }

  private:
    ScalarField phi_;
    std::vector<double> conf_, inv_conf_;
};

}  // namespace liylab

#endif
