#include "liylab/fields.hpp"

#include <algorithm>

namespace liylab {

ManifoldGrid::ManifoldGrid(int dim, std::array<int, 2> sizes,
                           std::array<double, 2> periods)
    : dim_(dim), sizes_(sizes), periods_(periods) {
    if (dim != 1 && dim != 2)
        throw std::invalid_argument("ManifoldGrid: dim must be 1 or 2, got " +
                                    std::to_string(dim));
    if (dim == 1) {
        sizes_[1] = 1;
        periods_[1] = periods_[0];
    }
    for (int k = 0; k < dim; ++k) {
        if (sizes_[k] < 8)
            throw std::invalid_argument("ManifoldGrid: size along axis " +
                                        std::to_string(k) + " must be >= 8, got " +
                                        std::to_string(sizes_[k]));
        if (!(periods_[k] > 0.0) || !std::isfinite(periods_[k]))
            throw std::invalid_argument("ManifoldGrid: period along axis " +
                                        std::to_string(k) + " must be positive");
    }
}

void require_same_grid(const ManifoldGrid& a, const ManifoldGrid& b,
                       const char* where) {
    if (a != b)
        throw GridMismatchError(std::string(where) +
                                ": fields are defined on different grids");
}

ScalarField::ScalarField(const ManifoldGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.point_count())
        throw std::invalid_argument(
            "ScalarField: value count does not match grid point count");
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double ScalarField::min() const {
    double m = values_.empty() ? 0.0 : values_[0];
    for (double v : values_) m = std::min(m, v);
    return m;
}

double ScalarField::max() const {
    double m = values_.empty() ? 0.0 : values_[0];
    for (double v : values_) m = std::max(m, v);
    return m;
}

bool ScalarField::all_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

double TensorField::max_abs() const {
    double m = 0.0;
    for (int c = 0; c < ncomp(); ++c)
        for (double v : comps_[c]) m = std::max(m, std::abs(v));
    return m;
}

MetricField::MetricField(ScalarField phi) : phi_(std::move(phi)) {
    if (!phi_.all_finite())
        throw DataError("MetricField: conformal exponent must be finite");
    const std::size_t n = phi_.size();
    conf_.resize(n);
    inv_conf_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        conf_[i] = std::exp(2.0 * phi_[i]);
        inv_conf_[i] = std::exp(-2.0 * phi_[i]);
    }
}

}  // namespace liylab
