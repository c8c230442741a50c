#include "liylab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace liylab {

namespace {

inline int up(int i, int n) { return i + 1 < n ? i + 1 : 0; }
inline int dn(int i, int n) { return i > 0 ? i - 1 : n - 1; }

void check_input(const MetricField& m, const ScalarField& f, const char* where) {
    require_same_grid(m.grid(), f.grid(), where);
    if (!f.all_finite())
        throw DataError(std::string(where) + ": non-finite input field");
}

void check_tensor(const MetricField& m, const TensorField& h, const char* where) {
    require_same_grid(m.grid(), h.grid(), where);
    for (int c = 0; c < h.ncomp(); ++c)
        for (double v : h.comp(c))
            if (!std::isfinite(v))
                throw DataError(std::string(where) + ": non-finite tensor input");
}

}  // namespace

// ---------------------------------------------------------------------------
// Flat stencils
// ---------------------------------------------------------------------------

ScalarField flat_laplacian(const ScalarField& f) {
    const ManifoldGrid& g = f.grid();
    ScalarField out(g);
    const int nx = g.nx();
    const double ihx2 = 1.0 / (g.spacing(0) * g.spacing(0));
    if (g.dim() == 1) {
        for (int i = 0; i < nx; ++i)
            out[i] = (f[up(i, nx)] - 2.0 * f[i] + f[dn(i, nx)]) * ihx2;
        return out;
    }
    const int ny = g.ny();
    const double ihy2 = 1.0 / (g.spacing(1) * g.spacing(1));
    for (int iy = 0; iy < ny; ++iy) {
        const std::size_t r = static_cast<std::size_t>(iy) * nx;
        const std::size_t rp = static_cast<std::size_t>(up(iy, ny)) * nx;
        const std::size_t rm = static_cast<std::size_t>(dn(iy, ny)) * nx;
        for (int ix = 0; ix < nx; ++ix) {
            const double c = f[r + ix];
            out[r + ix] = (f[r + up(ix, nx)] - 2.0 * c + f[r + dn(ix, nx)]) * ihx2 +
                          (f[rp + ix] - 2.0 * c + f[rm + ix]) * ihy2;
        }
    }
    return out;
}

VectorField flat_gradient(const ScalarField& f) {
    const ManifoldGrid& g = f.grid();
    VectorField out(g);
    const int nx = g.nx();
    const double i2hx = 0.5 / g.spacing(0);
    if (g.dim() == 1) {
        for (int i = 0; i < nx; ++i)
            out.comp(0)[i] = (f[up(i, nx)] - f[dn(i, nx)]) * i2hx;
        return out;
    }
    const int ny = g.ny();
    const double i2hy = 0.5 / g.spacing(1);
    for (int iy = 0; iy < ny; ++iy) {
        const std::size_t r = static_cast<std::size_t>(iy) * nx;
        const std::size_t rp = static_cast<std::size_t>(up(iy, ny)) * nx;
        const std::size_t rm = static_cast<std::size_t>(dn(iy, ny)) * nx;
        for (int ix = 0; ix < nx; ++ix) {
            out.comp(0)[r + ix] = (f[r + up(ix, nx)] - f[r + dn(ix, nx)]) * i2hx;
            out.comp(1)[r + ix] = (f[rp + ix] - f[rm + ix]) * i2hy;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Metric operators
// ---------------------------------------------------------------------------

ScalarField laplace_beltrami(const MetricField& m, const ScalarField& f) {
    check_input(m, f, "laplace_beltrami");
    const ManifoldGrid& g = f.grid();
    const auto& inv = m.inv_conf();
    ScalarField out(g);
    const int nx = g.nx();
    const double ihx2 = 1.0 / (g.spacing(0) * g.spacing(0));
    const double i2hx = 0.5 / g.spacing(0);
    if (g.dim() == 1) {
        const ScalarField& phi = m.phi();
        for (int i = 0; i < nx; ++i) {
            const double fxx = (f[up(i, nx)] - 2.0 * f[i] + f[dn(i, nx)]) * ihx2;
            const double fx = (f[up(i, nx)] - f[dn(i, nx)]) * i2hx;
            const double px = (phi[up(i, nx)] - phi[dn(i, nx)]) * i2hx;
            out[i] = inv[i] * (fxx - px * fx);
        }
        return out;
    }
    const int ny = g.ny();
    const double ihy2 = 1.0 / (g.spacing(1) * g.spacing(1));
    for (int iy = 0; iy < ny; ++iy) {
        const std::size_t r = static_cast<std::size_t>(iy) * nx;
        const std::size_t rp = static_cast<std::size_t>(up(iy, ny)) * nx;
        const std::size_t rm = static_cast<std::size_t>(dn(iy, ny)) * nx;
        for (int ix = 0; ix < nx; ++ix) {
            const double c = f[r + ix];
            const double l0 =
                (f[r + up(ix, nx)] - 2.0 * c + f[r + dn(ix, nx)]) * ihx2 +
                (f[rp + ix] - 2.0 * c + f[rm + ix]) * ihy2;
            out[r + ix] = inv[r + ix] * l0;
        }
    }
    return out;
}

VectorField gradient(const MetricField& m, const ScalarField& f) {
    check_input(m, f, "gradient");
    VectorField out = flat_gradient(f);
    const auto& inv = m.inv_conf();
    for (int c = 0; c < out.ncomp(); ++c) {
        auto& v = out.comp(c);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] *= inv[i];
    }
    return out;
}

ScalarField grad_norm_sq(const MetricField& m, const ScalarField& f) {
    check_input(m, f, "grad_norm_sq");
    const VectorField df = flat_gradient(f);
    const auto& inv = m.inv_conf();
    ScalarField out(f.grid());
    if (f.grid().dim() == 1) {
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = inv[i] * df.comp(0)[i] * df.comp(0)[i];
    } else {
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = inv[i] * (df.comp(0)[i] * df.comp(0)[i] +
                               df.comp(1)[i] * df.comp(1)[i]);
    }
    return out;
}

TensorField hessian(const MetricField& m, const ScalarField& f) {
    check_input(m, f, "hessian");
    const ManifoldGrid& g = f.grid();
    const ScalarField& phi = m.phi();
    TensorField out(g);
    const int nx = g.nx();
    const double hx = g.spacing(0);
    const double ihx2 = 1.0 / (hx * hx);
    const double i2hx = 0.5 / hx;
    if (g.dim() == 1) {
        for (int i = 0; i < nx; ++i) {
            const double fxx = (f[up(i, nx)] - 2.0 * f[i] + f[dn(i, nx)]) * ihx2;
            const double fx = (f[up(i, nx)] - f[dn(i, nx)]) * i2hx;
            const double px = (phi[up(i, nx)] - phi[dn(i, nx)]) * i2hx;
            out.comp(TensorField::XX)[i] = fxx - px * fx;
        }
        return out;
    }
    const int ny = g.ny();
    const double hy = g.spacing(1);
    const double ihy2 = 1.0 / (hy * hy);
    const double i2hy = 0.5 / hy;
    const double i4hxy = 1.0 / (4.0 * hx * hy);
    for (int iy = 0; iy < ny; ++iy) {
        const std::size_t r = static_cast<std::size_t>(iy) * nx;
        const std::size_t rp = static_cast<std::size_t>(up(iy, ny)) * nx;
        const std::size_t rm = static_cast<std::size_t>(dn(iy, ny)) * nx;
        for (int ix = 0; ix < nx; ++ix) {
            const int xp = up(ix, nx), xm = dn(ix, nx);
            const std::size_t p = r + ix;
            const double c = f[p];
            const double fxx0 = (f[r + xp] - 2.0 * c + f[r + xm]) * ihx2;
            const double fyy0 = (f[rp + ix] - 2.0 * c + f[rm + ix]) * ihy2;
            const double fxy0 =
                (f[rp + xp] - f[rp + xm] - f[rm + xp] + f[rm + xm]) * i4hxy;
            const double fx = (f[r + xp] - f[r + xm]) * i2hx;
            const double fy = (f[rp + ix] - f[rm + ix]) * i2hy;
            const double px = (phi[r + xp] - phi[r + xm]) * i2hx;
            const double py = (phi[rp + ix] - phi[rm + ix]) * i2hy;
            out.comp(TensorField::XX)[p] = fxx0 - px * fx + py * fy;
            out.comp(TensorField::XY)[p] = fxy0 - py * fx - px * fy;
            out.comp(TensorField::YY)[p] = fyy0 + px * fx - py * fy;
        }
    }
    return out;
}

ScalarField gauss_curvature(const MetricField& m) {
    const ManifoldGrid& g = m.grid();
    if (g.dim() == 1) return ScalarField(g, 0.0);
    ScalarField k = flat_laplacian(m.phi());
    const auto& inv = m.inv_conf();
    for (std::size_t i = 0; i < k.size(); ++i) k[i] = -inv[i] * k[i];
    return k;
}

TensorField ricci(const MetricField& m) {
    const ManifoldGrid& g = m.grid();
    TensorField out(g);
    if (g.dim() == 1) return out;  // 1-D manifolds are Ricci-flat
    const ScalarField k = gauss_curvature(m);
    const auto& conf = m.conf();
    for (std::size_t i = 0; i < k.size(); ++i) {
        const double kg = k[i] * conf[i];
        out.comp(TensorField::XX)[i] = kg;
        out.comp(TensorField::YY)[i] = kg;
    }
    return out;
}

VectorField div_tensor(const MetricField& m, const TensorField& h) {
    check_tensor(m, h, "div_tensor");
    const ManifoldGrid& g = h.grid();
    const ScalarField& phi = m.phi();
    const auto& inv = m.inv_conf();
    VectorField out(g);
    const int nx = g.nx();
    const double i2hx = 0.5 / g.spacing(0);
    if (g.dim() == 1) {
        const auto& hxx = h.comp(TensorField::XX);
        for (int i = 0; i < nx; ++i) {
            const double dh = (hxx[up(i, nx)] - hxx[dn(i, nx)]) * i2hx;
            const double px = (phi[up(i, nx)] - phi[dn(i, nx)]) * i2hx;
            out.comp(0)[i] = inv[i] * (dh - 2.0 * px * hxx[i]);
        }
        return out;
    }
    const int ny = g.ny();
    const double i2hy = 0.5 / g.spacing(1);
    const auto& hxx = h.comp(TensorField::XX);
    const auto& hxy = h.comp(TensorField::XY);
    const auto& hyy = h.comp(TensorField::YY);
    for (int iy = 0; iy < ny; ++iy) {
        const std::size_t r = static_cast<std::size_t>(iy) * nx;
        const std::size_t rp = static_cast<std::size_t>(up(iy, ny)) * nx;
        const std::size_t rm = static_cast<std::size_t>(dn(iy, ny)) * nx;
        for (int ix = 0; ix < nx; ++ix) {
            const int xp = up(ix, nx), xm = dn(ix, nx);
            const std::size_t p = r + ix;
            const double px = (phi[r + xp] - phi[r + xm]) * i2hx;
            const double py = (phi[rp + ix] - phi[rm + ix]) * i2hy;
            const double tr = hxx[p] + hyy[p];
            const double dxx_x = (hxx[r + xp] - hxx[r + xm]) * i2hx;
            const double dxy_y = (hxy[rp + ix] - hxy[rm + ix]) * i2hy;
            const double dxy_x = (hxy[r + xp] - hxy[r + xm]) * i2hx;
            const double dyy_y = (hyy[rp + ix] - hyy[rm + ix]) * i2hy;
            out.comp(0)[p] = inv[p] * (dxx_x + dxy_y - px * tr);
            out.comp(1)[p] = inv[p] * (dxy_x + dyy_y - py * tr);
        }
    }
    return out;
}

ScalarField trace(const MetricField& m, const TensorField& h) {
    check_tensor(m, h, "trace");
    const auto& inv = m.inv_conf();
    ScalarField out(h.grid());
    if (h.grid().dim() == 1) {
        const auto& hxx = h.comp(TensorField::XX);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = inv[i] * hxx[i];
    } else {
        const auto& hxx = h.comp(TensorField::XX);
        const auto& hyy = h.comp(TensorField::YY);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = inv[i] * (hxx[i] + hyy[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Contractions
// ---------------------------------------------------------------------------

ScalarField tensor_norm_sq(const MetricField& m, const TensorField& t) {
    return tensor_dot(m, t, t);
}

ScalarField tensor_dot(const MetricField& m, const TensorField& a,
                       const TensorField& b) {
    require_same_grid(a.grid(), b.grid(), "tensor_dot");
    require_same_grid(m.grid(), a.grid(), "tensor_dot");
    const auto& inv = m.inv_conf();
    ScalarField out(a.grid());
    if (a.grid().dim() == 1) {
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = inv[i] * inv[i] * a.comp(0)[i] * b.comp(0)[i];
    } else {
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = inv[i] * inv[i] *
                     (a.comp(TensorField::XX)[i] * b.comp(TensorField::XX)[i] +
                      2.0 * a.comp(TensorField::XY)[i] * b.comp(TensorField::XY)[i] +
                      a.comp(TensorField::YY)[i] * b.comp(TensorField::YY)[i]);
    }
    return out;
}

ScalarField tensor_apply(const TensorField& h, const VectorField& v) {
    require_same_grid(h.grid(), v.grid(), "tensor_apply");
    ScalarField out(h.grid());
    if (h.grid().dim() == 1) {
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = h.comp(0)[i] * v.comp(0)[i] * v.comp(0)[i];
    } else {
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double vx = v.comp(0)[i], vy = v.comp(1)[i];
            out[i] = h.comp(TensorField::XX)[i] * vx * vx +
                     2.0 * h.comp(TensorField::XY)[i] * vx * vy +
                     h.comp(TensorField::YY)[i] * vy * vy;
        }
    }
    return out;
}

ScalarField form_dot(const VectorField& w, const VectorField& v) {
    require_same_grid(w.grid(), v.grid(), "form_dot");
    ScalarField out(w.grid());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double s = w.comp(0)[i] * v.comp(0)[i];
        if (w.ncomp() == 2) s += w.comp(1)[i] * v.comp(1)[i];
        out[i] = s;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Covariant derivative of a symmetric 2-tensor
// ---------------------------------------------------------------------------

std::vector<TensorField> covariant_derivative(const MetricField& m,
                                              const TensorField& h) {
    check_tensor(m, h, "covariant_derivative");
    const ManifoldGrid& g = h.grid();
    const int d = g.dim();
    const VectorField dphi = flat_gradient(m.phi());
    std::vector<TensorField> out(d, TensorField(g));

    // per-component flat derivatives
    std::vector<VectorField> dh;
    dh.reserve(h.ncomp());
    for (int c = 0; c < h.ncomp(); ++c)
        dh.push_back(flat_gradient(ScalarField(g, h.comp(c))));

    const std::size_t n = g.point_count();
    for (std::size_t p = 0; p < n; ++p) {
        double ph[2] = {dphi.comp(0)[p], d == 2 ? dphi.comp(1)[p] : 0.0};
        // Gamma^l_ij = d^l_i ph_j + d^l_j ph_i - d_ij ph_l
        auto gamma = [&](int l, int i, int j) {
            double s = 0.0;
            if (l == i) s += ph[j];
            if (l == j) s += ph[i];
            if (i == j) s -= ph[l];
            return s;
        };
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                for (int k = j; k < d; ++k) {
                    const int c = (d == 1) ? 0 : j + k;
                    double v = dh[c].comp(i)[p];
                    for (int l = 0; l < d; ++l) {
                        v -= gamma(l, i, j) * h.entry(p, l, k);
                        v -= gamma(l, i, k) * h.entry(p, j, l);
                    }
                    out[i].comp(c)[p] = v;
                }
            }
        }
    }
    return out;
}

ScalarField tensor_grad_norm_sq(const MetricField& m, const TensorField& h) {
    const std::vector<TensorField> nh = covariant_derivative(m, h);
    const auto& inv = m.inv_conf();
    ScalarField out(h.grid());
    const int d = h.grid().dim();
    for (std::size_t p = 0; p < out.size(); ++p) {
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
            if (d == 1) {
                s += nh[i].comp(0)[p] * nh[i].comp(0)[p];
            } else {
                const double axx = nh[i].comp(TensorField::XX)[p];
                const double axy = nh[i].comp(TensorField::XY)[p];
                const double ayy = nh[i].comp(TensorField::YY)[p];
                s += axx * axx + 2.0 * axy * axy + ayy * ayy;
            }
        }
        const double w = inv[p] * inv[p] * inv[p];
        out[p] = w * s;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Geodesic distance
// ---------------------------------------------------------------------------

namespace {

GeodesicPath circle_path(const MetricField& m, int i1, int i2) {
    const ManifoldGrid& g = m.grid();
    const int n = g.nx();
    const double h = g.spacing(0);
    const ScalarField& phi = m.phi();
    auto arc = [&](int from, int to, int step) {
        GeodesicPath p;
        double len = 0.0;
        int i = from;
        p.points.push_back({i, 0});
        while (i != to) {
            const int j = ManifoldGrid::wrap(i + step, n);
            len += 0.5 * h * (std::exp(phi[i]) + std::exp(phi[j]));
            p.points.push_back({j, 0});
            i = j;
        }
        p.length = len;
        return p;
    };
    if (i1 == i2) return GeodesicPath{{{i1, 0}}, 0.0};
    GeodesicPath right = arc(i1, i2, +1);
    GeodesicPath left = arc(i1, i2, -1);
    return right.length <= left.length ? right : left;
}

GeodesicPath dijkstra_path(const MetricField& m, GridPoint a, GridPoint b) {
    const ManifoldGrid& g = m.grid();
    const int nx = g.nx();
    const double hx = g.spacing(0), hy = g.spacing(1);
    const ScalarField& phi = m.phi();
    const std::size_t n = g.point_count();
    const std::size_t src = g.index(a.ix, a.iy);
    const std::size_t dst = g.index(b.ix, b.iy);

    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<std::int64_t> prev(n, -1);
    using QE = std::pair<double, std::size_t>;
    std::priority_queue<QE, std::vector<QE>, std::greater<QE>> q;
    dist[src] = 0.0;
    q.push({0.0, src});

    const int steps[8][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                             {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};
    while (!q.empty()) {
        auto [dcur, p] = q.top();
        q.pop();
        if (dcur > dist[p]) continue;
        if (p == dst) break;
        const int ix = static_cast<int>(p % nx);
        const int iy = static_cast<int>(p / nx);
        for (const auto& s : steps) {
            const std::size_t np = g.index(ix + s[0], iy + s[1]);
            const double flat = std::sqrt(s[0] * s[0] * hx * hx +
                                          s[1] * s[1] * hy * hy);
            const double w = flat * std::exp(0.5 * (phi[p] + phi[np]));
            if (dist[p] + w < dist[np]) {
                dist[np] = dist[p] + w;
                prev[np] = static_cast<std::int64_t>(p);
                q.push({dist[np], np});
            }
        }
    }
    GeodesicPath path;
    path.length = dist[dst];
    std::size_t cur = dst;
    while (true) {
        path.points.push_back(g.point(cur));
        if (cur == src) break;
        cur = static_cast<std::size_t>(prev[cur]);
    }
    std::reverse(path.points.begin(), path.points.end());
    return path;
}

}  // namespace

GeodesicPath geodesic_path(const MetricField& m, GridPoint x1, GridPoint x2) {
    const ManifoldGrid& g = m.grid();
    x1 = {ManifoldGrid::wrap(x1.ix, g.nx()),
          g.dim() == 2 ? ManifoldGrid::wrap(x1.iy, g.ny()) : 0};
    x2 = {ManifoldGrid::wrap(x2.ix, g.nx()),
          g.dim() == 2 ? ManifoldGrid::wrap(x2.iy, g.ny()) : 0};
    if (g.dim() == 1) return circle_path(m, x1.ix, x2.ix);
    return dijkstra_path(m, x1, x2);
}

double geodesic_distance(const MetricField& m, GridPoint x1, GridPoint x2) {
    return geodesic_path(m, x1, x2).length;
}

}  // namespace liylab
