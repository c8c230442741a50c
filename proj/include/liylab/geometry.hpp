#ifndef LIYLAB_GEOMETRY_HPP
#define LIYLAB_GEOMETRY_HPP

#include <vector>

#include "liylab/fields.hpp"

namespace liylab {

// Discrete differential geometry on periodic conformal metrics.
// All derivatives are second-order central differences with periodic
// wraparound; curvature quantities use the closed conformal forms.

// --- flat (metric-independent) building blocks ---

/// Flat Laplacian: sum of second central differences.
ScalarField flat_laplacian(const ScalarField& f);
/// Covariant components of df: plain central differences per axis.
VectorField flat_gradient(const ScalarField& f);

// --- metric operators ---

/// Laplace-Beltrami: e^{-2 phi} (lap0 f + (d-2) <grad0 phi, grad0 f>).
ScalarField laplace_beltrami(const MetricField& m, const ScalarField& f);

/// Contravariant gradient components g^{ij} d_j f = e^{-2 phi} d_i f.
VectorField gradient(const MetricField& m, const ScalarField& f);

/// |grad f|^2_g = e^{-2 phi} sum_i (d_i f)^2. Nonnegative by construction.
ScalarField grad_norm_sq(const MetricField& m, const ScalarField& f);

/// Covariant Hessian f_ij = d_i d_j f - Gamma^k_ij d_k f with conformal
/// Christoffels Gamma^k_ij = d^k_i phi_j + d^k_j phi_i - d_ij phi_k.
TensorField hessian(const MetricField& m, const ScalarField& f);

/// Gaussian curvature K = -e^{-2 phi} lap0 phi (zero in 1-D).
ScalarField gauss_curvature(const MetricField& m);

/// Ricci tensor: K * g on surfaces, zero tensor in 1-D.
TensorField ricci(const MetricField& m);

/// (div h)_k = g^{ij} nabla_i h_{jk}; covariant (lower-index) components.
VectorField div_tensor(const MetricField& m, const TensorField& h);

/// H = g^{ij} h_ij = e^{-2 phi} sum_i h_ii.
ScalarField trace(const MetricField& m, const TensorField& h);

// --- pointwise contractions (metric raises indices) ---

/// |T|^2_g = g^{ik} g^{jl} T_ij T_kl = e^{-4 phi}(T_xx^2 + 2 T_xy^2 + T_yy^2).
ScalarField tensor_norm_sq(const MetricField& m, const TensorField& t);
/// A^{ij} B_ij = e^{-4 phi}(A_xx B_xx + 2 A_xy B_xy + A_yy B_yy).
ScalarField tensor_dot(const MetricField& m, const TensorField& a,
                       const TensorField& b);
/// h(v, v) = h_ij v^i v^j for contravariant v (no metric factor).
ScalarField tensor_apply(const TensorField& h, const VectorField& v_contra);
/// <w, v> = sum_i w_i v^i for a covariant form w and contravariant v.
ScalarField form_dot(const VectorField& w_cov, const VectorField& v_contra);

/// Full covariant derivative nabla_i h_jk; components indexed
/// [i][packed(j,k)] with the TensorField packing per direction i.
std::vector<TensorField> covariant_derivative(const MetricField& m,
                                              const TensorField& h);
/// |nabla h|^2_g = e^{-6 phi} sum_{i,j,k} (nabla_i h_jk)^2.
ScalarField tensor_grad_norm_sq(const MetricField& m, const TensorField& h);

// --- geodesic distance ---

struct GeodesicPath {
    std::vector<GridPoint> points;  // from x1 to x2 inclusive
    double length = 0.0;
};

/// Shortest path between grid points. 1-D: the shorter of the two arcs,
/// trapezoid quadrature of e^{phi}. 2-D: Dijkstra on the 8-neighbour graph,
/// edge weight = flat segment length * exp(mean of endpoint phi). The graph
/// metric over-approximates flat distances by at most sec(pi/8)-1 ~ 8.3%.
GeodesicPath geodesic_path(const MetricField& m, GridPoint x1, GridPoint x2);
double geodesic_distance(const MetricField& m, GridPoint x1, GridPoint x2);

}  // namespace liylab

#endif
