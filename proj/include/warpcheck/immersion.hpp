#pragma once

// Submanifold data at a point: adapted orthonormal frame, second fundamental
// form components and the ambient curvature oracle.
//
// Frame layout: columns 0..n1-1 span T_pM_1, n1..n-1 span T_pM_2 and n..N-1
// span the normal space. All components are taken in the oracle's
// orthonormal coordinates, so the ambient inner product is the dot product.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "warpcheck/chart.hpp"
#include "warpcheck/contact.hpp"
#include "warpcheck/random.hpp"
#include "warpcheck/warped.hpp"

namespace warpcheck {

struct PointwiseImmersionData {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::size_t ambient_dim = 0;
  Mat frame;                 // N×N, orthonormal columns
  std::vector<Mat> sigma;    // sigma[r](i, j) = σ^{n+1+r}_{ij}
  CurvatureOracle oracle;
  std::optional<ContactFrame> contact;
  std::optional<Riemann4> intrinsic;  // R(e_a, e_b, e_c, e_d) from a source chart

  std::size_t n() const noexcept { return n1 + n2; }
  std::size_t codim() const noexcept { return ambient_dim - n1 - n2; }
  Vec tangent(std::size_t i) const { return frame.col(i); }
  Vec normal(std::size_t r) const { return frame.col(n() + r); }
  /// σ(e_i, e_j) as a vector of normal components.
  Vec sigma_vec(std::size_t i, std::size_t j) const;
};

/// Throws invalid_configuration on inconsistent shapes, a non-orthonormal
/// frame or a non-symmetric σ.
void validate(const PointwiseImmersionData& data, double tol = 1e-10);

/// ‖σ‖² = Σ_r Σ_ij (σ^r_ij)².
double sigma_norm2(const PointwiseImmersionData& data);

// ------------------------------------------------------------ chart mode

using ChartMap = std::function<Vec(std::span<const double>)>;

struct ChartImmersion {
  std::string name;
  std::size_t source_dim = 0;
  ChartMap map;                              // source chart -> ambient chart
  ChartMetric ambient;
  std::optional<WarpedProductChart> warped;  // source as a warped product
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  Vec lo;  // sampling box in source coordinates
  Vec hi;
};

/// Tangent frame from the pushforward of Gram-Schmidt-orthonormalized
/// coordinate directions, normal frame by completion over ambient coordinate
/// directions, each normal oriented so that trace σ^r >= 0. σ is the normal
/// part of ∂_i∂_j x + Γ̃(∂_i x, ∂_j x). When the source is a warped product
/// its intrinsic curvature is attached for Gauss checks.
PointwiseImmersionData second_fundamental_form(const ChartImmersion& im,
                                               std::span<const double> p, FdSteps steps = {});

/// Δf/f on the first factor at p (chart_geometry Laplacian, geometers' sign).
double chart_laplacian_ratio(const ChartImmersion& im, std::span<const double> p,
                             double step = 1e-4);

// ------------------------------------------------------------ invariants

struct MeanCurvatureRecord {
  Vec H;   // normal components
  Vec H1;
  Vec H2;
  double norm_H = 0.0;
  double norm_H1 = 0.0;
  double norm_H2 = 0.0;
  double additivity_residual = 0.0;  // |nH − n1H1 − n2H2|
};

MeanCurvatureRecord mean_curvatures(const PointwiseImmersionData& data);

enum class IntrinsicSource { chart, gauss };

struct GaussReport {
  double max_gauss = 0.0;     // max |R − R̃ − ⟨σ(X,W),σ(Y,Z)⟩ + ⟨σ(X,Z),σ(Y,W)⟩|
  double max_kij = 0.0;       // per pair sectional version
  double tau_identity = 0.0;  // |2τ − 2τ̃ − n²‖H‖² + ‖σ‖²|
  double tau = 0.0;
  double tau_ambient = 0.0;
  double norm_H2 = 0.0;
  double sigma_norm2 = 0.0;

  double max() const { return std::max({max_gauss, max_kij, tau_identity}); }
};

/// Compares the intrinsic curvature against the Gauss equation on all frame
/// quadruples. IntrinsicSource::chart needs data.intrinsic.
GaussReport gauss_residual(const PointwiseImmersionData& data, IntrinsicSource source);

/// R(e_a, e_b, e_c, e_d) reconstructed from the Gauss equation.
double gauss_curvature(const PointwiseImmersionData& data, std::size_t a, std::size_t b,
                       std::size_t c, std::size_t d);

/// K(e_i ∧ e_j) from the Gauss equation.
double gauss_sectional(const PointwiseImmersionData& data, std::size_t i, std::size_t j);

struct CTotallyRealReport {
  bool value = false;
  double xi_tangential = 0.0;   // max_i |⟨ξ, e_i⟩|
  double phi_tangential = 0.0;  // max_ij |⟨φe_i, e_j⟩|
};

/// Throws invalid_configuration without a contact frame.
CTotallyRealReport is_C_totally_real(const PointwiseImmersionData& data, double tol = 1e-10);

/// Restricted quantities of the tangential part hᵀ and of A_ξ, with
/// block 1 = T_pM_1, block 2 = T_pM_2. Norms are squared Frobenius norms.
struct BlockQuantities {
  double trace = 0.0;
  double trace1 = 0.0;
  double trace2 = 0.0;
  double norm2 = 0.0;
  double norm2_1 = 0.0;
  double norm2_2 = 0.0;
};

struct AXiReport {
  double residual = 0.0;  // max |⟨A_ξ e_i, e_j⟩ − ⟨φh e_i, e_j⟩|
  Mat h_t;                // ⟨h e_i, e_j⟩
  Mat phi_h_t;            // ⟨φh e_i, e_j⟩
  Mat a_xi;               // ⟨σ(e_i, e_j), ξ⟩
  BlockQuantities h;
  BlockQuantities a;
};

AXiReport a_xi_identity(const PointwiseImmersionData& data);

BlockQuantities block_quantities(const Mat& m, std::size_t n1);

/// max |σ^r_jt| over j in block 1, t in block 2.
double mixed_residual(const PointwiseImmersionData& data);
bool is_mixed_totally_geodesic(const PointwiseImmersionData& data, double tol = 1e-10);

// ------------------------------------------------------------ synthetic data

/// Random orthonormal frame and N(0, scale²) symmetric σ.
PointwiseImmersionData random_immersion_data(Rng& rng, std::size_t n1, std::size_t n2,
                                             const Ambient& ambient, double scale = 1.0);

/// Mixed totally geodesic with matching block traces (n1H1 = n2H2).
PointwiseImmersionData equality_immersion_data(Rng& rng, std::size_t n1, std::size_t n2,
                                               const Ambient& ambient, double scale = 1.0);

/// C-totally real frame with ξ as the first normal and σ^ξ = (φh)ᵀ. With
/// `equality` the frame makes (φh)ᵀ diagonal with equal block traces and
/// the remaining σ satisfies the equality constraints. Needs n <= m.
PointwiseImmersionData c_totally_real_data(Rng& rng, std::size_t n1, std::size_t n2,
                                           const Ambient& ambient, bool equality,
                                           double scale = 1.0);

/// Totally geodesic leaf of 𝒟₊ spanned by u_1..u_n (σ = 0).
PointwiseImmersionData dplus_leaf(const Ambient& ambient, std::size_t n1, std::size_t n2);

/// Adds eps to σ^r_jt and σ^r_tj.
void perturb_cross(PointwiseImmersionData& data, std::size_t r, std::size_t j, std::size_t t,
                   double eps);

// ------------------------------------------------------------ catalog

/// Chart keys: "sphere-in-euclidean(n)", "plane", "cylinder".
ChartImmersion immersion_catalog(const std::string& key);

/// "dplus-leaf(m,kappa,mu)": leaf of 𝒟₊ with n1 = 1, n2 = m − 1 in the
/// non-Sasakian (κ, μ) ambient.
struct NamedPointwise {
  Ambient ambient;
  PointwiseImmersionData data;
};
NamedPointwise pointwise_catalog(const std::string& key);

bool is_chart_immersion_key(const std::string& key);
std::vector<std::string> immersion_catalog_keys();

}  // namespace warpcheck
