#pragma once

// Pointwise contact-metric algebra and closed-form ambient curvature models.
// All frames are orthonormal, so the ambient metric is the identity and
// adjointness is plain matrix transposition.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "warpcheck/numeric.hpp"
#include "warpcheck/random.hpp"

namespace warpcheck {

/// Structure tensors (φ, ξ, η, h) of a (κ, μ) contact metric structure at a
/// point, in an orthonormal frame of the (2m+1)-dimensional tangent space.
struct ContactFrame {
  std::size_t m = 1;
  Mat phi;
  Vec xi;
  Vec eta;
  Mat h;
  double kappa = 1.0;
  double mu = 0.0;
  std::optional<double> c;

  std::size_t dim() const noexcept { return 2 * m + 1; }
  double lambda() const { return std::sqrt(std::max(0.0, 1.0 - kappa)); }
  bool sasakian(double tol = 1e-12) const { return max_abs(h) <= tol; }
};

/// One residual per structure identity; all zero for a valid frame.
struct FrameResiduals {
  double phi_squared = 0.0;       // φ² + I − ξ⊗η
  double eta_xi = 0.0;            // η(ξ) − 1
  double phi_xi = 0.0;            // φξ
  double eta_phi = 0.0;           // η∘φ
  double metric_compatible = 0.0; // φᵀφ + η⊗η − I
  double phi_skew = 0.0;          // φ + φᵀ
  double xi_dual = 0.0;           // <X, ξ> − η(X)
  double h_symmetric = 0.0;
  double h_xi = 0.0;
  double h_phi_anticommute = 0.0;
  double trace_h = 0.0;
  double trace_phi_h = 0.0;
  double h_squared = 0.0;         // h² − (κ−1)φ²
  double kappa_excess = 0.0;      // max(0, κ − 1)

  double max() const;
};

FrameResiduals frame_residuals(const ContactFrame& frame);
/// Throws invalid_frame when any residual exceeds tol.
void validate_frame(const ContactFrame& frame, double tol = 1e-10);

/// Canonical frame {ξ, u_1..u_m, φu_1..φu_m} with h u_i = λu_i,
/// h φu_i = −λφu_i, λ = √(1−κ). κ = 1 yields the Sasakian frame (h = 0).
ContactFrame make_kmu_frame(std::size_t m, double kappa, double mu);

/// Index of u_i / φu_i in the canonical frame.
inline std::size_t dplus_index(std::size_t i) { return 1 + i; }
inline std::size_t dminus_index(std::size_t m, std::size_t i) { return 1 + m + i; }

enum class OracleKind { kmu_space_form, sasakian_space_form, non_sasakian_kmu, chart_numeric, real_space_form };

std::string_view to_string(OracleKind kind);

/// Ambient (0,4) curvature R̃(X, Y, Z, W) evaluated on frame components.
class CurvatureOracle {
 public:
  using Fn = std::function<double(const Vec&, const Vec&, const Vec&, const Vec&)>;

  CurvatureOracle() = default;
  CurvatureOracle(OracleKind kind, std::size_t dim, Fn fn, std::string label)
      : kind_(kind), dim_(dim), fn_(std::move(fn)), label_(std::move(label)) {}

  double operator()(const Vec& X, const Vec& Y, const Vec& Z, const Vec& W) const {
    return fn_(X, Y, Z, W);
  }
  /// K̃(X∧Y); X and Y need not be orthonormal.
  double sectional(const Vec& X, const Vec& Y) const;

  OracleKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  const std::string& label() const noexcept { return label_; }
  explicit operator bool() const noexcept { return static_cast<bool>(fn_); }

 private:
  OracleKind kind_ = OracleKind::real_space_form;
  std::size_t dim_ = 0;
  Fn fn_;
  std::string label_;
};

/// c(<Y,Z><X,W> − <X,Z><Y,W>).
CurvatureOracle real_space_form(std::size_t dim, double c);

/// Curvature of a (κ, μ)-space form of constant φ-sectional curvature c.
CurvatureOracle curvature_kmu_space_form(const ContactFrame& frame, double c);

/// Sasakian space form; requires h = 0.
CurvatureOracle curvature_sasakian_space_form(const ContactFrame& frame, double c);

/// Non-Sasakian (κ, μ)-manifold; refuses κ > 1 − 1e-8.
CurvatureOracle curvature_non_sasakian(const ContactFrame& frame);

/// max over basis pairs of |R̃(X,Y)ξ − (κI + μh)(η(Y)X − η(X)Y)|. The
/// expression is bilinear in (X, Y), so basis pairs are exhaustive.
double check_km_condition(const CurvatureOracle& oracle, const ContactFrame& frame);

/// K̃(X∧φX) for unit X orthogonal to ξ.
double phi_sectional(const CurvatureOracle& oracle, const ContactFrame& frame, const Vec& X,
                     double tol = 1e-10);

struct SymmetryResiduals {
  double antisym_first = 0.0;   // R(X,Y,Z,W) + R(Y,X,Z,W)
  double antisym_second = 0.0;  // R(X,Y,Z,W) + R(X,Y,W,Z)
  double pair = 0.0;            // R(X,Y,Z,W) − R(Z,W,X,Y)
  double bianchi = 0.0;         // R(X,Y,Z,W) + R(Y,Z,X,W) + R(Z,X,Y,W)

  double max() const { return std::max(std::max(antisym_first, antisym_second), std::max(pair, bianchi)); }
};

/// Curvature-tensor symmetries on `samples` random Gaussian quadruples.
SymmetryResiduals oracle_symmetries(const CurvatureOracle& oracle, Rng& rng, std::size_t samples);

struct KmuParameters {
  double kappa = 0.0;
  double mu = 0.0;
};

/// Unit tangent sphere bundle of a space of constant curvature c:
/// κ = c(2 − c), μ = −2c.
KmuParameters tangent_sphere_bundle_parameters(double c);

/// A named ambient space: oracle plus optional contact structure.
struct Ambient {
  std::string key;
  std::size_t dim = 0;
  CurvatureOracle oracle;
  std::optional<ContactFrame> contact;
  std::optional<double> c;
  std::vector<std::string> notes;
};

/// Keys: "euclidean(m)", "real-space-form(c)" or "real-space-form(dim,c)",
/// "sasakian-space-form(m,c)", "kmu-space-form(m,kappa,mu,c)",
/// "non-sasakian-kmu(m,kappa,mu)", "tangent-sphere-bundle(c[,m])",
/// "tangent-sphere-bundle-example(c[,m])". `dim_hint` supplies the
/// dimension of real-space-form(c) when it is not given explicitly.
Ambient make_ambient(const std::string& key, std::optional<std::size_t> dim_hint = std::nullopt);
std::vector<std::string> ambient_catalog_keys();

}  // namespace warpcheck
