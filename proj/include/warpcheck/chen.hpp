#pragma once

// The warped-product inequality
//
//   Δf/f <= n²/(4n₂)‖H‖² + (τ̃(T_pM) − τ̃(T_pM₁) − τ̃(T_pM₂))/n₂,
//
// its algebraic lemma, the quantities of its proof and the closed forms of
// the right-hand side in (κ, μ) ambients. Every report is expressed in Δf/f
// units, i.e. both sides of the n₂-scaled statement divided by n₂.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "warpcheck/immersion.hpp"

namespace warpcheck {

struct LemmaResult {
  double constraint_residual = 0.0;  // (Σa)² − (ℓ−1)(Σa² + b)
  double margin = 0.0;               // 2a₁a₂ − b
  double tail_residual = 0.0;        // max_{i>=3} |a_i − (a₁ + a₂)|
  bool holds = false;
  bool equality = false;
};

/// Checks the constraint (Σa)² = (ℓ−1)(Σa² + b), then reports 2a₁a₂ >= b and
/// whether a₁ + a₂ = a₃ = … = a_ℓ. Throws inadmissible_tuple when the
/// constraint fails beyond tol (relative to the size of the terms).
LemmaResult chen_lemma(std::span<const double> a, double b, double tol = 1e-10);

/// The b that makes `a` admissible.
double admissible_b(std::span<const double> a);

struct ProofDecomposition {
  double delta = 0.0;  // from 2δ = 4τ − 4τ̃(T_pM) − n²‖H‖²
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  double b = 0.0;
  double tau = 0.0;
  double tau_ambient = 0.0;
  double norm_H2 = 0.0;
  double sigma_norm2 = 0.0;
  double h_delta_sigma_residual = 0.0;  // n²‖H‖² − 2(δ + ‖σ‖²)
  double a_i_residual = 0.0;            // (Σa)² − 2(Σa² + b)
  double lemma_margin = 0.0;            // 2a₁a₂ − b
  double ab_lhs = 0.0;                  // both sides of the rearranged step
  double ab_rhs = 0.0;
  double trace_balance = 0.0;           // a₁ + a₂ − a₃
  std::vector<double> trace1;           // per normal direction, rotated frame
  std::vector<double> trace2;
  bool h_defined_direction = false;     // false when H = 0 and e_{n+1} is the first normal
};

/// Rotates the normal frame so that e_{n+1} is parallel to H and evaluates
/// the proof quantities. τ comes from the Gauss equation.
ProofDecomposition decompose(const PointwiseImmersionData& data, double h_tol = 1e-12);

enum class LhsKind { tau_proxy, chart };

struct LhsSource {
  LhsKind kind = LhsKind::tau_proxy;
  double chart_value = 0.0;  // Δf/f from a chart

  static LhsSource tau_proxy() { return {}; }
  static LhsSource chart(double laplacian_ratio) { return {LhsKind::chart, laplacian_ratio}; }
};

struct InequalityOptions {
  double equality_tol = 1e-8;    // |gap| below this counts as equality
  double diagnostic_tol = 1e-8;  // mixed-geodesic and trace-balance residuals
  double violation_tol = 1e-9;   // gap below −violation_tol is a violation
};

struct EqualityDiagnostics {
  bool mixed_totally_geodesic = false;
  bool partial_mean_equal = false;       // n₁H₁ = n₂H₂
  double mixed_residual = 0.0;
  std::vector<double> trace_conditions;  // |n₁H₁^r − n₂H₂^r| per normal direction
};

struct InequalityReport {
  std::string name;
  std::string lhs_source;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;  // rhs − lhs
  bool equality = false;
  bool holds = false;
  EqualityDiagnostics diagnostics;
  std::map<std::string, double> values;
  std::vector<std::string> notes;

  /// equality <=> (mixed totally geodesic and n₁H₁ = n₂H₂)
  bool equality_consistent() const {
    return equality == (diagnostics.mixed_totally_geodesic && diagnostics.partial_mean_equal);
  }
  double value(const std::string& key) const;
};

/// Σ_{j<=n₁<s} K̃(e_j ∧ e_s) = τ̃(T_pM) − τ̃(T_pM₁) − τ̃(T_pM₂).
double ambient_mixed_scalar(const PointwiseImmersionData& data);
/// Σ_{j<=n₁<s} K(e_j ∧ e_s) with K from the Gauss equation.
double gauss_mixed_scalar(const PointwiseImmersionData& data);

InequalityReport general_inequality(const PointwiseImmersionData& data,
                                    LhsSource lhs = LhsSource::tau_proxy(),
                                    const InequalityOptions& opts = {});

/// C-totally real data in a (κ, μ)-space form of φ-sectional curvature c.
/// The closed-form right-hand side is cross-checked against the general one
/// under the matching oracle (values "rhs_general", "specialization_residual").
InequalityReport kmu_space_form_inequality(const PointwiseImmersionData& data, double c,
                                           LhsSource lhs = LhsSource::tau_proxy(),
                                           const InequalityOptions& opts = {});

/// C-totally real data in a non-Sasakian (κ, μ)-manifold. "rhs_opposite_sign"
/// flips the sign of the A_ξ bracket, for comparison.
InequalityReport non_sasakian_inequality(const PointwiseImmersionData& data,
                                         LhsSource lhs = LhsSource::tau_proxy(),
                                         const InequalityOptions& opts = {});

enum class Verdict { nonexistence, warped_product_immersion, unobstructed };
std::string_view to_string(Verdict v);

struct ObstructionFlags {
  bool harmonic = false;
  std::optional<double> eigenvalue;  // Δf = λf
  bool minimal = false;
  double tol = 1e-8;
};

struct ObstructionResult {
  Verdict verdict = Verdict::unobstructed;
  double implied_lhs = 0.0;
  double rhs_curvature = 0.0;  // rhs without the ‖H‖² term
  std::string reason;
};

/// For minimal immersions the inequality reads Δf/f <= rhs_curvature, so a
/// harmonic warping function (Δf/f = 0) or an eigenfunction (Δf/f = λ)
/// exceeding it cannot exist; equality flags a warped product immersion.
ObstructionResult obstruction_check(const InequalityReport& report, const ObstructionFlags& flags);

}  // namespace warpcheck
