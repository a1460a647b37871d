#pragma once

#include <memory>
#include <string>
#include <vector>

#include "warpcheck/chart.hpp"

namespace warpcheck {

/// Closed catalog of warping functions of the first-factor coordinates:
/// const(a), cos(x_k), exp(x_k), polynomial(coeffs; x_k), and sums/products
/// of those. There is deliberately no general expression evaluator.
class WarpFunction {
 public:
  enum class Kind { constant, cosine, exponential, polynomial, sum, product };

  static WarpFunction constant(double a);
  static WarpFunction cosine(std::size_t coord = 0);
  static WarpFunction exponential(std::size_t coord = 0);
  static WarpFunction polynomial(std::vector<double> coeffs, std::size_t coord = 0);
  static WarpFunction sum(std::vector<WarpFunction> terms);
  static WarpFunction product(std::vector<WarpFunction> factors);

  double operator()(std::span<const double> x) const;
  ScalarFunction as_function() const;

  Kind kind() const noexcept { return kind_; }
  double constant_value() const noexcept { return a_; }
  std::size_t coord() const noexcept { return coord_; }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  const std::vector<WarpFunction>& children() const noexcept { return children_; }
  /// Largest coordinate index referenced anywhere in the tree.
  std::size_t max_coord() const;

  bool operator==(const WarpFunction&) const = default;

 private:
  Kind kind_ = Kind::constant;
  double a_ = 1.0;
  std::size_t coord_ = 0;
  std::vector<double> coeffs_;
  std::vector<WarpFunction> children_;
};

struct WarpedProductChart {
  ChartMetric factor1;  // M_1, coordinates x_1
  ChartMetric factor2;  // M_2, coordinates x_2
  ScalarFunction warp;  // f on M_1
  std::string name;

  std::size_t n1() const noexcept { return factor1.dim; }
  std::size_t n2() const noexcept { return factor2.dim; }
  std::size_t dim() const noexcept { return factor1.dim + factor2.dim; }

  /// f(π_1(x)) for a product-chart point; throws invalid_warping when f <= 0.
  double warp_at(std::span<const double> product_point) const;
};

/// g(x_1, x_2) = diag(g_1(x_1), f(x_1)² g_2(x_2)).
ChartMetric build_metric(const WarpedProductChart& wp);

/// max(|∇_X Y − (Xf/f) Y|, |∇_Y X − (Xf/f) Y|) for X in 𝒟_1 and Y in 𝒟_2.
double check_connection_identity(const WarpedProductChart& wp, std::span<const double> x,
                                 const Vec& X, const Vec& Y, double step = 1e-4);

/// (1/f){(∇_X X)f − X²f} for unit X in 𝒟_1 and unit Z in 𝒟_2.
double mixed_sectional(const WarpedProductChart& wp, std::span<const double> x, const Vec& X,
                       const Vec& Z, double step = 1e-4);

struct LaplacianRatioReport {
  double laplacian_ratio = 0.0;        // Δf/f on M_1
  std::vector<double> per_fibre_sums;  // Σ_j K(e_j ∧ e_s), one per s
  double max_deviation = 0.0;          // max |sum_s − Δf/f|
  double max_pairwise = 0.0;           // max |sum_s − sum_t|
};

LaplacianRatioReport check_laplacian_ratio(const WarpedProductChart& wp,
                                           std::span<const double> x, FdSteps steps = {});

bool is_trivial(const WarpedProductChart& wp, std::span<const Vec> samples, double tol = 1e-10);

/// Named charts addressable from scene files. `lo`/`hi` bound the sampling
/// box used for random points.
struct CatalogChart {
  WarpedProductChart chart;
  Vec lo;
  Vec hi;
};

/// Keys: "sphere" / "sphere(n)", "hyperbolic" / "hyperbolic(k)", "cone",
/// "flat-product" / "flat-product(n1,n2)".
CatalogChart warped_catalog(const std::string& key);
std::vector<std::string> warped_catalog_keys();

/// Factor metric keys: "euclidean(k)", "round-sphere(k)".
ChartMetric factor_metric(const std::string& key);

}  // namespace warpcheck
