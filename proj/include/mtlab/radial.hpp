#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace mtlab {

/// Surface area of the unit sphere in R^N, 2 pi^{N/2} / Gamma(N/2).
double sphere_area(int N);

/// Critical Moser-Trudinger exponent N * sphere_area(N)^{1/(N-1)}.
double alpha_critical(int N);

/// Hoelder conjugate N / (N - 1).
inline double conjugate_exponent(int N) { return double(N) / double(N - 1); }

enum class GridScheme { composite_gauss, graded };

const char *to_string(GridScheme scheme);
GridScheme parse_grid_scheme(const std::string &name);

struct GridOptions {
  /// Polynomial degree on each panel; n_nodes must be a multiple of it.
  int degree = 4;
  /// Graded scheme only: width of the outermost panel over the innermost.
  double grading = 200.0;
};

/// Nodes, quadrature weights and the panel structure a profile is
/// interpolated on. Profiles are continuous piecewise polynomials: the panel
/// touching r = 0 carries right-Radau nodes, every other panel carries
/// Gauss-Lobatto nodes and shares its left node with its neighbour. The last
/// node is r_max.
class RadialGrid {
public:
  struct Panel {
    double left = 0.0;
    double right = 0.0;
    std::size_t first = 0; // first node index
    std::size_t count = 0; // nodes interpolated on this panel
    std::vector<double> point_measure; // Gauss weight * r^{N-1} at Gauss points
    std::vector<double> basis_slope;   // row-major [gauss point][local node]
  };

  static std::shared_ptr<const RadialGrid> build(int N, double r_max, int n_nodes, GridScheme scheme,
                                                 const GridOptions &options = {});

  /// Piecewise-linear grid on user nodes: constant on [0, r_1], linear
  /// between consecutive nodes. Weights must satisfy the grid invariants.
  static std::shared_ptr<const RadialGrid> from_nodes(int N, std::vector<double> nodes,
                                                      std::vector<double> weights, double r_max);

  /// The same layout with every length multiplied by factor.
  std::shared_ptr<const RadialGrid> scaled(double factor) const;

  int dimension() const { return N_; }
  double r_max() const { return r_max_; }
  int degree() const { return degree_; }
  const std::string &label() const { return label_; }
  std::size_t size() const { return nodes_.size(); }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  /// w_i r_i^{N-1}: nodal weight of the radial measure (without sphere_area).
  std::span<const double> measure() const { return measure_; }
  const std::vector<Panel> &panels() const { return panels_; }

  /// sum_i w_i f(r_i)
  double integrate(const std::function<double(double)> &f) const;

  /// int_0^{r_max} r^{N-1} |u'(r)|^power dr for the interpolant of nodal values u.
  double slope_integral(std::span<const double> u, double power) const;

  /// Adds d/du_j slope_integral(u, power) to out[j].
  void slope_integral_gradient(std::span<const double> u, double power, std::span<double> out) const;

  /// Interpolant at r; zero beyond r_max.
  double evaluate(std::span<const double> u, double r) const;

private:
  RadialGrid() = default;
  void finish(std::vector<double> edges, const std::vector<std::vector<double>> &local_nodes);

  int N_ = 2;
  int degree_ = 1;
  double r_max_ = 1.0;
  std::string label_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> measure_;
  std::vector<Panel> panels_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Non-negative nodal values of a radial function on a grid.
class RadialProfile {
public:
  RadialProfile(GridPtr grid, std::vector<double> values);

  static RadialProfile from_function(GridPtr grid, const std::function<double(double)> &f);
  static RadialProfile zero(GridPtr grid);

  const RadialGrid &grid() const { return *grid_; }
  const GridPtr &grid_ptr() const { return grid_; }
  std::span<const double> values() const { return values_; }
  int dimension() const { return grid_->dimension(); }
  std::size_t size() const { return values_.size(); }
  double max_value() const;
  bool is_zero() const;
  bool is_non_increasing() const;
  double operator()(double r) const { return grid_->evaluate(values_, r); }

  RadialProfile scaled_by(double c) const;
  /// Same nodal values on another grid of identical size.
  RadialProfile with_grid(GridPtr grid) const;
  /// Interpolate onto another grid (zero beyond this profile's r_max).
  RadialProfile resampled(GridPtr grid) const;

private:
  GridPtr grid_;
  std::vector<double> values_;
};

GridPtr build_grid(int N, double r_max, int n_nodes, GridScheme scheme, const GridOptions &options = {});

/// ||u||_p^p = sphere_area * int r^{N-1} |u|^p dr
double lp_norm_pow(const RadialProfile &u, double p);

/// ||grad u||_N^N = sphere_area * int r^{N-1} |u'|^N dr
double grad_norm_pow(const RadialProfile &u);

/// Equimeasurable non-increasing rearrangement on the grid's nodal measure.
RadialProfile decreasing_rearrangement(const RadialProfile &u);

void write_profile_csv(std::ostream &os, const RadialProfile &u);

} // namespace mtlab
