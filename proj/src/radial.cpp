#include "mtlab/radial.hpp"

#include "mtlab/error.hpp"
#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>

namespace mtlab {

double sphere_area(int N) {
  if (N < 1)
    throw Error(ErrorCode::invalid_parameter, "dimension must be positive");
  return 2.0 * std::pow(M_PI, 0.5 * N) / std::tgamma(0.5 * N);
}

double alpha_critical(int N) {
  if (N < 2)
    throw Error(ErrorCode::invalid_parameter, "dimension must be at least 2");
  return N * std::pow(sphere_area(N), 1.0 / (N - 1));
}

const char *to_string(GridScheme scheme) {
  return scheme == GridScheme::composite_gauss ? "composite-gauss" : "graded";
}

GridScheme parse_grid_scheme(const std::string &name) {
  if (name == "composite-gauss")
    return GridScheme::composite_gauss;
  if (name == "graded")
    return GridScheme::graded;
  throw Error(ErrorCode::invalid_parameter, "unknown grid scheme '" + name + "'");
}

namespace {

// Gauss points per panel: exact for r^{N-1} |p'|^N when N is even.
int slope_points(std::size_t local_nodes, int N) {
  const int d = int(local_nodes) - 1;
  return std::max(2, (d * N + 1) / 2 + 1);
}

} // namespace

void RadialGrid::finish(std::vector<double> edges, const std::vector<std::vector<double>> &local_nodes) {
  // local_nodes[k] are the panel's node positions in [-1, 1]
  const std::size_t P = edges.size() - 1;
  panels_.clear();
  panels_.reserve(P);
  std::size_t next = 0;
  for (std::size_t k = 0; k < P; ++k) {
    Panel panel;
    panel.left = edges[k];
    panel.right = edges[k + 1];
    panel.count = local_nodes[k].size();
    // panels after the first share their left node with the previous panel
    panel.first = (k == 0) ? 0 : next - 1;
    next = panel.first + panel.count;
    const double half = 0.5 * (panel.right - panel.left);
    const double mid = 0.5 * (panel.right + panel.left);
    const auto g = detail::gauss_legendre(slope_points(panel.count, N_));
    panel.point_measure.resize(g.x.size());
    panel.basis_slope.resize(g.x.size() * panel.count);
    for (std::size_t q = 0; q < g.x.size(); ++q) {
      const double r = mid + half * g.x[q];
      panel.point_measure[q] = g.w[q] * half * std::pow(r, N_ - 1);
      for (std::size_t j = 0; j < panel.count; ++j)
        panel.basis_slope[q * panel.count + j] = detail::lagrange_slope(local_nodes[k], j, g.x[q]) / half;
    }
    panels_.push_back(std::move(panel));
  }
  if (next != nodes_.size())
    throw Error(ErrorCode::invalid_parameter, "panel layout does not cover the nodes");
  measure_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    measure_[i] = weights_[i] * std::pow(nodes_[i], N_ - 1);
}

std::shared_ptr<const RadialGrid> RadialGrid::build(int N, double r_max, int n_nodes, GridScheme scheme,
                                                    const GridOptions &options) {
  if (N < 2)
    throw Error(ErrorCode::invalid_parameter, "N must be >= 2");
  if (!(r_max > 0) || !std::isfinite(r_max))
    throw Error(ErrorCode::invalid_parameter, "r_max must be positive");
  if (n_nodes < 16)
    throw Error(ErrorCode::invalid_parameter, "n_nodes must be >= 16");
  const int q = options.degree;
  if (q < 1 || q > 12 || n_nodes % q != 0)
    throw Error(ErrorCode::invalid_parameter, "n_nodes must be a multiple of the panel degree (1..12)");
  if (scheme == GridScheme::graded && !(options.grading >= 1.0))
    throw Error(ErrorCode::invalid_parameter, "grading must be >= 1");

  const int P = n_nodes / q;
  std::vector<double> edges(P + 1, 0.0);
  if (scheme == GridScheme::composite_gauss || P == 1 || options.grading == 1.0) {
    for (int k = 0; k <= P; ++k)
      edges[k] = r_max * double(k) / P;
  } else {
    const double ratio = std::pow(options.grading, 1.0 / (P - 1));
    double width = 1.0, total = 0.0;
    for (int k = 0; k < P; ++k) {
      edges[k + 1] = edges[k] + width;
      total += width;
      width *= ratio;
    }
    for (double &e : edges)
      e *= r_max / total;
  }
  edges.back() = r_max;

  const auto radau = detail::radau_right(q);
  const auto lobatto = detail::gauss_lobatto(q + 1);

  std::shared_ptr<RadialGrid> grid(new RadialGrid());
  grid->N_ = N;
  grid->degree_ = q;
  grid->r_max_ = r_max;
  grid->label_ = to_string(scheme);
  grid->nodes_.reserve(n_nodes);
  grid->weights_.reserve(n_nodes);
  std::vector<std::vector<double>> local(P);
  for (int k = 0; k < P; ++k) {
    const auto &rule = (k == 0) ? radau : lobatto;
    const double half = 0.5 * (edges[k + 1] - edges[k]);
    const double mid = 0.5 * (edges[k + 1] + edges[k]);
    local[k] = rule.x;
    for (std::size_t j = 0; j < rule.x.size(); ++j) {
      const double w = rule.w[j] * half;
      if (k > 0 && j == 0) {
        grid->weights_.back() += w; // shared node
        continue;
      }
      grid->nodes_.push_back(j + 1 == rule.x.size() ? edges[k + 1] : mid + half * rule.x[j]);
      grid->weights_.push_back(w);
    }
  }
  grid->finish(std::move(edges), local);
  return grid;
}

std::shared_ptr<const RadialGrid> RadialGrid::from_nodes(int N, std::vector<double> nodes,
                                                         std::vector<double> weights, double r_max) {
  if (N < 2)
    throw Error(ErrorCode::invalid_parameter, "N must be >= 2");
  if (nodes.empty() || nodes.size() != weights.size())
    throw Error(ErrorCode::invalid_parameter, "nodes and weights must be non-empty and of equal length");
  if (!(r_max > 0))
    throw Error(ErrorCode::invalid_parameter, "r_max must be positive");
  double prev = 0.0, total = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!(nodes[i] > prev) || nodes[i] > r_max)
      throw Error(ErrorCode::invalid_parameter, "nodes must be strictly increasing in (0, r_max]");
    if (!(weights[i] > 0))
      throw Error(ErrorCode::invalid_parameter, "weights must be positive");
    prev = nodes[i];
    total += weights[i];
  }
  if (std::abs(total - r_max) > 1e-12 * r_max)
    throw Error(ErrorCode::invalid_parameter, "weights must sum to r_max");

  std::shared_ptr<RadialGrid> grid(new RadialGrid());
  grid->N_ = N;
  grid->degree_ = 1;
  grid->r_max_ = r_max;
  grid->label_ = "nodes";
  std::vector<double> edges{0.0};
  edges.insert(edges.end(), nodes.begin(), nodes.end());
  std::vector<std::vector<double>> local(nodes.size(), std::vector<double>{-1.0, 1.0});
  local[0] = {1.0};
  grid->nodes_ = std::move(nodes);
  grid->weights_ = std::move(weights);
  grid->finish(std::move(edges), local);
  return grid;
}

std::shared_ptr<const RadialGrid> RadialGrid::scaled(double factor) const {
  const double measure_check = std::pow(factor, N_);
  if (!(factor > 0) || !std::isfinite(factor) || factor * r_max_ > 1e200 || factor * r_max_ < 1e-200 ||
      !std::isfinite(measure_check) || measure_check < 1e-280)
    throw Error(ErrorCode::grid_overflow, "grid rescaling leaves the representable range");
  std::shared_ptr<RadialGrid> grid(new RadialGrid(*this));
  grid->r_max_ = r_max_ * factor;
  const double measure_factor = std::pow(factor, N_);
  const double slope_factor = 1.0 / factor;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    grid->nodes_[i] = nodes_[i] * factor;
    grid->weights_[i] = weights_[i] * factor;
    grid->measure_[i] = measure_[i] * measure_factor;
  }
  for (auto &panel : grid->panels_) {
    panel.left *= factor;
    panel.right *= factor;
    for (double &m : panel.point_measure)
      m *= measure_factor;
    for (double &s : panel.basis_slope)
      s *= slope_factor;
  }
  return grid;
}

double RadialGrid::integrate(const std::function<double(double)> &f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    s += weights_[i] * f(nodes_[i]);
  return s;
}

double RadialGrid::slope_integral(std::span<const double> u, double power) const {
  double total = 0.0;
  for (const auto &panel : panels_) {
    const std::size_t m = panel.point_measure.size();
    for (std::size_t q = 0; q < m; ++q) {
      double d = 0.0;
      const double *row = &panel.basis_slope[q * panel.count];
      for (std::size_t j = 0; j < panel.count; ++j)
        d += row[j] * u[panel.first + j];
      const double a = std::abs(d);
      if (a > 0)
        total += panel.point_measure[q] * std::pow(a, power);
    }
  }
  return total;
}

void RadialGrid::slope_integral_gradient(std::span<const double> u, double power, std::span<double> out) const {
  for (const auto &panel : panels_) {
    const std::size_t m = panel.point_measure.size();
    for (std::size_t q = 0; q < m; ++q) {
      double d = 0.0;
      const double *row = &panel.basis_slope[q * panel.count];
      for (std::size_t j = 0; j < panel.count; ++j)
        d += row[j] * u[panel.first + j];
      const double a = std::abs(d);
      if (a == 0)
        continue;
      const double coef = panel.point_measure[q] * power * std::pow(a, power - 1.0) * (d > 0 ? 1.0 : -1.0);
      for (std::size_t j = 0; j < panel.count; ++j)
        out[panel.first + j] += coef * row[j];
    }
  }
}

double RadialGrid::evaluate(std::span<const double> u, double r) const {
  if (r > r_max_ || r < 0)
    return 0.0;
  auto it = std::lower_bound(panels_.begin(), panels_.end(), r,
                             [](const Panel &p, double x) { return p.right < x; });
  if (it == panels_.end())
    it = std::prev(panels_.end());
  const Panel &panel = *it;
  std::vector<double> xs(panel.count);
  for (std::size_t j = 0; j < panel.count; ++j)
    xs[j] = nodes_[panel.first + j];
  if (panel.count == 1)
    return u[panel.first];
  double v = 0.0;
  for (std::size_t j = 0; j < panel.count; ++j)
    v += u[panel.first + j] * detail::lagrange(xs, j, r);
  return v;
}

GridPtr build_grid(int N, double r_max, int n_nodes, GridScheme scheme, const GridOptions &options) {
  return RadialGrid::build(N, r_max, n_nodes, scheme, options);
}

RadialProfile::RadialProfile(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_)
    throw Error(ErrorCode::invalid_parameter, "profile needs a grid");
  if (values_.size() != grid_->size())
    throw Error(ErrorCode::invalid_parameter, "profile size does not match its grid");
  for (double v : values_)
    if (!(v >= 0) || !std::isfinite(v))
      throw Error(ErrorCode::invalid_parameter, "profile values must be finite and non-negative");
}

RadialProfile RadialProfile::from_function(GridPtr grid, const std::function<double(double)> &f) {
  std::vector<double> v(grid->size());
  auto nodes = grid->nodes();
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = std::max(0.0, f(nodes[i]));
  return RadialProfile(std::move(grid), std::move(v));
}

RadialProfile RadialProfile::zero(GridPtr grid) {
  std::vector<double> v(grid->size(), 0.0);
  return RadialProfile(std::move(grid), std::move(v));
}

double RadialProfile::max_value() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

bool RadialProfile::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

bool RadialProfile::is_non_increasing() const {
  return std::is_sorted(values_.rbegin(), values_.rend());
}

RadialProfile RadialProfile::scaled_by(double c) const {
  std::vector<double> v(values_);
  for (double &x : v)
    x *= c;
  return RadialProfile(grid_, std::move(v));
}

RadialProfile RadialProfile::with_grid(GridPtr grid) const { return RadialProfile(std::move(grid), values_); }

RadialProfile RadialProfile::resampled(GridPtr grid) const {
  return from_function(std::move(grid), [this](double r) { return (*this)(r); });
}

double lp_norm_pow(const RadialProfile &u, double p) {
  if (!(p >= 1))
    throw Error(ErrorCode::invalid_parameter, "p must be >= 1");
  const auto mu = u.grid().measure();
  const auto v = u.values();
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] > 0)
      s += mu[i] * std::pow(v[i], p);
  return sphere_area(u.dimension()) * s;
}

double grad_norm_pow(const RadialProfile &u) {
  return sphere_area(u.dimension()) * u.grid().slope_integral(u.values(), u.dimension());
}

RadialProfile decreasing_rearrangement(const RadialProfile &u) {
  if (u.is_non_increasing())
    return u;
  const auto v = u.values();
  const auto mu = u.grid().measure();
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });

  // Average the decreasing step function (value v[order[k]] on a measure
  // interval of length mu[order[k]]) over each node's measure cell.
  std::vector<double> steps(n + 1, 0.0), cells(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    steps[i + 1] = steps[i] + mu[order[i]];
    cells[i + 1] = cells[i] + mu[i];
  }
  std::vector<double> out(n, 0.0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = cells[i], hi = cells[i + 1];
    while (k < n && steps[k + 1] <= lo)
      ++k;
    double acc = 0.0;
    for (std::size_t s = k; s < n && steps[s] < hi; ++s) {
      const double a = std::max(lo, steps[s]), b = std::min(hi, steps[s + 1]);
      if (b > a)
        acc += v[order[s]] * (b - a);
    }
    out[i] = acc / (hi - lo);
  }
  // averaging over consecutive cells of a monotone function is monotone;
  // clamp the last ulps so the invariant holds exactly
  for (std::size_t i = 1; i < n; ++i)
    out[i] = std::min(out[i], out[i - 1]);
  return RadialProfile(u.grid_ptr(), std::move(out));
}

void write_profile_csv(std::ostream &os, const RadialProfile &u) {
  os << "r,u\n" << std::setprecision(17);
  auto r = u.grid().nodes();
  auto v = u.values();
  for (std::size_t i = 0; i < v.size(); ++i)
    os << r[i] << ',' << v[i] << '\n';
}

} // namespace mtlab
