#pragma once

#include "mtlab/functional.hpp"
#include "mtlab/radial.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mtlab {

enum class Mode { interior, near_vanishing, near_concentration };
const char *to_string(Mode mode);

struct ModeThresholds {
  double eps_vanishing = 0.05;
  double eps_concentration = 0.05;
};

struct MaximizerOptions {
  double r_max = 40.0;
  int n_nodes = 512;
  GridScheme scheme = GridScheme::graded;
  GridOptions grid{};
  int restarts = 12;
  std::uint64_t seed = 1;
  int threads = 0;
  int max_iterations = 2000;
  int stall_window = 25;
  double stall_rel_tol = 1e-9;
  double gradient_tol = 1e-8;
  /// best_value must exceed the lower bound by this much to count as exceeding it
  double certify_margin = 1e-6;
  /// at alpha = alpha_N the supremum is finite for b <= N but only b < N is searched unless set
  bool allow_critical = false;
  /// restarts at alpha = alpha_N whose ||grad u||_N^a exceeds this are dropped
  double concentration_guard = 0.999;
  ModeThresholds thresholds{};
  /// shape V used for the two-parameter family seeds; a sech profile when absent
  std::optional<RadialProfile> gn_profile;
  SeriesControl series{};
};

struct RestartRecord {
  int index = 0;
  std::string family;
  std::uint64_t seed = 0;
  double initial_value = 0.0;
  double value = 0.0;
  int iterations = 0;
  bool failed = false;
  std::string message;
};

struct MaximizerReport {
  MTParams params;
  double best_value = 0.0;
  RadialProfile best_profile;
  double grad_norm = 0.0; // ||grad u||_N
  double mass_norm = 0.0; // ||u||_N
  double lower_bound = 0.0;
  double margin = 0.0;
  bool exceeds_lower_bound = false;
  Mode mode = Mode::interior;
  int iterations = 0;
  int total_iterations = 0;
  int restarts = 0;
  std::uint64_t seed = 0;
  double dilation = 1.0;
  std::string best_family{};
  /// every restart stayed below lower_bound - 1e-6
  bool no_progress = false;
  double r_max = 0.0;
  int n_nodes = 0;
  std::vector<RestartRecord> runs{};
};

/// Largest value of int Phi_N(alpha |u|^{N'}) found on the constraint surface.
/// Every evaluated point is feasible, so best_value is a lower bound for the supremum.
MaximizerReport maximize_d(const MTParams &p, const MaximizerOptions &opts = {});

/// Nodal gradient of mt_integral(u, p).
std::vector<double> functional_gradient(const RadialProfile &u, const MTParams &p, const SeriesControl &ctl = {});

Mode diagnose_mode(double grad_norm, double mass_norm, const MTParams &p, const ModeThresholds &th = {});
Mode diagnose_mode(const MaximizerReport &report, const ModeThresholds &th = {});

struct GNOptions {
  double r_max = 40.0;
  int n_nodes = 512;
  GridScheme scheme = GridScheme::graded;
  GridOptions grid{};
  int max_iterations = 4000;
  double residual_tol = 1e-6;
  int threads = 0;
};

struct GNReport {
  int N = 2;
  double bgn_estimate = 0.0;
  RadialProfile maximizer_profile;
  double residual = 0.0;
  bool low_accuracy = false;
  int iterations = 0;
};

/// ||V||_{NN'}^{NN'} / (||V||_N^N ||grad V||_N^{NN'-N}); invariant under V -> cV and V -> V(l x).
double gn_ratio(const RadialProfile &v);

/// Gradient of log gn_ratio with respect to the nodal values.
std::vector<double> gn_log_ratio_gradient(const RadialProfile &v);

/// Best ratio found over radial profiles: a lower bound for B_GN.
GNReport maximize_gn(int N, const GNOptions &opts = {});

nlohmann::json to_json(const MTParams &p);
nlohmann::json to_json(const MaximizerReport &r);
nlohmann::json to_json(const GNReport &r);

} // namespace mtlab
