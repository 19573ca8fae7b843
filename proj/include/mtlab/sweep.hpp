#pragma once

#include "mtlab/maximizer.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mtlab {

enum class Spacing { linear, log };
const char *to_string(Spacing s);
Spacing parse_spacing(const std::string &name);

/// One swept parameter: "alpha", "a" or "b".
struct SweepAxis {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  int count = 2;
  Spacing spacing = Spacing::linear;

  /// Grid values, endpoints included exactly.
  std::vector<double> values() const;
};

struct SweepPlan {
  std::vector<SweepAxis> axes;
  /// values of the parameters not swept
  MTParams fixed{};
  MaximizerOptions optimizer{};
  std::uint64_t seed = 1;
  /// ratio of an actual profile; when set, cells maximize_d leaves uncertified get a g-test
  std::optional<double> bgn;
  /// CSV destination with a ".json" sidecar next to it; nothing is written when empty
  std::string output_path;
  int threads = 0;

  /// Throws invalid_parameter on bad axes or a cell outside the parameter domain.
  void validate() const;
  std::size_t cardinality() const;
};

enum class CellStatus { ok, infinite_sup, failed };
const char *to_string(CellStatus s);

struct SweepRow {
  std::vector<double> params; // one entry per axis, in axis order
  MTParams cell{};
  CellStatus status = CellStatus::ok;
  double best_value = 0.0;
  double lower_bound = 0.0;
  double margin = 0.0;
  std::string verdict;
  std::string mode;
  std::string certified_by;
  std::string message;
  int iterations = 0;
  std::uint64_t seed = 0;
};

struct SweepResult {
  std::vector<std::string> param_names;
  std::vector<SweepRow> rows;
  nlohmann::json plan;
};

/// Evaluates every cell of the plan (last axis fastest). Cells run in parallel with
/// per-cell seeds derive_seed(plan.seed, index); a failing cell is recorded, never thrown.
/// Writes CSV and sidecar when plan.output_path is set; io_error is the only error raised
/// after validation.
SweepResult run_sweep(const SweepPlan &plan);

/// (a, b) attainment map at fixed alpha. bgn defaults to maximize_gn(N) when base.bgn is unset.
SweepResult phase_map(const SweepAxis &a_axis, const SweepAxis &b_axis, double alpha, int N,
                      const SweepPlan &base = {});

/// param...,best_value,lower_bound,margin,verdict,mode,iters,seed at 17 significant digits
void write_sweep_csv(std::ostream &os, const SweepResult &r);
nlohmann::json sweep_sidecar(const SweepResult &r);

nlohmann::json to_json(const MaximizerOptions &o);

} // namespace mtlab
