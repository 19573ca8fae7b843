#include "mtlab/sweep.hpp"

#include "mtlab/bounds.hpp"
#include "mtlab/error.hpp"
#include "mtlab/parallel.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace mtlab {

const char *to_string(Spacing s) { return s == Spacing::log ? "log" : "linear"; }

Spacing parse_spacing(const std::string &name) {
  if (name == "linear")
    return Spacing::linear;
  if (name == "log")
    return Spacing::log;
  throw Error(ErrorCode::invalid_parameter, "unknown spacing '" + name + "'");
}

const char *to_string(CellStatus s) {
  switch (s) {
  case CellStatus::ok:
    return "ok";
  case CellStatus::infinite_sup:
    return "infinite-sup";
  case CellStatus::failed:
    return "failed";
  }
  return "?";
}

std::vector<double> SweepAxis::values() const {
  std::vector<double> v(count);
  for (int k = 0; k < count; ++k) {
    const double s = double(k) / (count - 1);
    v[k] = spacing == Spacing::log ? std::exp(std::log(min) + s * (std::log(max) - std::log(min)))
                                   : min + s * (max - min);
  }
  v.front() = min;
  v.back() = max;
  return v;
}

namespace {

double &slot(MTParams &p, const std::string &name) {
  if (name == "alpha")
    return p.alpha;
  if (name == "a")
    return p.a;
  if (name == "b")
    return p.b;
  throw Error(ErrorCode::invalid_parameter, "unknown sweep axis '" + name + "' (expected alpha, a or b)");
}

MTParams cell_params(const SweepPlan &plan, std::size_t index, std::vector<double> &coords) {
  MTParams p = plan.fixed;
  coords.assign(plan.axes.size(), 0.0);
  for (std::size_t k = plan.axes.size(); k-- > 0;) {
    const auto &axis = plan.axes[k];
    const auto vals = axis.values();
    coords[k] = vals[index % vals.size()];
    index /= vals.size();
    slot(p, axis.name) = coords[k];
  }
  return p;
}

std::string json_number(double x) {
  if (std::isnan(x))
    return "nan";
  if (std::isinf(x))
    return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

} // namespace

std::size_t SweepPlan::cardinality() const {
  std::size_t n = 1;
  for (const auto &a : axes)
    n *= std::size_t(std::max(a.count, 0));
  return n;
}

void SweepPlan::validate() const {
  if (axes.empty())
    throw Error(ErrorCode::invalid_parameter, "a sweep needs at least one axis");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const auto &a = axes[i];
    MTParams probe;
    slot(probe, a.name);
    for (std::size_t j = 0; j < i; ++j)
      if (axes[j].name == a.name)
        throw Error(ErrorCode::invalid_parameter, "axis '" + a.name + "' given twice");
    if (a.count < 2)
      throw Error(ErrorCode::invalid_parameter, "axis '" + a.name + "' needs count >= 2");
    if (!(a.min <= a.max) || !std::isfinite(a.min) || !std::isfinite(a.max))
      throw Error(ErrorCode::invalid_parameter, "axis '" + a.name + "' needs finite min <= max");
    if (a.spacing == Spacing::log && !(a.min > 0))
      throw Error(ErrorCode::invalid_parameter, "log axis '" + a.name + "' needs min > 0");
  }
  if (optimizer.restarts < 1)
    throw Error(ErrorCode::invalid_parameter, "restarts must be >= 1");
  std::vector<double> coords;
  for (std::size_t i = 0; i < cardinality(); ++i) {
    const auto p = cell_params(*this, i, coords);
    MTParams::make(p.N, p.alpha, p.a, p.b);
  }
}

nlohmann::json to_json(const MaximizerOptions &o) {
  return {{"r_max", o.r_max},
          {"n_nodes", o.n_nodes},
          {"scheme", to_string(o.scheme)},
          {"restarts", o.restarts},
          {"max_iterations", o.max_iterations},
          {"stall_window", o.stall_window},
          {"stall_rel_tol", o.stall_rel_tol},
          {"gradient_tol", o.gradient_tol},
          {"certify_margin", o.certify_margin},
          {"allow_critical", o.allow_critical}};
}

SweepResult run_sweep(const SweepPlan &plan) {
  plan.validate();
  SweepResult out;
  for (const auto &a : plan.axes)
    out.param_names.push_back(a.name);
  nlohmann::json axes = nlohmann::json::array();
  for (const auto &a : plan.axes)
    axes.push_back({{"name", a.name}, {"min", a.min}, {"max", a.max}, {"count", a.count}, {"spacing", to_string(a.spacing)}});
  out.plan = {{"axes", axes},
              {"fixed", to_json(plan.fixed)},
              {"optimizer", to_json(plan.optimizer)},
              {"seed", plan.seed},
              {"bgn", plan.bgn ? nlohmann::json(*plan.bgn) : nlohmann::json(nullptr)}};

  out.rows.resize(plan.cardinality());
  parallel_for(out.rows.size(), resolve_threads(plan.threads), [&](std::size_t i) {
    SweepRow &row = out.rows[i];
    row.cell = cell_params(plan, i, row.params);
    row.seed = derive_seed(plan.seed, i);
    const auto &p = row.cell;
    row.lower_bound = universal_lower_bound(p.alpha, p.N);
    if (!p.finite_regime()) {
      row.status = CellStatus::infinite_sup;
      row.best_value = INFINITY;
      row.margin = INFINITY;
      row.verdict = "infinite-sup";
      row.mode = "none";
      return;
    }
    try {
      auto opts = plan.optimizer;
      opts.seed = row.seed;
      opts.threads = 1;
      const auto r = maximize_d(p, opts);
      row.best_value = r.best_value;
      row.margin = r.margin;
      row.mode = to_string(r.mode);
      row.iterations = r.total_iterations;
      if (r.exceeds_lower_bound) {
        row.verdict = to_string(Verdict::attained_certified_numerically);
        row.certified_by = "maximize-d";
      } else if (plan.bgn && g_function_test(p.alpha, p.a, p.b, p.N, *plan.bgn).verdict ==
                                 Verdict::attained_certified_numerically) {
        row.verdict = to_string(Verdict::attained_certified_numerically);
        row.certified_by = "g-test";
      } else {
        row.verdict = to_string(Verdict::no_verdict);
      }
    } catch (const std::exception &e) {
      row.status = CellStatus::failed;
      row.best_value = NAN;
      row.margin = NAN;
      row.verdict = "failed";
      row.mode = "none";
      row.message = e.what();
    }
  });

  if (!plan.output_path.empty()) {
    std::ofstream csv(plan.output_path, std::ios::binary);
    if (!csv)
      throw Error(ErrorCode::io_error, "cannot open " + plan.output_path);
    write_sweep_csv(csv, out);
    std::ofstream side(plan.output_path + ".json", std::ios::binary);
    if (!side)
      throw Error(ErrorCode::io_error, "cannot open " + plan.output_path + ".json");
    side << sweep_sidecar(out).dump(2) << '\n';
    if (!csv || !side)
      throw Error(ErrorCode::io_error, "write failed for " + plan.output_path);
  }
  return out;
}

SweepResult phase_map(const SweepAxis &a_axis, const SweepAxis &b_axis, double alpha, int N, const SweepPlan &base) {
  if (a_axis.name != "a" || b_axis.name != "b")
    throw Error(ErrorCode::invalid_parameter, "phase map axes must be named a and b");
  SweepPlan plan = base;
  plan.axes = {a_axis, b_axis};
  plan.fixed = MTParams::make(N, alpha, a_axis.min, b_axis.min);
  if (!plan.bgn) {
    GNOptions g;
    g.threads = plan.threads;
    plan.bgn = maximize_gn(N, g).bgn_estimate;
  }
  return run_sweep(plan);
}

void write_sweep_csv(std::ostream &os, const SweepResult &r) {
  for (const auto &n : r.param_names)
    os << n << ',';
  os << "best_value,lower_bound,margin,verdict,mode,iters,seed\n";
  for (const auto &row : r.rows) {
    for (double v : row.params)
      os << json_number(v) << ',';
    os << json_number(row.best_value) << ',' << json_number(row.lower_bound) << ',' << json_number(row.margin) << ','
       << row.verdict << ',' << row.mode << ',' << row.iterations << ',' << row.seed << '\n';
  }
}

nlohmann::json sweep_sidecar(const SweepResult &r) {
  nlohmann::json cells = nlohmann::json::array();
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto &row = r.rows[i];
    if (row.status == CellStatus::ok && row.certified_by.empty())
      continue;
    nlohmann::json c = {{"index", i}, {"status", to_string(row.status)}};
    if (!row.certified_by.empty())
      c["certified_by"] = row.certified_by;
    if (!row.message.empty())
      c["message"] = row.message;
    cells.push_back(c);
  }
  return {{"plan", r.plan}, {"columns", r.param_names}, {"rows", r.rows.size()}, {"notes", cells}};
}

} // namespace mtlab
