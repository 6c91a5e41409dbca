#include "wlsys/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "wlsys/error.hpp"
#include "wlsys/io.hpp"

namespace wlsys {

namespace {

using nlohmann::json;

struct Common {
  std::string clodum;
  double tolerance = kDefaultTolerance;
  std::string format = "json";
  std::string output;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void emit(const Common& o, const std::string& text, std::ostream& out) {
  if (o.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.output, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + o.output + "'");
  f << text;
}

void emit_json(const Common& o, const json& j, std::ostream& out) { emit(o, j.dump(2) + "\n", out); }

void require_json(const Common& o, const char* cmd) {
  if (o.format != "json") throw UsageError(std::string(cmd) + " only writes JSON reports");
}

Clodum clodum_of(const Common& o, const char* fallback = "max-plus") {
  return Clodum::make(o.clodum.empty() ? fallback : o.clodum, o.tolerance);
}

std::string row_csv(const std::string& head, const std::vector<std::string>& cells) {
  std::string s = head;
  for (const auto& c : cells) s += "," + c;
  return s + "\n";
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamical systems over complete weighted lattices"};
  app.require_subcommand(1);
  app.fallthrough();
  Common o;
  app.add_option("--clodum", o.clodum, "max-plus | max-times | max-min | product-tnorm");
  app.add_option("--tolerance", o.tolerance, "scalar comparison tolerance")->check(CLI::PositiveNumber);
  app.add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("-o,--output", o.output, "write to this file instead of stdout");

  std::string matrix_path, vector_path, system_path, inputs_path, x0_path, target_path, outputs_path;
  std::string config_path, grid_path, obstacles_path, hmm_path;
  int horizon = -1;
  std::size_t steps = 0, max_passes = 64;
  double step_a = 1.0, step_b = 1.0;
  bool min_flag = false, transition_flag = false, impulse_flag = false, history_flag = false;

  auto* solve = app.add_subcommand("solve", "greatest subsolution of A x = b (or the dual with --min)");
  solve->add_option("--matrix", matrix_path)->required();
  solve->add_option("--vector", vector_path)->required();
  solve->add_flag("--min", min_flag, "smallest supersolution of the min-star' equation");

  auto* spectral = app.add_subcommand("spectral", "principal eigenvalue, critical cycle, metric matrix");
  spectral->add_option("--matrix", matrix_path)->required();

  auto* simulate_cmd = app.add_subcommand("simulate", "state and output trajectory");
  simulate_cmd->add_option("--system", system_path)->required();
  simulate_cmd->add_option("--inputs", inputs_path, "rows u(1..T)");
  simulate_cmd->add_option("--x0", x0_path);
  simulate_cmd->add_option("--horizon", horizon);

  auto* impulse = app.add_subcommand("impulse", "impulse response h(0..T)");
  impulse->add_option("--system", system_path)->required();
  impulse->add_option("--horizon", horizon, "default 50");

  auto* stability = app.add_subcommand("stability", "causality and stability report");
  stability->add_option("--system", system_path)->required();
  stability->add_option("--horizon", horizon, "default max(4 n^2, 200)");

  auto* reach_cmd = app.add_subcommand("reach", "k-step control synthesis");
  reach_cmd->add_option("--system", system_path)->required();
  reach_cmd->add_option("--steps", steps)->required()->check(CLI::PositiveNumber);
  reach_cmd->add_option("--target", target_path)->required();
  reach_cmd->add_option("--x0", x0_path);

  auto* observe_cmd = app.add_subcommand("observe", "initial-state estimate from y(1..k)");
  observe_cmd->add_option("--system", system_path)->required();
  observe_cmd->add_option("--steps", steps)->required()->check(CLI::PositiveNumber);
  observe_cmd->add_option("--outputs", outputs_path)->required();

  auto* filter = app.add_subcommand("filter", "recursive max-sum / min-sum filter");
  filter->add_option("--config", config_path)->required();
  filter->add_option("--inputs", inputs_path, "u(1..T), one value per row or a single row");
  filter->add_flag("--impulse", impulse_flag, "impulse response of the state-space realization");
  filter->add_option("--horizon", horizon);

  auto* dt = app.add_subcommand("dt", "chamfer distance transform");
  dt->add_option("--grid", grid_path, "0 marks sources, +inf free cells")->required();
  dt->add_option("--obstacles", obstacles_path, "nonzero entries mark walls");
  dt->add_option("--step-a", step_a);
  dt->add_option("--step-b", step_b);
  dt->add_option("--max-passes", max_passes);
  dt->add_flag("--history", history_flag, "include the field after every pass");

  auto* viterbi_cmd = app.add_subcommand("viterbi", "max-product Viterbi decoding");
  viterbi_cmd->add_option("--hmm", hmm_path)->required();
  viterbi_cmd->add_option("--horizon", horizon);

  auto* fmc = app.add_subcommand("fmc", "fuzzy Markov chain powers and stationary vectors");
  fmc->add_option("--matrix", matrix_path)->required();
  fmc->add_flag("--transition", transition_flag, "the file holds P; analyse A = P^T");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*solve) {
      require_json(o, "solve");
      const Clodum c = clodum_of(o);
      const WMatrix a = io::read_matrix(matrix_path, c);
      const WVector b = io::read_vector(vector_path, c);
      emit_json(o, io::to_json(min_flag ? solve_min(a, b) : solve_max(a, b)), out);
    } else if (*spectral) {
      require_json(o, "spectral");
      const Clodum c = clodum_of(o);
      emit_json(o, io::to_json(analyze_spectrum(io::read_matrix(matrix_path, c)), c), out);
    } else if (*simulate_cmd) {
      const SystemSpec sys = io::read_system(system_path, o.tolerance);
      const Clodum& c = sys.clodum();
      std::vector<WVector> u;
      if (!inputs_path.empty()) u = io::read_signal_rows(inputs_path, c);
      if (horizon < 0) {
        if (inputs_path.empty()) throw UsageError("simulate needs --horizon or --inputs");
        horizon = static_cast<int>(u.size());
      }
      if (inputs_path.empty()) {
        u.assign(static_cast<std::size_t>(horizon), WVector::filled(c, sys.inputs(), sys.null_value()));
      }
      const WVector x0 = x0_path.empty() ? WVector::filled(c, sys.states(), sys.null_value())
                                         : io::read_vector(x0_path, c);
      const Trajectory tr = wlsys::simulate(sys, x0, u, horizon);
      if (o.format == "csv") {
        emit(o, io::trajectory_csv(tr), out);
      } else {
        json states = json::array(), outputs = json::array();
        for (const auto& x : tr.states) states.push_back(io::to_json(x));
        for (const auto& y : tr.outputs) outputs.push_back(io::to_json(y));
        emit_json(o, json{{"states", states}, {"outputs", outputs}}, out);
      }
    } else if (*impulse) {
      const SystemSpec sys = io::read_system(system_path, o.tolerance);
      const auto h = impulse_response(sys, horizon < 0 ? 50 : horizon);
      if (o.format == "csv") {
        std::vector<std::string> head;
        for (std::size_t i = 1; i <= sys.outputs(); ++i)
          for (std::size_t j = 1; j <= sys.inputs(); ++j) head.push_back("h" + std::to_string(i) + "_" + std::to_string(j));
        std::string text = row_csv("t", head);
        for (std::size_t t = 0; t < h.size(); ++t) {
          std::vector<std::string> cells;
          for (Scalar v : h[t].values()) cells.push_back(sys.clodum().format(v));
          text += row_csv(std::to_string(t), cells);
        }
        emit(o, text, out);
      } else {
        json arr = json::array();
        for (const auto& m : h) arr.push_back(io::to_json(m));
        emit_json(o, json{{"h", arr}}, out);
      }
    } else if (*stability) {
      require_json(o, "stability");
      const SystemSpec sys = io::read_system(system_path, o.tolerance);
      emit_json(o, io::to_json(check_causal_stable(sys, std::max(horizon, 0)), sys.clodum()), out);
    } else if (*reach_cmd) {
      require_json(o, "reach");
      const SystemSpec sys = io::read_system(system_path, o.tolerance);
      const WVector target = io::read_vector(target_path, sys.clodum());
      std::optional<WVector> x0;
      if (!x0_path.empty()) x0 = io::read_vector(x0_path, sys.clodum());
      const ReachReport r = reach(sys, steps, target, x0);
      json j = io::to_json(r.report);
      j["controllability_matrix"] = io::to_json(r.c_k);
      json by_time = json::array();
      for (const auto& u : r.inputs_by_time) by_time.push_back(io::to_json(u));
      j["inputs_by_time"] = by_time;
      j["reaches_from_x0"] = r.reaches_from_x0 ? json(*r.reaches_from_x0) : json(nullptr);
      emit_json(o, j, out);
    } else if (*observe_cmd) {
      require_json(o, "observe");
      const SystemSpec sys = io::read_system(system_path, o.tolerance);
      const ObserveReport r = observe(sys, steps, io::read_vector(outputs_path, sys.clodum()));
      json j = io::to_json(r.report);
      j["observability_matrix"] = io::to_json(r.o_k);
      emit_json(o, j, out);
    } else if (*filter) {
      const FilterSpec f = io::filter_from_json(io::read_json(config_path), config_path, o.tolerance);
      const Clodum& c = f.clodum;
      std::vector<Scalar> y;
      if (impulse_flag) {
        const Signal h = impulse_response_signal(filter_to_state_space(f), horizon < 0 ? 50 : horizon);
        y = h.samples();
      } else {
        if (inputs_path.empty()) throw UsageError("filter needs --inputs or --impulse");
        const WMatrix u = io::read_matrix(inputs_path, c);
        y = filter_response(f, std::vector<Scalar>(u.values().begin(), u.values().end()));
      }
      json j{{"y", io::to_json(WVector(c, y))}};
      if (f.b.size() <= 1) {
        const SystemSpec sys = filter_to_state_space(f);
        const WMatrix a = sys.a(0);
        j["lambda"] = io::scalar_to_json(cycle_mean_eigenvalue(a).lambda, c);
        j["dual_lambda"] = io::scalar_to_json(dual_cycle_mean(a), c);
        j["stability"] = io::to_json(check_causal_stable(sys, std::max(horizon, 0)), c);
      }
      if (o.format == "csv") {
        std::string text = "t,y\n";
        for (std::size_t t = 0; t < y.size(); ++t) text += std::to_string(t) + "," + c.format(y[t]) + "\n";
        emit(o, text, out);
      } else {
        emit_json(o, j, out);
      }
    } else if (*dt) {
      const Clodum c(ClodumKind::MaxPlus, o.tolerance);
      const WMatrix grid = io::read_matrix(grid_path, c);
      GridField g;
      g.rows = grid.rows();
      g.cols = grid.cols();
      g.step_a = step_a;
      g.step_b = step_b;
      for (std::size_t i = 0; i < g.rows; ++i) {
        for (std::size_t j = 0; j < g.cols; ++j) {
          if (grid(i, j) == 0.0) {
            g.sources.emplace_back(i, j);
          } else if (!c.is_top(grid(i, j))) {
            throw DomainError(grid_path + ": grid cells must be 0 (source) or +inf (free)");
          }
        }
      }
      if (!obstacles_path.empty()) {
        const WMatrix walls = io::read_matrix(obstacles_path, c);
        if (walls.rows() != g.rows || walls.cols() != g.cols) {
          throw DimensionError(obstacles_path + ": obstacle mask must match the grid shape");
        }
        for (std::size_t i = 0; i < g.rows; ++i)
          for (std::size_t j = 0; j < g.cols; ++j)
            if (walls(i, j) != 0.0) g.obstacles.emplace_back(i, j);
      }
      const DistanceResult r = distance_transform(g, max_passes);
      const WMatrix field(c, g.rows, g.cols, r.field);
      if (o.format == "csv") {
        std::string text;
        for (std::size_t i = 0; i < g.rows; ++i) {
          for (std::size_t j = 0; j < g.cols; ++j) text += (j ? "," : "") + c.format(field(i, j));
          text += "\n";
        }
        emit(o, text, out);
      } else {
        json j{{"field", io::to_json(field)},
               {"passes_used", r.passes_used},
               {"converged", r.converged},
               {"empty_sources", r.empty_sources}};
        if (history_flag) {
          json hist = json::array();
          for (const auto& h : r.history) hist.push_back(io::to_json(WMatrix(c, g.rows, g.cols, h)));
          j["history"] = hist;
        }
        emit_json(o, j, out);
      }
    } else if (*viterbi_cmd) {
      require_json(o, "viterbi");
      const HmmSpec h = io::read_hmm(hmm_path);
      const std::size_t T = horizon < 0 ? h.steps() : static_cast<std::size_t>(horizon);
      const ViterbiResult r = viterbi(h, T);
      const LogViterbiResult lr = viterbi_log_domain(h, T);
      json path = json::array();
      for (std::size_t s : r.path) path.push_back(s + 1);
      emit_json(o, json{{"score", r.score}, {"path", path}, {"log_score", io::scalar_to_json(lr.log_score, Clodum(ClodumKind::MaxPlus))}}, out);
    } else if (*fmc) {
      require_json(o, "fmc");
      const Clodum c = clodum_of(o, "max-min");
      const WMatrix m = io::read_matrix(matrix_path, c);
      const FmcAnalysis r = fmc_analyze(transition_flag ? fmc_from_transition(m) : FmcSpec{m});
      json stationary = json::array();
      for (const auto& v : r.stationary) stationary.push_back(io::to_json(v));
      json j{{"tau", r.tau},
             {"period", r.period},
             {"converged", r.converged},
             {"unit_diagonal", r.unit_diagonal},
             {"ergodic", r.ergodic},
             {"stationary", stationary},
             {"limit", r.converged ? io::to_json(r.powers[r.tau - 1]) : json(nullptr)}};
      j["metric_matrix"] = r.metric_matrix ? io::to_json(*r.metric_matrix) : json(nullptr);
      emit_json(o, j, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace wlsys
