#include "wlsys/io.hpp"

#include <fstream>
#include <sstream>

#include "wlsys/error.hpp"

namespace wlsys::io {

using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Scalar parse_token(const std::string& tok, const Clodum& clodum, const std::string& where) {
  try {
    return clodum.parse(tok);
  } catch (const ParseError&) {
    throw ParseError(where + ": invalid scalar '" + tok + "', expected a number or -inf/+inf in the " +
                     std::string(clodum.name()) + " carrier " + clodum.carrier());
  } catch (const DomainError&) {
    throw DomainError(where + ": scalar '" + tok + "' outside the " + std::string(clodum.name()) +
                      " carrier " + clodum.carrier());
  }
}

std::vector<std::vector<Scalar>> parse_rows(const std::string& text, const Clodum& clodum,
                                            const std::string& source) {
  std::vector<std::vector<Scalar>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::vector<Scalar> row;
    std::string tok;
    while (ls >> tok) row.push_back(parse_token(tok, clodum, source + ":" + std::to_string(line_no)));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(source + ":" + std::to_string(line_no) + ": row has " + std::to_string(row.size()) +
                       " entries, expected " + std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(source + ": no matrix rows");
  return rows;
}

WMatrix matrix_from_json(const json& j, const Clodum& clodum, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where + ": expected a non-empty array of rows");
  std::vector<Scalar> data;
  std::size_t cols = 0;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& row = j[i];
    const std::string rw = where + "[" + std::to_string(i) + "]";
    if (!row.is_array() || row.empty()) throw ParseError(rw + ": expected a non-empty array");
    if (i == 0) cols = row.size();
    if (row.size() != cols) throw ParseError(rw + ": ragged row");
    for (std::size_t k = 0; k < row.size(); ++k)
      data.push_back(scalar_from_json(row[k], clodum, rw + "[" + std::to_string(k) + "]"));
  }
  return WMatrix(clodum, j.size(), cols, std::move(data));
}

std::vector<Scalar> scalars_from_json(const json& j, const Clodum& clodum, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array");
  std::vector<Scalar> out;
  for (std::size_t k = 0; k < j.size(); ++k)
    out.push_back(scalar_from_json(j[k], clodum, where + "[" + std::to_string(k) + "]"));
  return out;
}

std::vector<std::vector<Scalar>> table_from_json(const json& j, const Clodum& clodum, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of rows");
  std::vector<std::vector<Scalar>> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(scalars_from_json(j[i], clodum, where + "[" + std::to_string(i) + "]"));
  return out;
}

SystemMode mode_from(const json& j, const std::string& source) {
  const std::string m = j.value("mode", std::string("max"));
  if (m == "max") return SystemMode::Max;
  if (m == "min") return SystemMode::Min;
  throw ConfigError(source + ": mode must be \"max\" or \"min\", got \"" + m + "\"");
}

json json_or_null(const std::vector<Scalar>& v, const Clodum& c) {
  json out = json::array();
  for (Scalar s : v) out.push_back(scalar_to_json(s, c));
  return out;
}

}  // namespace

WMatrix parse_matrix(const std::string& text, const Clodum& clodum, const std::string& source) {
  const auto rows = parse_rows(text, clodum, source);
  std::vector<Scalar> data;
  for (const auto& r : rows) data.insert(data.end(), r.begin(), r.end());
  return WMatrix(clodum, rows.size(), rows.front().size(), std::move(data));
}

WMatrix read_matrix(const std::string& path, const Clodum& clodum) { return parse_matrix(slurp(path), clodum, path); }

std::string format_matrix(const WMatrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ' ';
      out += m.clodum().format(m(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_matrix(const std::string& path, const WMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << format_matrix(m);
}

WVector read_vector(const std::string& path, const Clodum& clodum) {
  const WMatrix m = read_matrix(path, clodum);
  if (m.rows() != 1 && m.cols() != 1) throw ParseError(path + ": expected a single row or a single column");
  return WVector(clodum, std::vector<Scalar>(m.values().begin(), m.values().end()));
}

std::vector<WVector> read_signal_rows(const std::string& path, const Clodum& clodum) {
  const WMatrix m = read_matrix(path, clodum);
  std::vector<WVector> out;
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(m.row(i));
  return out;
}

Scalar scalar_from_json(const json& j, const Clodum& clodum, const std::string& where) {
  if (j.is_number()) {
    const Scalar v = j.get<double>();
    if (!clodum.contains(v)) {
      throw DomainError(where + ": scalar " + clodum.format(v) + " outside the " + std::string(clodum.name()) +
                        " carrier " + clodum.carrier());
    }
    return v;
  }
  if (j.is_string()) return parse_token(j.get<std::string>(), clodum, where);
  throw ParseError(where + ": expected a number or \"-inf\"/\"+inf\"");
}

json scalar_to_json(Scalar v, const Clodum& clodum) {
  if (clodum.is_top(v) && std::isinf(v)) return "+inf";
  if (clodum.is_bottom(v) && std::isinf(v)) return "-inf";
  return v;
}

json to_json(const WVector& v) { return json_or_null(v.data(), v.clodum()); }

json to_json(const WMatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(to_json(m.row(i)));
  return out;
}

json read_json(const std::string& path) {
  try {
    return json::parse(slurp(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

SystemSpec system_from_json(const json& j, const std::string& source, double tolerance) {
  if (!j.is_object()) throw ParseError(source + ": expected a JSON object");
  const Clodum clodum = Clodum::make(j.value("clodum", std::string("max-plus")), tolerance);
  const SystemMode mode = mode_from(j, source);
  for (const char* key : {"A", "B", "C"})
    if (!j.contains(key)) throw ConfigError(source + ": missing matrix " + key);
  WMatrix a = matrix_from_json(j["A"], clodum, source + ": A");
  WMatrix b = matrix_from_json(j["B"], clodum, source + ": B");
  WMatrix c = matrix_from_json(j["C"], clodum, source + ": C");
  const Scalar null = mode == SystemMode::Max ? clodum.bottom() : clodum.top();
  WMatrix d = j.contains("D") ? matrix_from_json(j["D"], clodum, source + ": D")
                              : WMatrix::filled(clodum, c.rows(), b.cols(), null);
  return SystemSpec::constant(mode, std::move(a), std::move(b), std::move(c), std::move(d));
}

SystemSpec read_system(const std::string& path, double tolerance) {
  return system_from_json(read_json(path), path, tolerance);
}

HmmSpec hmm_from_json(const json& j, const std::string& source) {
  if (!j.is_object()) throw ParseError(source + ": expected a JSON object");
  for (const char* key : {"a", "pi", "p"})
    if (!j.contains(key)) throw ConfigError(source + ": missing field " + key);
  const Clodum c(ClodumKind::ProductTNorm);
  HmmSpec h{matrix_from_json(j["a"], c, source + ": a"),
            scalars_from_json(j["pi"], c, source + ": pi"),
            table_from_json(j["p"], c, source + ": p"),
            std::nullopt,
            {},
            {},
            {},
            ClodumKind::ProductTNorm};
  if (j.contains("b")) h.b = matrix_from_json(j["b"], c, source + ": b");
  if (j.contains("u")) h.u = table_from_json(j["u"], c, source + ": u");
  if (j.contains("c")) h.c = scalars_from_json(j["c"], c, source + ": c");
  if (j.contains("d")) h.d = scalars_from_json(j["d"], c, source + ": d");
  const std::string star = j.value("star", std::string("product"));
  if (star == "product") {
    h.star = ClodumKind::ProductTNorm;
  } else if (star == "min") {
    h.star = ClodumKind::MaxMin;
  } else {
    throw ConfigError(source + ": star must be \"product\" or \"min\"");
  }
  return h;
}

HmmSpec read_hmm(const std::string& path) { return hmm_from_json(read_json(path), path); }

FilterSpec filter_from_json(const json& j, const std::string& source, double tolerance) {
  if (!j.is_object()) throw ParseError(source + ": expected a JSON object");
  FilterSpec f;
  f.clodum = Clodum::make(j.value("clodum", std::string("max-plus")), tolerance);
  f.mode = mode_from(j, source);
  if (!j.contains("a")) throw ConfigError(source + ": missing field a");
  f.a = scalars_from_json(j["a"], f.clodum, source + ": a");
  if (j.contains("b")) f.b = scalars_from_json(j["b"], f.clodum, source + ": b");
  return f;
}

std::string trajectory_csv(const Trajectory& tr) {
  if (tr.states.empty()) return "t\n";
  const Clodum& c = tr.states.front().clodum();
  const std::size_t n = tr.states.front().size();
  const std::size_t q = tr.outputs.empty() ? 0 : tr.outputs.front().size();
  std::string out = "t";
  for (std::size_t i = 1; i <= n; ++i) out += ",x" + std::to_string(i);
  for (std::size_t i = 1; i <= q; ++i) out += ",y" + std::to_string(i);
  out += '\n';
  for (std::size_t t = 0; t < tr.states.size(); ++t) {
    out += std::to_string(t);
    for (std::size_t i = 0; i < n; ++i) out += "," + c.format(tr.states[t][i]);
    for (std::size_t i = 0; i < q; ++i) out += "," + c.format(tr.outputs[t][i]);
    out += '\n';
  }
  return out;
}

json to_json(const SolveReport& r) {
  return json{{"solution", to_json(r.solution)},
              {"achieved", to_json(r.achieved)},
              {"exact", r.exact},
              {"residual_linf", scalar_to_json(r.residual_linf, Clodum(ClodumKind::MaxPlus))},
              {"residual_l1", scalar_to_json(r.residual_l1, Clodum(ClodumKind::MaxPlus))}};
}

json to_json(const SpectralReport& r, const Clodum& clodum) {
  json cycle = json::array();
  for (std::size_t v : r.critical_cycle) cycle.push_back(v + 1);
  json out{{"lambda", scalar_to_json(r.lambda, clodum)},
           {"critical_cycle", cycle},
           {"critical_count", r.critical_count},
           {"irreducible", r.is_irreducible},
           {"metric_converged", r.metric_converged},
           {"dual_lambda", scalar_to_json(r.dual_lambda, clodum)}};
  out["metric_matrix"] = r.metric_matrix ? to_json(*r.metric_matrix) : json(nullptr);
  return out;
}

json to_json(const StabilityReport& r, const Clodum& clodum) {
  json out{{"causal", r.causal},
           {"bibo_upper", r.bibo_upper},
           {"bibo_lower", r.bibo_lower},
           {"lambda", scalar_to_json(r.lambda, clodum)},
           {"dual_lambda", scalar_to_json(r.dual_lambda, clodum)},
           {"eigenvalue_bound", r.eigenvalue_bound},
           {"diverges", r.diverges},
           {"m_h", scalar_to_json(r.m_h, clodum)},
           {"horizon", r.horizon}};
  out["absolutely_stable"] = r.absolutely_stable ? json(*r.absolutely_stable) : json(nullptr);
  out["periodicity"] =
      r.periodicity ? json{{"k0", r.periodicity->k0}, {"period", r.periodicity->period}} : json(nullptr);
  return out;
}

}  // namespace wlsys::io
