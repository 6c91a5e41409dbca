#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "wlsys/applications.hpp"
#include "wlsys/control.hpp"
#include "wlsys/solver.hpp"
#include "wlsys/spectral.hpp"
#include "wlsys/state_space.hpp"

namespace wlsys::io {

// Matrix text: one row per line, whitespace-separated scalars ("-inf",
// "+inf" and "inf" allowed). Blank lines and lines starting with '#' are
// skipped. Errors name the source, the line and the expected carrier.
WMatrix parse_matrix(const std::string& text, const Clodum& clodum, const std::string& source = "<input>");
WMatrix read_matrix(const std::string& path, const Clodum& clodum);
std::string format_matrix(const WMatrix& m);
void write_matrix(const std::string& path, const WMatrix& m);

// A vector file holds its entries on one line or one per line.
WVector read_vector(const std::string& path, const Clodum& clodum);
// Each row of the file is one time sample.
std::vector<WVector> read_signal_rows(const std::string& path, const Clodum& clodum);

// JSON scalars are numbers or the strings "-inf" / "+inf".
Scalar scalar_from_json(const nlohmann::json& j, const Clodum& clodum, const std::string& where);
nlohmann::json scalar_to_json(Scalar v, const Clodum& clodum);
nlohmann::json to_json(const WVector& v);
nlohmann::json to_json(const WMatrix& m);

// {"clodum": ..., "mode": "max"|"min", "A": [[..]], "B": .., "C": .., "D": ..}.
// D defaults to the null matrix.
SystemSpec system_from_json(const nlohmann::json& j, const std::string& source = "<input>",
                            double tolerance = kDefaultTolerance);
SystemSpec read_system(const std::string& path, double tolerance = kDefaultTolerance);

// {"a": [[..]], "pi": [..], "p": [[..]], optional "b", "u", "c", "d", "star"}.
HmmSpec hmm_from_json(const nlohmann::json& j, const std::string& source = "<input>");
HmmSpec read_hmm(const std::string& path);

// {"a": [..], "b": [..], "mode": "max"|"min", "clodum": ...}.
FilterSpec filter_from_json(const nlohmann::json& j, const std::string& source = "<input>",
                            double tolerance = kDefaultTolerance);

nlohmann::json read_json(const std::string& path);

// Trajectory CSV with header t,x1..xn,y1..yq.
std::string trajectory_csv(const Trajectory& tr);

nlohmann::json to_json(const SolveReport& r);
nlohmann::json to_json(const SpectralReport& r, const Clodum& clodum);
nlohmann::json to_json(const StabilityReport& r, const Clodum& clodum);

}  // namespace wlsys::io
