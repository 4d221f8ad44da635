#pragma once

#include <iosfwd>
#include <json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "gausspack/evolution.hpp"
#include "gausspack/fluctuations.hpp"
#include "gausspack/fock_expansion.hpp"

// JSON and CSV formats shared by the command-line tool and the tests.
namespace gausspack::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "gausspack/1";

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json to_json(const RealParams& p);
// A bare packet descriptor, or any report carrying one under "packet".
RealParams params_from_json(const json& j);

// Keys L_i, L_c, lambda, lambda_c, u, v; omega and M optional.
json to_json(const MinPacketSpec& s);
MinPacketSpec min_spec_from_json(const json& j);
bool is_min_spec(const json& j);

// Either form; minimal specs are built into packets.
RealParams packet_from_json(const json& j);

json load_json_file(const std::string& path);

json to_json(const FirstMoments& m);
json to_json(const GaussianState& s);
json to_json(const AngularSplit& s);
json to_json(const EllipseGeometry& e);
json to_json(const UniversalInvariants& u);
json to_json(const VarianceReport& r);
json to_json(const FockCoefficients& c);

// Moments, angular-momentum split, ellipse (nu = 1) and invariants.
json describe(const RealParams& p);

// Shortest text that reads back to the same double; '.' separator regardless
// of locale.
std::string format_double(double v);

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

const std::vector<std::string>& trajectory_columns();
std::vector<double> trajectory_row(const TrajectoryPoint& p);

}  // namespace gausspack::io
