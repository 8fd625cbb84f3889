#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "bratteli/numeric.hpp"

namespace bratteli::cli {

using Json = nlohmann::ordered_json;

// Everything a subcommand may read; unset fields keep their defaults.
struct RunConfig {
  std::string command;
  std::string diagram_path;
  std::string out_path;
  std::string state_path;
  std::string params_text;
  std::string family;
  std::string test;
  std::string alpha_text;
  std::string from = "min";
  std::string emit;
  std::string cuts_text;
  std::string z_text;
  std::string w_text;
  std::string rho_text;
  std::size_t depth = 0;
  std::size_t level = 0;
  std::size_t horizon = 0;
  std::size_t steps = 10;
  double tol = 1e-6;
  double threshold = 1e-3;
  long precision = 0;
  bool bounded = false;
};

// Interval and rational encoders that remember the widest interval written.
class Emitter {
 public:
  Json interval(const Interval& x);
  Json intervals(const IntervalVector& v);
  Json rational(const Rational& x) const { return to_string(x); }
  Json rationals(const RatVector& v) const;
  std::string max_width() const;

 private:
  Rational max_width_ = 0;
};

Json verdict(const std::string& name, const Json& value, bool exact);

// Runs one subcommand, writing its report to `out`. Returns the exit status.
int run(const RunConfig& config, std::ostream& out);

int inspect(const RunConfig& config, std::ostream& out);
int orbit(const RunConfig& config, std::ostream& out);
int measure(const RunConfig& config, std::ostream& out);
int spectra(const RunConfig& config, std::ostream& out);
int construct(const RunConfig& config, std::ostream& out);
int telescope(const RunConfig& config, std::ostream& out);

}  // namespace bratteli::cli
