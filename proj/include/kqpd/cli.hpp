#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace kqpd {

// Resolved parameters of one CLI invocation; serialized into JSON outputs.
struct RunConfig {
  std::string command;
  double alpha_abs = 0.0;
  double alpha_arg = 0.0;
  double gamma = 0.0;
  double beta_re = 0.0;
  double beta_im = 0.0;
  std::string kind = "husimi";
  std::string method = "fast";
  std::string bessel = "auto";
  int correction_order = 1;
  int branch_window = 1;
  double direct_threshold = 30.0;
  double rel_eps = 1e-8;
  long kmax_cap = 0;
  int n_cut = 0;
  std::string res = "200x200";
  std::string mode = "auto";
  double center_re = 0.0;
  double center_im = 0.0;
  double extent0 = 0.0;
  double extent1 = 0.0;
  int workers = 1;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
  std::string scale = "small";
  std::vector<double> alphas;
  std::vector<double> direct_alphas;
  double min_time = 0.05;

  std::string to_json() const;
  static RunConfig from_json(const std::string& text);
};

enum ExitCode { kExitOk = 0, kExitValidation = 1, kExitUsage = 2, kExitNumeric = 3 };

// argv-style arguments including the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kqpd
