#pragma once

#include <stdexcept>
#include <string>

namespace kqpd {

enum class Errc {
  domain,
  near_branch_point,
  use_asymptotic,
  use_exact,
  too_large,
  oracle_out_of_range,
  precondition,
  degenerate_saddle,
  overflow,
  kmax_search,
  io,
  accuracy,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace kqpd
