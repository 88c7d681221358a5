#include "kqpd/error.hpp"

namespace kqpd {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::domain: return "domain";
    case Errc::near_branch_point: return "near-branch-point";
    case Errc::use_asymptotic: return "use-asymptotic";
    case Errc::use_exact: return "use-exact";
    case Errc::too_large: return "too-large";
    case Errc::oracle_out_of_range: return "oracle-out-of-range";
    case Errc::precondition: return "precondition";
    case Errc::degenerate_saddle: return "degenerate-saddle";
    case Errc::overflow: return "overflow";
    case Errc::kmax_search: return "kmax-search";
    case Errc::io: return "io";
    case Errc::accuracy: return "accuracy";
  }
  return "unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

}  // namespace kqpd
