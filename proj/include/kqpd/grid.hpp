#pragma once

#include <array>
#include <string>
#include <vector>

#include "kqpd/husimi.hpp"
#include "kqpd/wigner.hpp"

namespace kqpd {

enum class GridMode { cartesian, polar };
enum class FieldKind { husimi, wigner };

const char* to_string(GridMode m);
const char* to_string(FieldKind k);
GridMode grid_mode_from(const std::string& s);
FieldKind field_kind_from(const std::string& s);

// cartesian: axis 0 = Re beta, axis 1 = Im beta around center.
// polar: axis 0 = |beta| around |center|, axis 1 = arg beta around arg center.
struct GridSpec {
  GridMode mode = GridMode::cartesian;
  cplx center{0.0, 0.0};
  std::array<double, 2> extent{4.0, 4.0};
  std::array<int, 2> resolution{2, 2};

  void validate() const;
  size_t size() const { return static_cast<size_t>(resolution[0]) * static_cast<size_t>(resolution[1]); }
  double axis(int ax, int i) const;
  cplx node(int i0, int i1) const;
};

struct EvalOptions {
  FEvalOptions husimi;
  WignerOptions wigner;
  int workers = 1;
};

struct EvalStats {
  size_t points = 0;
  double wall_time = 0.0;  // seconds; not serialized
  int workers = 1;         // not serialized
  long kmax_min = 0;
  long kmax_max = 0;
  double kmax_mean = 0.0;
  size_t truncated_nodes = 0;
  size_t exact_fallback_nodes = 0;
};

struct QpdField {
  GridSpec spec;
  FieldKind kind = FieldKind::husimi;
  std::vector<LogReal> values;  // row-major, index i0 * res[1] + i1
  KerrState state;
  EvalOptions options;
  EvalStats stats;
  std::string run_config;  // JSON object text echoed into JSON output, may be empty

  const LogReal& at(int i0, int i1) const { return values[static_cast<size_t>(i0) * spec.resolution[1] + i1]; }
};

GridSpec auto_window(const KerrState& state);

QpdField eval_field(const KerrState& state, const GridSpec& spec, FieldKind kind, const EvalOptions& opts = {});

double integrate_field(const QpdField& field);

enum class FieldFormat { csv, json };

void write_field(const QpdField& field, FieldFormat format, const std::string& path);
std::string field_to_csv(const QpdField& field);
std::string field_to_json(const QpdField& field);
QpdField field_from_json(const std::string& text);
QpdField read_field_json(const std::string& path);

}  // namespace kqpd
