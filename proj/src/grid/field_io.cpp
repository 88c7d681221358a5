#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kqpd/error.hpp"
#include "kqpd/grid.hpp"

namespace kqpd {
namespace {

using ojson = nlohmann::ordered_json;

std::string fmt17(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ojson to_json(const QpdField& f) {
  ojson j;
  j["state"] = {{"alpha_re", f.state.alpha.real()}, {"alpha_im", f.state.alpha.imag()}, {"gamma", f.state.gamma_nl}};
  j["spec"] = {{"mode", to_string(f.spec.mode)},
               {"center_re", f.spec.center.real()},
               {"center_im", f.spec.center.imag()},
               {"extent", {f.spec.extent[0], f.spec.extent[1]}},
               {"resolution", {f.spec.resolution[0], f.spec.resolution[1]}}};
  j["kind"] = to_string(f.kind);
  j["options"] = {{"husimi",
                   {{"correction_order", f.options.husimi.correction_order},
                    {"branch_window", f.options.husimi.branch_window},
                    {"direct_fallback_threshold", f.options.husimi.direct_fallback_threshold}}},
                  {"wigner",
                   {{"rel_eps", f.options.wigner.rel_eps},
                    {"kmax_cap", f.options.wigner.kmax_cap},
                    {"exact_bessel", f.options.wigner.exact_bessel}}}};
  j["stats"] = {{"points", f.stats.points},
                {"kmax_min", f.stats.kmax_min},
                {"kmax_max", f.stats.kmax_max},
                {"kmax_mean", f.stats.kmax_mean},
                {"truncated_nodes", f.stats.truncated_nodes},
                {"exact_fallback_nodes", f.stats.exact_fallback_nodes}};
  if (!f.run_config.empty()) j["config"] = ojson::parse(f.run_config);
  ojson lm = ojson::array();
  ojson sg = ojson::array();
  for (int i0 = 0; i0 < f.spec.resolution[0]; ++i0) {
    ojson lrow = ojson::array();
    ojson srow = ojson::array();
    for (int i1 = 0; i1 < f.spec.resolution[1]; ++i1) {
      const LogReal& v = f.at(i0, i1);
      if (v.sign == 0)
        lrow.push_back(nullptr);
      else
        lrow.push_back(v.log_mag);
      srow.push_back(v.sign);
    }
    lm.push_back(std::move(lrow));
    sg.push_back(std::move(srow));
  }
  j["log_mag"] = std::move(lm);
  j["sign"] = std::move(sg);
  return j;
}

}  // namespace

std::string field_to_csv(const QpdField& field) {
  std::ostringstream os;
  os << "x,p,value,log_mag,sign\n";
  for (int i0 = 0; i0 < field.spec.resolution[0]; ++i0) {
    for (int i1 = 0; i1 < field.spec.resolution[1]; ++i1) {
      const cplx b = field.spec.node(i0, i1);
      const LogReal& v = field.at(i0, i1);
      os << fmt17(b.real()) << ',' << fmt17(b.imag()) << ',' << fmt17(v.value()) << ',' << fmt17(v.log_mag) << ','
         << v.sign << '\n';
    }
  }
  return os.str();
}

std::string field_to_json(const QpdField& field) { return to_json(field).dump() + "\n"; }

QpdField field_from_json(const std::string& text) {
  QpdField f;
  ojson j;
  try {
    j = ojson::parse(text);
    f.state.alpha = {j.at("state").at("alpha_re").get<double>(), j.at("state").at("alpha_im").get<double>()};
    f.state.gamma_nl = j.at("state").at("gamma").get<double>();
    const auto& s = j.at("spec");
    f.spec.mode = grid_mode_from(s.at("mode").get<std::string>());
    f.spec.center = {s.at("center_re").get<double>(), s.at("center_im").get<double>()};
    f.spec.extent = {s.at("extent").at(0).get<double>(), s.at("extent").at(1).get<double>()};
    f.spec.resolution = {s.at("resolution").at(0).get<int>(), s.at("resolution").at(1).get<int>()};
    f.kind = field_kind_from(j.at("kind").get<std::string>());
    const auto& oh = j.at("options").at("husimi");
    f.options.husimi.correction_order = oh.at("correction_order").get<int>();
    f.options.husimi.branch_window = oh.at("branch_window").get<int>();
    f.options.husimi.direct_fallback_threshold = oh.at("direct_fallback_threshold").get<double>();
    const auto& ow = j.at("options").at("wigner");
    f.options.wigner.rel_eps = ow.at("rel_eps").get<double>();
    f.options.wigner.kmax_cap = ow.at("kmax_cap").get<long>();
    f.options.wigner.exact_bessel = ow.at("exact_bessel").get<bool>();
    const auto& st = j.at("stats");
    f.stats.points = st.at("points").get<size_t>();
    f.stats.kmax_min = st.at("kmax_min").get<long>();
    f.stats.kmax_max = st.at("kmax_max").get<long>();
    f.stats.kmax_mean = st.at("kmax_mean").get<double>();
    f.stats.truncated_nodes = st.at("truncated_nodes").get<size_t>();
    f.stats.exact_fallback_nodes = st.at("exact_fallback_nodes").get<size_t>();
    if (j.contains("config")) f.run_config = j.at("config").dump();
    f.spec.validate();
    f.values.assign(f.spec.size(), LogReal{});
    const auto& lm = j.at("log_mag");
    const auto& sg = j.at("sign");
    for (int i0 = 0; i0 < f.spec.resolution[0]; ++i0)
      for (int i1 = 0; i1 < f.spec.resolution[1]; ++i1) {
        LogReal v;
        v.sign = sg.at(i0).at(i1).get<int>();
        const auto& l = lm.at(i0).at(i1);
        v.log_mag = l.is_null() ? kNegInf : l.get<double>();
        f.values[static_cast<size_t>(i0) * f.spec.resolution[1] + i1] = v;
      }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::io, std::string("malformed field JSON: ") + e.what());
  }
  return f;
}

void write_field(const QpdField& field, FieldFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot open '" + path + "' for writing");
  out << (format == FieldFormat::csv ? field_to_csv(field) : field_to_json(field));
  out.flush();
  if (!out) throw Error(Errc::io, "write failed for '" + path + "'");
}

QpdField read_field_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return field_from_json(ss.str());
}

}  // namespace kqpd
