#include "wint/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "wint/util.hpp"
#include "wint/version.hpp"

namespace wint {

void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path dir = target.parent_path().empty() ? fs::path(".")
                                                    : target.parent_path();
  const fs::path tmp = dir / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string method_name(Method m) {
  return m == Method::euler ? "euler" : "rk4";
}

Method parse_method(const std::string& name) {
  if (name == "euler") return Method::euler;
  if (name == "rk4") return Method::rk4;
  throw std::invalid_argument("unknown method '" + name + "' (euler|rk4)");
}

std::vector<std::pair<std::string, double>> embedded_params(
    const IntegrabilityReport& report) {
  std::vector<std::pair<std::string, double>> kv = report.system_params;
  kv.emplace_back("grid_nx", report.grid.nx);
  kv.emplace_back("box_x1_lo", report.grid.x1_lo);
  kv.emplace_back("box_x1_hi", report.grid.x1_hi);
  kv.emplace_back("box_y1_lo", report.grid.y1_lo);
  kv.emplace_back("box_y1_hi", report.grid.y1_hi);
  kv.emplace_back("x2", report.grid.x2);
  kv.emplace_back("y2", report.grid.y2);
  kv.emplace_back("dt", report.cfg.dt);
  kv.emplace_back("t_max", report.cfg.t_max);
  kv.emplace_back("escape_radius", report.cfg.escape_radius);
  kv.emplace_back("renorm_every", report.cfg.renorm_every);
  kv.emplace_back("fd_h", report.cfg.fd_h);
  kv.emplace_back("tol", report.tol);
  kv.emplace_back("seed", static_cast<double>(report.seed));
  return kv;
}

std::string report_json(const IntegrabilityReport& report) {
  nlohmann::ordered_json params;
  params["system"] = report.system_name;
  for (const auto& [k, v] : embedded_params(report)) params[k] = v;
  params["method"] = method_name(report.cfg.method);

  nlohmann::ordered_json j;
  j["params"] = params;
  j["m_rho"] = report.m_rho;
  j["n_total"] = report.n_total;
  j["n_regular"] = report.n_regular;
  j["n_escaped"] = report.n_escaped;
  j["weighted_total"] = report.weighted_total;
  j["weighted_regular"] = report.weighted_regular;
  j["lambda_stats"] = {{"min", report.lambda_stats.min},
                       {"median", report.lambda_stats.median},
                       {"max", report.lambda_stats.max}};
  j["tool_version"] = kToolVersion;
  return j.dump(2) + "\n";
}

std::string ftle_csv(const IntegrabilityReport& report) {
  std::ostringstream os;
  os << "# tool_version=" << kToolVersion << "\n";
  os << "# system=" << report.system_name << "\n";
  os << "# method=" << method_name(report.cfg.method) << "\n";
  for (const auto& [k, v] : embedded_params(report))
    os << "# " << k << "=" << fmt17(v) << "\n";
  os << "index,x1_0,y1_0,x2_0,y2_0,rho0,lambda_max,escaped,regular\n";
  for (const auto& r : report.records) {
    os << r.index;
    for (double x : r.u0) os << "," << fmt17(x);
    os << "," << fmt17(r.rho0) << "," << fmt17(r.lambda) << ","
       << (r.escaped ? 1 : 0) << "," << (r.regular ? 1 : 0) << "\n";
  }
  return os.str();
}

std::string sweep_csv(const std::vector<IntegrabilityReport>& reports) {
  std::ostringstream os;
  os << "# tool_version=" << kToolVersion << "\n";
  if (!reports.empty()) {
    for (const auto& [k, v] : embedded_params(reports.front()))
      if (k != "alpha") os << "# " << k << "=" << fmt17(v) << "\n";
    os << "# method=" << method_name(reports.front().cfg.method) << "\n";
  }
  os << "alpha,m_rho,n_regular,n_escaped\n";
  for (const auto& r : reports) {
    double alpha = 0.0;
    for (const auto& [k, v] : r.system_params)
      if (k == "alpha") alpha = v;
    os << fmt17(alpha) << "," << fmt17(r.m_rho) << "," << r.n_regular << ","
       << r.n_escaped << "\n";
  }
  return os.str();
}

static nlohmann::ordered_json report_summary(const IntegrabilityReport& r) {
  return {{"m_rho", r.m_rho},
          {"n_regular", r.n_regular},
          {"n_escaped", r.n_escaped},
          {"dt", r.cfg.dt},
          {"t_max", r.cfg.t_max},
          {"grid_nx", r.grid.nx}};
}

std::string convergence_json(const ConvergenceStudy& study) {
  nlohmann::ordered_json params;
  params["system"] = study.baseline.system_name;
  for (const auto& [k, v] : embedded_params(study.baseline)) params[k] = v;
  params["method"] = method_name(study.baseline.cfg.method);

  nlohmann::ordered_json j;
  j["params"] = params;
  j["baseline"] = report_summary(study.baseline);
  j["longer_time"] = report_summary(study.longer_time);
  j["half_dt"] = report_summary(study.half_dt);
  j["finer_grid"] = report_summary(study.finer_grid);
  j["mean_abs_dlambda_time"] = study.mean_abs_dlambda_time;
  j["rel_dm_time"] = study.rel_dm_time;
  j["rel_dm_dt"] = study.rel_dm_dt;
  j["abs_dm_grid"] = study.abs_dm_grid;
  j["tool_version"] = kToolVersion;
  return j.dump(2) + "\n";
}

}  // namespace wint
