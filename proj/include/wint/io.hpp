#pragma once

#include <string>
#include <vector>

#include "wint/diagnostics.hpp"
#include "wint/functional.hpp"

namespace wint {

/// Writes content to path atomically (temp file in the same directory,
/// then rename).
void atomic_write_file(const std::string& path, const std::string& content);

/// Resolved parameters embedded into every output. Execution-only settings
/// (worker count, output paths) are excluded: they cannot affect any number.
std::vector<std::pair<std::string, double>> embedded_params(
    const IntegrabilityReport& report);

/// Report JSON: params, m_rho, counters, weighted sums, lambda stats,
/// tool_version.
std::string report_json(const IntegrabilityReport& report);

/// FTLE CSV: `index,x1_0,y1_0,x2_0,y2_0,rho0,lambda_max,escaped,regular`,
/// preceded by `# key=value` parameter comments.
std::string ftle_csv(const IntegrabilityReport& report);

/// Sweep CSV: `alpha,m_rho,n_regular,n_escaped`.
std::string sweep_csv(const std::vector<IntegrabilityReport>& reports);

std::string convergence_json(const ConvergenceStudy& study);

std::string method_name(Method m);
Method parse_method(const std::string& name);

}  // namespace wint
