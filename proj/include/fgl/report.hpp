#pragma once

// Artifact emission: JSON reports, CSV tables, and a small hand-written SVG
// line chart. All floating-point text uses %.17g so identical runs produce
// byte-identical files.

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "infinity_limit.hpp"
#include "orlicz.hpp"

#include "json.hpp"

namespace fgl {

inline constexpr const char* kArtifactVersion = "0.1.0";

inline std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

// every JSON artifact carries the version and the echoed configuration
inline nlohmann::ordered_json report_envelope(const nlohmann::ordered_json& config_echo) {
  nlohmann::ordered_json j;
  j["artifact_version"] = kArtifactVersion;
  j["config"] = config_echo;
  return j;
}

inline nlohmann::ordered_json cert_report_json(const OrliczFamily& fam, const CertReport& rep,
                                               const nlohmann::ordered_json& config_echo) {
  nlohmann::ordered_json j = report_envelope(config_echo);
  j["family"] = fam.spec_string();
  j["p_minus"] = rep.p_minus;
  j["p_plus"] = rep.p_plus;
  j["beta"] = rep.beta;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : rep.checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["worst_slack"] = c.worst_slack;
    e["pass"] = c.pass;
    checks.push_back(e);
  }
  j["checks"] = checks;
  j["all_pass"] = rep.all_pass();
  return j;
}

inline nlohmann::ordered_json experiment_report_json(const ExperimentReport& rep,
                                                     const nlohmann::ordered_json& config_echo) {
  nlohmann::ordered_json j = report_envelope(config_echo);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : rep.rows) {
    nlohmann::ordered_json e;
    e["p_minus"] = r.p_minus;
    e["p_plus"] = r.p_plus;
    e["sup_error_vs_oracle"] = r.sup_error_vs_oracle;
    e["seminorm_sG"] = r.seminorm_sG;
    e["apriori_bound"] = r.apriori_bound;
    e["energy"] = r.energy;
    e["iterations"] = r.iterations;
    e["converged"] = r.converged;
    rows.push_back(e);
  }
  j["rows"] = rows;
  nlohmann::ordered_json d;
  d["holder_s_constant_of_limit"] = rep.diagnostics.holder_s_constant_of_limit;
  d["L_plus_max"] = rep.diagnostics.L_plus_max;
  d["L_minus_min"] = rep.diagnostics.L_minus_min;
  d["maximization_gap"] = rep.diagnostics.maximization_gap;
  j["limit_diagnostics"] = d;
  return j;
}

inline nlohmann::ordered_json region_report_json(const RegionCheckReport& rep,
                                                 const nlohmann::ordered_json& config_echo) {
  nlohmann::ordered_json j = report_envelope(config_echo);
  j["tol_region"] = rep.tol_region;
  nlohmann::ordered_json regions = nlohmann::ordered_json::array();
  for (const auto& r : rep.regions) {
    nlohmann::ordered_json e;
    e["name"] = r.name;
    e["count"] = r.count;
    e["worst"] = r.worst;
    e["pass"] = r.pass;
    regions.push_back(e);
  }
  j["regions"] = regions;
  j["all_pass"] = rep.all_pass;
  return j;
}

inline nlohmann::ordered_json gamma_report_json(const FamilySequence& seq,
                                                const std::vector<double>& energies,
                                                const nlohmann::ordered_json& config_echo) {
  nlohmann::ordered_json j = report_envelope(config_echo);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < energies.size(); ++k) {
    nlohmann::ordered_json e;
    e["p_minus"] = seq.families[k].p_minus();
    e["energy"] = energies[k];
    rows.push_back(e);
  }
  j["rows"] = rows;
  return j;
}

inline std::string config_comment_line(const nlohmann::ordered_json& config_echo) {
  return std::string("# artifact_version=") + kArtifactVersion +
         " config=" + config_echo.dump() + "\n";
}

inline std::string experiment_report_csv(const ExperimentReport& rep,
                                         const nlohmann::ordered_json& config_echo) {
  std::string out = config_comment_line(config_echo);
  out += "p_minus,p_plus,sup_error_vs_oracle,seminorm_sG,apriori_bound,energy,iterations,converged\n";
  for (const auto& r : rep.rows) {
    out += format_g17(r.p_minus) + "," + format_g17(r.p_plus) + "," +
           format_g17(r.sup_error_vs_oracle) + "," + format_g17(r.seminorm_sG) + "," +
           format_g17(r.apriori_bound) + "," + format_g17(r.energy) + "," +
           std::to_string(r.iterations) + "," + (r.converged ? "1" : "0") + "\n";
  }
  return out;
}

inline std::string solution_csv(const GridFunction& u,
                                const nlohmann::ordered_json& config_echo) {
  const Grid& grid = *u.grid;
  std::string out = config_comment_line(config_echo);
  out += grid.dimension == 1 ? "x,u\n" : "x,y,u\n";
  for (int i : grid.interior) {
    out += format_g17(grid.nodes[i][0]);
    if (grid.dimension == 2) out += "," + format_g17(grid.nodes[i][1]);
    out += "," + format_g17(u.values[i]) + "\n";
  }
  return out;
}

// minimal line chart: sup_error against p- on a log-x axis
inline std::string sup_error_svg(const ExperimentReport& rep,
                                 const nlohmann::ordered_json& config_echo) {
  const int W = 640, H = 400, M = 60;
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(W) +
                    "\" height=\"" + std::to_string(H) + "\">\n";
  out += "<!-- artifact_version=" + std::string(kArtifactVersion) +
         " config=" + config_echo.dump() + " -->\n";
  if (!rep.rows.empty()) {
    double xmin = std::log(rep.rows.front().p_minus);
    double xmax = std::log(rep.rows.back().p_minus);
    if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
    double ymax = 0.0;
    for (const auto& r : rep.rows) ymax = std::max(ymax, r.sup_error_vs_oracle);
    if (ymax <= 0.0) ymax = 1.0;
    auto X = [&](double p) {
      return M + (std::log(p) - xmin) / (xmax - xmin) * (W - 2 * M);
    };
    auto Y = [&](double e) { return H - M - e / ymax * (H - 2 * M); };
    out += "<line x1=\"" + format_g(M) + "\" y1=\"" + format_g(H - M) + "\" x2=\"" +
           format_g(W - M) + "\" y2=\"" + format_g(H - M) + "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + format_g(M) + "\" y1=\"" + format_g(H - M) + "\" x2=\"" +
           format_g(M) + "\" y2=\"" + format_g(M) + "\" stroke=\"black\"/>\n";
    out += "<polyline fill=\"none\" stroke=\"crimson\" stroke-width=\"2\" points=\"";
    for (const auto& r : rep.rows)
      out += format_g(X(r.p_minus)) + "," + format_g(Y(r.sup_error_vs_oracle)) + " ";
    out += "\"/>\n";
    for (const auto& r : rep.rows)
      out += "<circle cx=\"" + format_g(X(r.p_minus)) + "\" cy=\"" +
             format_g(Y(r.sup_error_vs_oracle)) + "\" r=\"3\" fill=\"crimson\"/>\n";
    for (const auto& r : rep.rows)
      out += "<text x=\"" + format_g(X(r.p_minus)) + "\" y=\"" + format_g(H - M + 18) +
             "\" font-size=\"12\" text-anchor=\"middle\">" + format_g(r.p_minus) + "</text>\n";
    out += "<text x=\"" + format_g(M - 8) + "\" y=\"" + format_g(Y(ymax) + 4) +
           "\" font-size=\"12\" text-anchor=\"end\">" + format_g(ymax) + "</text>\n";
    out += "<text x=\"" + format_g(M - 8) + "\" y=\"" + format_g(H - M + 4) +
           "\" font-size=\"12\" text-anchor=\"end\">0</text>\n";
    out += "<text x=\"" + format_g(W / 2) + "\" y=\"" + format_g(H - 12) +
           "\" font-size=\"13\" text-anchor=\"middle\">lower growth exponent</text>\n";
    out += "<text x=\"" + format_g(W / 2) + "\" y=\"" + format_g(24) +
           "\" font-size=\"13\" text-anchor=\"middle\">sup error against the distance profile</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace fgl
