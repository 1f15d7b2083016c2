#include "yieldflow/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace yieldflow::io {

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  return f;
}

}  // namespace

void write_field_csv(const std::string& path, const GridField& g, const NodalFlux& q) {
  std::ofstream f = open_out(path);
  f << "y,z,u,q1,q2\n";
  char line[192];
  for (int j = 0; j < g.nz; ++j)
    for (int i = 0; i < g.ny; ++i) {
      const int n = g.index(i, j);
      std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", g.y(i),
                    g.z(j), g.u[n], q.q1[n], q.q2[n]);
      f << line;
    }
}

FieldFile read_field_csv(const std::string& path) {
  std::ifstream f = open_in(path);
  std::string line;
  if (!std::getline(f, line) || line.rfind("y,z,u", 0) != 0)
    throw std::runtime_error("bad field file header: " + path);
  std::vector<std::array<double, 5>> rows;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::array<double, 5> r{};
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &r[0], &r[1], &r[2], &r[3],
                    &r[4]) != 5)
      throw std::runtime_error("bad field row: " + line);
    rows.push_back(r);
  }
  // The y column repeats per z-row; count it to recover the grid shape.
  std::size_t ny = 0;
  while (ny < rows.size() && !(ny > 0 && rows[ny][0] == rows[0][0])) ++ny;
  if (ny < 3 || rows.size() % ny != 0)
    throw std::runtime_error("field file is not a rectangular grid: " + path);
  const std::size_t nz = rows.size() / ny;
  if (nz < 3) throw std::runtime_error("field file has too few rows: " + path);

  FieldFile out;
  out.grid = GridField(static_cast<int>(ny), static_cast<int>(nz), -rows[0][1]);
  out.flux.q1.assign(rows.size(), 0.0);
  out.flux.q2.assign(rows.size(), 0.0);
  for (std::size_t n = 0; n < rows.size(); ++n) {
    out.grid.u[n] = rows[n][2];
    out.flux.q1[n] = rows[n][3];
    out.flux.q2[n] = rows[n][4];
  }
  return out;
}

void write_contour_csv(const std::string& path,
                       const std::vector<std::array<double, 2>>& points,
                       const std::vector<int>& offsets) {
  std::ofstream f = open_out(path);
  f << "y,z\n";
  char line[80];
  for (std::size_t c = 0; c + 1 < offsets.size() || (offsets.empty() && c == 0); ++c) {
    const int lo = offsets.empty() ? 0 : offsets[c];
    const int hi = offsets.empty() ? static_cast<int>(points.size())
                                   : offsets[c + 1];
    if (c > 0) f << "\n";  // blank record between chains
    for (int k = lo; k < hi; ++k) {
      std::snprintf(line, sizeof line, "%.17g,%.17g\n", points[k][0], points[k][1]);
      f << line;
    }
    if (offsets.empty()) break;
  }
}

void write_report_json(const std::string& path, const SolveReport& rep,
                       const GridField& g) {
  nlohmann::ordered_json j;
  j["lambda"] = rep.lambda;
  j["epsilons"] = rep.epsilons;
  j["iters"] = rep.iters;
  j["energy"] = rep.energy;
  j["el_residual"] = rep.el_residual;
  j["support_area"] = rep.support_area;
  j["runtime_s"] = rep.runtime_s;
  j["support_threshold"] = rep.support_threshold;
  j["max_u"] = rep.max_u;
  j["grid"] = {{"ny", g.ny}, {"nz", g.nz}, {"depth", g.depth}};
  j["warmup_iters"] = rep.warmup_iters;
  j["iters_per_eps"] = rep.iters_per_eps;
  j["max_u_per_eps"] = rep.max_u_per_eps;
  j["energy_history"] = rep.energy_history;
  std::ofstream f = open_out(path);
  f << j.dump(2) << "\n";
}

ReportFile read_report_json(const std::string& path) {
  std::ifstream f = open_in(path);
  nlohmann::json j;
  f >> j;
  ReportFile r;
  r.lambda = j.at("lambda").get<double>();
  const auto& eps = j.at("epsilons");
  if (eps.empty()) throw std::runtime_error("report has no epsilons: " + path);
  r.eps_min = eps.back().get<double>();
  r.support_threshold = j.at("support_threshold").get<double>();
  r.support_area = j.at("support_area").get<double>();
  r.ny = j.at("grid").at("ny").get<int>();
  r.nz = j.at("grid").at("nz").get<int>();
  r.depth = j.at("grid").at("depth").get<double>();
  return r;
}

}  // namespace yieldflow::io
