#pragma once

#include <array>
#include <string>
#include <vector>

#include "yieldflow/grid.hpp"
#include "yieldflow/solver.hpp"

namespace yieldflow::io {

// Shortest decimal with 17 significant digits (round-trips any double).
std::string g17(double v);

// Field dump: header y,z,u,q1,q2; one row per node, row-major with the
// z-row (bottom first) as the outer loop; 17-significant-digit decimals.
void write_field_csv(const std::string& path, const GridField& g, const NodalFlux& q);

struct FieldFile {
  GridField grid;
  NodalFlux flux;
};
// Inverse of write_field_csv; reconstructs the grid geometry from the
// coordinate columns.  Values round-trip exactly.
FieldFile read_field_csv(const std::string& path);

// Contour dump: header y,z; chains separated by a blank record.
void write_contour_csv(const std::string& path,
                       const std::vector<std::array<double, 2>>& points,
                       const std::vector<int>& offsets);

void write_report_json(const std::string& path, const SolveReport& rep,
                       const GridField& g);

// The subset of the report a re-verification needs.
struct ReportFile {
  double lambda = 0.0;
  double eps_min = 0.0;
  double support_threshold = 0.0;
  double support_area = 0.0;
  int ny = 0, nz = 0;
  double depth = 0.0;
};
ReportFile read_report_json(const std::string& path);

}  // namespace yieldflow::io
