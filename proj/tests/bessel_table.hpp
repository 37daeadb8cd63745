#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdg::testing {

struct BesselRow {
  double s;
  double k0;
  double k1;
};

inline std::vector<BesselRow> load_bessel_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::getline(in, line);
  std::vector<BesselRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    BesselRow r{};
    char c1 = 0, c2 = 0;
    ss >> r.s >> c1 >> r.k0 >> c2 >> r.k1;
    if (!ss || c1 != ',' || c2 != ',') throw std::runtime_error("bad row: " + line);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace cdg::testing
