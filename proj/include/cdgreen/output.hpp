#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cdgreen/scaling.hpp"
#include "json.hpp"

namespace cdg::io {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

// Shortest form is not used: 17 significant digits always round-trip and keep
// the output independent of the printing library.
std::string format_double(double v);

std::string library_version();

struct Provenance {
  std::string version;
  std::string config_hash;
};

// RFC 4180 table; a single "# cdgreen <version> config_hash=<hash>" line
// precedes the header.
class CsvTable {
 public:
  using Cell = std::variant<double, long long, std::string>;

  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<Cell> row);
  std::size_t rows() const { return rows_.size(); }
  std::string render(const Provenance& prov) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

std::string csv_escape(std::string_view field);

// Adds "cdgreen_version" and "config_hash" and pretty-prints with a trailing
// newline.
std::string render_json(nlohmann::json doc, const Provenance& prov);

// Row-major field samples, values[j * nx + i] at (x0 + i dx, y0 + j dy).
struct Heatmap {
  int nx = 0;
  int ny = 0;
  std::vector<double> values;
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  bool log_scale = true;
  double decades = 8.0;  // colour range below the maximum in log mode
  std::string title;
};

// Box-averaged down to at most max_pixels per side.
std::string render_svg_heatmap(const Heatmap& map, const Provenance& prov, int max_pixels = 200);

// Samples and fitted curve of a scaling study on log-log axes.
std::string render_svg_fit(const scaling::Fit& fit, const std::string& title,
                           const Provenance& prov);

// Writes the whole string or throws IoError naming the path.
void write_file(const std::string& path, const std::string& content);

}  // namespace cdg::io
