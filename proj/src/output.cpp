#include "cdgreen/output.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "cdgreen/version.hpp"

namespace cdg::io {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string library_version() { return CDGREEN_VERSION; }

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw std::invalid_argument("csv: empty header");
}

void CsvTable::add_row(std::vector<Cell> row) {
  if (row.size() != header_.size()) throw std::invalid_argument("csv: row width differs from header");
  rows_.push_back(std::move(row));
}

std::string CsvTable::render(const Provenance& prov) const {
  std::string out = "# cdgreen " + prov.version + " config_hash=" + prov.config_hash + "\r\n";
  auto line = [&out](const auto& cells, auto&& text) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(text(cells[i]));
    }
    out += "\r\n";
  };
  line(header_, [](const std::string& s) { return s; });
  for (const auto& row : rows_) {
    line(row, [](const Cell& c) {
      if (const double* d = std::get_if<double>(&c)) return format_double(*d);
      if (const long long* i = std::get_if<long long>(&c)) return std::to_string(*i);
      return std::get<std::string>(c);
    });
  }
  return out;
}

std::string render_json(nlohmann::json doc, const Provenance& prov) {
  doc["cdgreen_version"] = prov.version;
  doc["config_hash"] = prov.config_hash;
  return doc.dump(2) + "\n";
}

namespace {

struct Rgb {
  double r, g, b;
};

// viridis, sampled at five stops
Rgb colour(double t) {
  static constexpr std::array<Rgb, 5> stops{{{68, 1, 84},
                                             {59, 82, 139},
                                             {33, 145, 140},
                                             {94, 201, 98},
                                             {253, 231, 37}}};
  t = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
  const double f = t - static_cast<double>(i);
  const Rgb& a = stops[i];
  const Rgb& b = stops[i + 1];
  return {a.r + f * (b.r - a.r), a.g + f * (b.g - a.g), a.b + f * (b.b - a.b)};
}

std::string hex_colour(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(c.r)),
                static_cast<int>(std::lround(c.g)), static_cast<int>(std::lround(c.b)));
  return buf;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string svg_header(int w, int h, const Provenance& prov) {
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
    << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n"
    << "<!-- cdgreen " << prov.version << " config_hash=" << prov.config_hash << " -->\n"
    << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  return s.str();
}

}  // namespace

std::string render_svg_heatmap(const Heatmap& map, const Provenance& prov, int max_pixels) {
  if (map.nx < 1 || map.ny < 1 || map.values.size() != static_cast<std::size_t>(map.nx) * map.ny) {
    throw std::invalid_argument("heatmap: values do not match nx * ny");
  }
  if (max_pixels < 1) throw std::invalid_argument("heatmap: max_pixels must be positive");
  const int px = std::min(map.nx, max_pixels);
  const int py = std::min(map.ny, max_pixels);

  // box average onto px x py pixels; row j = 0 is the bottom edge
  std::vector<double> pix(static_cast<std::size_t>(px) * py, 0.0);
  for (int j = 0; j < py; ++j) {
    const int j0 = j * map.ny / py, j1 = (j + 1) * map.ny / py;
    for (int i = 0; i < px; ++i) {
      const int i0 = i * map.nx / px, i1 = (i + 1) * map.nx / px;
      double sum = 0.0;
      for (int jj = j0; jj < j1; ++jj) {
        for (int ii = i0; ii < i1; ++ii) sum += map.values[static_cast<std::size_t>(jj) * map.nx + ii];
      }
      pix[static_cast<std::size_t>(j) * px + i] = sum / ((j1 - j0) * (i1 - i0));
    }
  }

  double hi = -std::numeric_limits<double>::infinity(), lo = std::numeric_limits<double>::infinity();
  for (double v : pix) {
    if (!std::isfinite(v)) continue;
    hi = std::max(hi, v);
    lo = std::min(lo, v);
  }
  auto level = [&](double v) {
    if (!std::isfinite(v)) return v > 0 ? 1.0 : 0.0;
    if (map.log_scale) {
      if (!(v > 0.0) || !(hi > 0.0)) return 0.0;
      return 1.0 + std::log10(v / hi) / map.decades;
    }
    return hi > lo ? (v - lo) / (hi - lo) : 0.5;
  };

  const int cell = std::max(1, 600 / std::max(px, py));
  const int margin = 40;
  const int w = px * cell + 2 * margin + 60, h = py * cell + 2 * margin;
  std::ostringstream s;
  s << svg_header(w, h, prov);
  s << "<text x=\"" << margin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">"
    << xml_escape(map.title) << "</text>\n";
  s << "<g shape-rendering=\"crispEdges\">\n";
  for (int j = 0; j < py; ++j) {
    for (int i = 0; i < px; ++i) {
      const int x = margin + i * cell;
      const int y = margin + (py - 1 - j) * cell;
      s << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell
        << "\" fill=\"" << hex_colour(colour(level(pix[static_cast<std::size_t>(j) * px + i])))
        << "\"/>\n";
    }
  }
  s << "</g>\n";

  // colour bar
  const int bx = margin + px * cell + 15, bh = py * cell;
  for (int k = 0; k < 50; ++k) {
    s << "<rect x=\"" << bx << "\" y=\"" << margin + bh - (k + 1) * bh / 50 << "\" width=\"12\" height=\""
      << bh / 50 + 1 << "\" fill=\"" << hex_colour(colour((k + 0.5) / 50.0)) << "\"/>\n";
  }
  const std::string top = num(hi);
  const std::string bottom = map.log_scale ? num(hi * std::pow(10.0, -map.decades)) : num(lo);
  s << "<text x=\"" << bx + 16 << "\" y=\"" << margin + 10
    << "\" font-family=\"sans-serif\" font-size=\"10\">" << top << "</text>\n";
  s << "<text x=\"" << bx + 16 << "\" y=\"" << margin + bh
    << "\" font-family=\"sans-serif\" font-size=\"10\">" << bottom << "</text>\n";
  s << "<text x=\"" << margin << "\" y=\"" << h - 12 << "\" font-family=\"sans-serif\" font-size=\"10\">"
    << "xi in [" << num(map.x0) << ", " << num(map.x1) << "], eta in [" << num(map.y0) << ", "
    << num(map.y1) << "]" << (map.log_scale ? ", log colour" : "") << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

std::string render_svg_fit(const scaling::Fit& fit, const std::string& title,
                           const Provenance& prov) {
  if (fit.samples.empty()) throw std::invalid_argument("fit chart: no samples");
  const bool by_eps = fit.samples.front().eps != fit.samples.back().eps;
  auto abscissa = [&](const scaling::Sample& s) { return by_eps ? s.eps : s.rho; };

  double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
  for (const auto& s : fit.samples) {
    xlo = std::min(xlo, std::log10(abscissa(s)));
    xhi = std::max(xhi, std::log10(abscissa(s)));
    const double m = scaling::evaluate(fit, s.eps, s.rho);
    for (double v : {s.value, m}) {
      if (v > 0.0) {
        ylo = std::min(ylo, std::log10(v));
        yhi = std::max(yhi, std::log10(v));
      }
    }
  }
  if (xhi == xlo) xhi = xlo + 1.0;
  if (yhi == ylo) yhi = ylo + 1.0;
  const double padx = 0.05 * (xhi - xlo), pady = 0.1 * (yhi - ylo);
  xlo -= padx, xhi += padx, ylo -= pady, yhi += pady;

  const int w = 520, h = 380, l = 70, r = 20, t = 40, b = 50;
  auto X = [&](double v) { return l + (std::log10(v) - xlo) / (xhi - xlo) * (w - l - r); };
  auto Y = [&](double v) { return h - b - (std::log10(v) - ylo) / (yhi - ylo) * (h - t - b); };

  std::ostringstream s;
  s << svg_header(w, h, prov);
  s << "<text x=\"" << l << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << xml_escape(title)
    << "</text>\n";
  s << "<rect x=\"" << l << "\" y=\"" << t << "\" width=\"" << w - l - r << "\" height=\"" << h - t - b
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  // fitted curve, sampled between the extreme samples
  const scaling::Sample& first = fit.samples.front();
  const scaling::Sample& last = fit.samples.back();
  s << "<polyline fill=\"none\" stroke=\"#3b528b\" stroke-width=\"1.5\" points=\"";
  for (int k = 0; k <= 64; ++k) {
    const double f = k / 64.0;
    const double e = by_eps ? std::exp(std::log(first.eps) + f * std::log(last.eps / first.eps)) : first.eps;
    const double rho = by_eps ? first.rho : std::exp(std::log(first.rho) + f * std::log(last.rho / first.rho));
    const double m = scaling::evaluate(fit, e, rho);
    if (m > 0.0) s << num(X(by_eps ? e : rho)) << ',' << num(Y(m)) << ' ';
  }
  s << "\"/>\n";
  for (const auto& p : fit.samples) {
    s << "<circle cx=\"" << num(X(abscissa(p))) << "\" cy=\"" << num(Y(p.value))
      << "\" r=\"4\" fill=\"#21918c\"/>\n";
  }
  s << "<text x=\"" << (w + l - r) / 2 << "\" y=\"" << h - 15
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << (by_eps ? "eps" : "rho")
    << " (log)</text>\n";
  s << "<text x=\"" << l << "\" y=\"" << h - 15 << "\" font-family=\"sans-serif\" font-size=\"10\">"
    << num(std::pow(10.0, xlo)) << "</text>\n";
  s << "<text x=\"" << w - r << "\" y=\"" << h - 15
    << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << num(std::pow(10.0, xhi))
    << "</text>\n";
  s << "<text x=\"" << l - 5 << "\" y=\"" << t + 10
    << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << num(std::pow(10.0, yhi))
    << "</text>\n";
  s << "<text x=\"" << l - 5 << "\" y=\"" << h - b
    << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << num(std::pow(10.0, ylo))
    << "</text>\n";
  s << "<text x=\"" << w - r - 5 << "\" y=\"" << t + 16
    << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << scaling::to_string(fit.model)
    << " slope=" << num(fit.slope) << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace cdg::io
