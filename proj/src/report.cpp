#include "kron/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace kron {

std::string format_real(const Real& x) {
  // str()'s digit count follows iostream scientific semantics (digits after
  // the point), so 19 gives 20 significant digits.
  return x.str(19, std::ios_base::scientific);
}

std::string format_double(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.19e", x);
  return buf;
}

void write_csv(const CsvTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("write_csv: cannot open " + path);
  auto line = [&](const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      out << fields[i];
    }
    out << '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  if (!out) throw IoError("write_csv: write failed for " + path);
}

void Sidecar::add(const std::string& key, const std::string& value) {
  std::string escaped;
  for (char c : value) {
    switch (c) {
      case '"': escaped += "\\\""; break;
      case '\\': escaped += "\\\\"; break;
      case '\n': escaped += "\\n"; break;
      case '\t': escaped += "\\t"; break;
      case '\r': escaped += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          escaped += buf;
        } else {
          escaped += c;
        }
    }
  }
  entries.emplace_back(key, "\"" + escaped + "\"");
}

void Sidecar::add_raw(const std::string& key, const std::string& raw) {
  entries.emplace_back(key, raw);
}

void write_sidecar(const Sidecar& sidecar, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("write_sidecar: cannot open " + path);
  out << "{\n";
  for (size_t i = 0; i < sidecar.entries.size(); ++i) {
    out << "  \"" << sidecar.entries[i].first << "\": "
        << sidecar.entries[i].second;
    if (i + 1 < sidecar.entries.size()) out << ',';
    out << '\n';
  }
  out << "}\n";
  if (!out) throw IoError("write_sidecar: write failed for " + path);
}

void emit_plot(const SumTrace& trace, const std::string& path) {
  if (trace.rows.empty()) throw IoError("emit_plot: empty trace");
  const double x0 = 70, x1 = 820, y0 = 470, y1 = 30;
  double tmin = static_cast<double>(trace.rows.front().t);
  double tmax = static_cast<double>(trace.rows.back().t);
  tmin = std::max(tmin, 1.0);
  tmax = std::max(tmax, tmin);
  const double lmin = std::log10(tmin);
  const double lspan = std::max(std::log10(tmax) - lmin, 1e-9);
  double vmax = 0;
  for (const auto& r : trace.rows) {
    vmax = std::max(vmax, std::abs(static_cast<double>(r.s)));
    vmax = std::max(vmax, std::abs(static_cast<double>(r.bound)));
  }
  if (vmax <= 0) vmax = 1;

  auto xmap = [&](long long t) {
    const double lt = std::log10(std::max(1.0, static_cast<double>(t)));
    return x0 + (lt - lmin) / lspan * (x1 - x0);
  };
  auto ymap = [&](double v) { return y0 + v / vmax * (y1 - y0); };
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("emit_plot: cannot open " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 860 520\">\n";
  out << "<rect width=\"860\" height=\"520\" fill=\"white\"/>\n";
  out << "<line x1=\"70\" y1=\"470\" x2=\"820\" y2=\"470\" stroke=\"black\"/>\n";
  out << "<line x1=\"70\" y1=\"470\" x2=\"70\" y2=\"30\" stroke=\"black\"/>\n";
  char label[96];
  std::snprintf(label, sizeof label,
                "<text x=\"70\" y=\"492\" font-size=\"12\">t=%.6g</text>\n",
                tmin);
  out << label;
  std::snprintf(label, sizeof label,
                "<text x=\"780\" y=\"492\" font-size=\"12\">t=%.6g</text>\n",
                tmax);
  out << label;
  std::snprintf(label, sizeof label,
                "<text x=\"4\" y=\"38\" font-size=\"12\">%.6g</text>\n", vmax);
  out << label;
  out << "<text x=\"4\" y=\"474\" font-size=\"12\">0</text>\n";
  std::snprintf(label, sizeof label,
                "<text x=\"360\" y=\"18\" font-size=\"13\">%s</text>\n",
                trace.probe.c_str());
  out << label;

  auto polyline = [&](const char* colour, bool bound_column) {
    out << "<polyline fill=\"none\" stroke=\"" << colour
        << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < trace.rows.size(); ++i) {
      const auto& r = trace.rows[i];
      const double v = std::abs(
          static_cast<double>(bound_column ? r.bound : r.s));
      if (i) out << ' ';
      out << fmt(xmap(r.t)) << ',' << fmt(ymap(v));
    }
    out << "\"/>\n";
  };
  polyline("#1f77b4", false);
  polyline("#d62728", true);
  out << "<text x=\"700\" y=\"40\" font-size=\"12\" fill=\"#1f77b4\">value"
         "</text>\n";
  out << "<text x=\"700\" y=\"56\" font-size=\"12\" fill=\"#d62728\">bound"
         "</text>\n";
  out << "</svg>\n";
  if (!out) throw IoError("emit_plot: write failed for " + path);
}

}  // namespace kron
