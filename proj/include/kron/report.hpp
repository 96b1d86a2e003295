#pragma once

#include <string>
#include <vector>

#include "kron/birkhoff.hpp"
#include "kron/precision.hpp"

namespace kron {

inline constexpr const char* kLibraryVersion = "1.0.0";

// All floating-point report fields go through these: 20 significant digits,
// scientific, deterministic for a given value regardless of working
// precision.
std::string format_real(const Real& x);
std::string format_double(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Writes header + rows, comma-separated, '\n' line ends, no quoting (fields
// must not contain commas).  Throws IoError.
void write_csv(const CsvTable& table, const std::string& path);

// Minimal JSON writer for the metadata sidecar: flat string/number/bool map
// plus a fixed preamble (library version, precision, wall time).  Keys are
// emitted in insertion order so the sidecar is deterministic except for the
// wall-time field, which is why wall time never goes into the CSV.
struct Sidecar {
  std::vector<std::pair<std::string, std::string>> entries;  // pre-rendered
  void add(const std::string& key, const std::string& value);   // string
  void add_raw(const std::string& key, const std::string& raw); // number/bool
};

void write_sidecar(const Sidecar& sidecar, const std::string& path);

// Log-x plot of a trace's statistic and bound columns as two polylines.
// Deterministic bytes for fixed input.  Throws IoError (also for an empty
// trace, which has nothing to plot).
void emit_plot(const SumTrace& trace, const std::string& path);

}  // namespace kron
