#ifndef MODEINV_TABLE_HPP
#define MODEINV_TABLE_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace modeinv {

/// Tabular sweep output: '#'-prefixed metadata, a header row, then data rows.
/// Floats are serialized with 17 significant digits so a re-parse reproduces
/// the run bit-identically.
struct SweepTable {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void write_csv(const SweepTable& table, std::ostream& os);

/// Header + data rows only (no metadata), for determinism comparisons.
std::string csv_body(const SweepTable& table);

struct SvgOptions {
    int width = 720;
    int height = 480;
    bool log_x = false;
    bool log_y = false;
};

/// Minimal line plot: column 0 on the x axis, every later column a polyline.
void write_svg(const SweepTable& table, std::ostream& os, const SvgOptions& opt = {});

} // namespace modeinv

#endif
