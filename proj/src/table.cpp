#include "modeinv/table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace modeinv {

namespace {

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

void write_csv(const SweepTable& table, std::ostream& os)
{
    for (const auto& [k, v] : table.metadata)
        os << "# " << k << " = " << v << "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        os << (c ? "," : "") << table.columns[c];
    os << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            os << (c ? "," : "") << fmt(row[c]);
        os << "\n";
    }
}

std::string csv_body(const SweepTable& table)
{
    std::ostringstream os;
    SweepTable headless = table;
    headless.metadata.clear();
    write_csv(headless, os);
    return os.str();
}

void write_svg(const SweepTable& table, std::ostream& os, const SvgOptions& opt)
{
    const int margin = 56;
    const double x0 = margin, x1 = opt.width - margin;
    const double y0 = opt.height - margin, y1 = margin;

    auto tx = [&](double v) { return opt.log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return opt.log_y ? std::log10(v) : v; };

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& row : table.rows) {
        if (row.empty())
            continue;
        const double x = tx(row[0]);
        if (std::isfinite(x)) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
        }
        for (std::size_t c = 1; c < row.size(); ++c) {
            const double y = ty(row[c]);
            if (std::isfinite(y)) {
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
        }
    }
    if (!(xmax > xmin)) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (!(ymax > ymin)) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    auto px = [&](double v) { return x0 + (tx(v) - xmin) / (xmax - xmin) * (x1 - x0); };
    auto py = [&](double v) { return y0 + (ty(v) - ymin) / (ymax - ymin) * (y1 - y0); };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf"};

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width
       << "\" height=\"" << opt.height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << x1 - x0
       << "\" height=\"" << y0 - y1 << "\" fill=\"none\" stroke=\"black\"/>\n";

    // axis end labels
    char lab[64];
    auto text = [&](double x, double y, const char* anchor, const std::string& s) {
        os << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"12\" text-anchor=\""
           << anchor << "\">" << s << "</text>\n";
    };
    std::snprintf(lab, sizeof lab, "%g", opt.log_x ? std::pow(10, xmin) : xmin);
    text(x0, y0 + 16, "middle", lab);
    std::snprintf(lab, sizeof lab, "%g", opt.log_x ? std::pow(10, xmax) : xmax);
    text(x1, y0 + 16, "middle", lab);
    std::snprintf(lab, sizeof lab, "%g", opt.log_y ? std::pow(10, ymin) : ymin);
    text(x0 - 6, y0, "end", lab);
    std::snprintf(lab, sizeof lab, "%g", opt.log_y ? std::pow(10, ymax) : ymax);
    text(x0 - 6, y1 + 4, "end", lab);
    if (!table.columns.empty())
        text(0.5 * (x0 + x1), opt.height - 12, "middle", table.columns[0]);

    for (std::size_t c = 1; c < table.columns.size(); ++c) {
        const char* color = palette[(c - 1) % 7];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& row : table.rows) {
            if (c < row.size() && std::isfinite(tx(row[0])) && std::isfinite(ty(row[c])))
                os << px(row[0]) << "," << py(row[c]) << " ";
        }
        os << "\"/>\n";
        text(x1 - 150, y1 + 16 + 14 * static_cast<double>(c - 1), "start", table.columns[c]);
        os << "<line x1=\"" << x1 - 170 << "\" y1=\"" << y1 + 12 + 14 * (c - 1)
           << "\" x2=\"" << x1 - 155 << "\" y2=\"" << y1 + 12 + 14 * (c - 1)
           << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    }
    os << "</svg>\n";
}

} // namespace modeinv
