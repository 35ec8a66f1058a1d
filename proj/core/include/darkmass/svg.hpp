#pragma once

#include <string>
#include <vector>

#include "darkmass/summary.hpp"

namespace darkmass {

/// Minimal SVG document builder; geometry only, no external dependencies.
class SvgCanvas {
public:
    SvgCanvas(double width, double height);

    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double stroke_width = 1.0);
    void rect(double x, double y, double w, double h, const std::string& fill);
    void circle(double cx, double cy, double r, const std::string& fill);
    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
                  double stroke_width = 1.0);
    void text(double x, double y, const std::string& content, double font_size = 12.0,
              const std::string& anchor = "start");

    std::string str() const;
    void write(const std::string& path) const;

private:
    double width_, height_;
    std::string body_;
};

/// Side-by-side HPD bars with mode dots: density bins on the left panel,
/// df bins on the right, indexed by bin with physical midpoints underneath.
void write_hpd_plot(const SummaryTable& table, const RadialGrid& rgrid,
                    const EnergyGrid& egrid, const std::string& path);

/// Parameter trace over stored iterations, one polyline per chain.
void write_trace_plot(const std::vector<Chain>& chains, std::size_t param_index,
                      const std::string& param_name, const std::string& path);

}  // namespace darkmass
