#include "darkmass/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace darkmass {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
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

// Maps [lo, hi] in data space onto [pix_lo, pix_hi].
struct Axis {
    double lo = 0.0, hi = 1.0, pix_lo = 0.0, pix_hi = 1.0;
    double operator()(double v) const {
        const double t = (hi > lo) ? (v - lo) / (hi - lo) : 0.5;
        return pix_lo + t * (pix_hi - pix_lo);
    }
};

struct PanelLayout {
    double x0, y0, w, h;  // plot area in pixels
};

void draw_hpd_panel(SvgCanvas& svg, const PanelLayout& p, const std::string& title,
                    const std::vector<const ParameterSummary*>& params,
                    const std::vector<double>& midpoints) {
    double lo = 0.0, hi = 1.0;
    bool first = true;
    for (const auto* ps : params) {
        const double l = std::min(ps->hpd_lower, ps->mode);
        const double u = std::max(ps->hpd_upper, ps->mode);
        if (first) {
            lo = l;
            hi = u;
            first = false;
        } else {
            lo = std::min(lo, l);
            hi = std::max(hi, u);
        }
    }
    if (!(hi > lo)) hi = lo + 1.0;
    const double pad = 0.05 * (hi - lo);
    Axis y{lo - pad, hi + pad, p.y0 + p.h, p.y0};

    svg.rect(p.x0, p.y0, p.w, p.h, "#fafafa");
    svg.line(p.x0, p.y0, p.x0, p.y0 + p.h, "#000");
    svg.line(p.x0, p.y0 + p.h, p.x0 + p.w, p.y0 + p.h, "#000");
    svg.text(p.x0 + 0.5 * p.w, p.y0 - 8.0, title, 13.0, "middle");

    for (int t = 0; t <= 4; ++t) {
        const double v = y.lo + (y.hi - y.lo) * t / 4.0;
        const double py = y(v);
        svg.line(p.x0 - 4.0, py, p.x0, py, "#000");
        svg.text(p.x0 - 7.0, py + 4.0, num(v), 10.0, "end");
    }

    const std::size_t n = params.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double cx = p.x0 + p.w * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        const double bar_w = std::min(18.0, 0.5 * p.w / static_cast<double>(n));
        const double ylo = y(params[i]->hpd_lower);
        const double yhi = y(params[i]->hpd_upper);
        svg.rect(cx - 0.5 * bar_w, yhi, bar_w, std::max(1.0, ylo - yhi), "#7799cc");
        svg.circle(cx, y(params[i]->mode), 3.5, "#cc2222");
        svg.text(cx, p.y0 + p.h + 14.0, std::to_string(i + 1), 10.0, "middle");
        if (i < midpoints.size())
            svg.text(cx, p.y0 + p.h + 27.0, num(midpoints[i]), 8.5, "middle");
    }
}

}  // namespace

SvgCanvas::SvgCanvas(double width, double height) : width_(width), height_(height) {}

void SvgCanvas::line(double x1, double y1, double x2, double y2, const std::string& stroke,
                     double stroke_width) {
    body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" +
             num(y2) + "\" stroke=\"" + escape_xml(stroke) + "\" stroke-width=\"" +
             num(stroke_width) + "\"/>\n";
}

void SvgCanvas::rect(double x, double y, double w, double h, const std::string& fill) {
    body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) +
             "\" height=\"" + num(h) + "\" fill=\"" + escape_xml(fill) + "\"/>\n";
}

void SvgCanvas::circle(double cx, double cy, double r, const std::string& fill) {
    body_ += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) +
             "\" fill=\"" + escape_xml(fill) + "\"/>\n";
}

void SvgCanvas::polyline(const std::vector<std::pair<double, double>>& pts,
                         const std::string& stroke, double stroke_width) {
    std::string points;
    for (const auto& [x, y] : pts) points += num(x) + "," + num(y) + " ";
    body_ += "<polyline fill=\"none\" stroke=\"" + escape_xml(stroke) + "\" stroke-width=\"" +
             num(stroke_width) + "\" points=\"" + points + "\"/>\n";
}

void SvgCanvas::text(double x, double y, const std::string& content, double font_size,
                     const std::string& anchor) {
    body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + num(font_size) +
             "\" font-family=\"sans-serif\" text-anchor=\"" + escape_xml(anchor) + "\">" +
             escape_xml(content) + "</text>\n";
}

std::string SvgCanvas::str() const {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width_) << "\" height=\""
        << num(height_) << "\" viewBox=\"0 0 " << num(width_) << " " << num(height_) << "\">\n"
        << body_ << "</svg>\n";
    return out.str();
}

void SvgCanvas::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("SvgCanvas: cannot open '" + path + "'");
    out << str();
}

void write_hpd_plot(const SummaryTable& table, const RadialGrid& rgrid, const EnergyGrid& egrid,
                    const std::string& path) {
    SvgCanvas svg(920.0, 430.0);
    std::vector<const ParameterSummary*> rho_params, f_params;
    for (std::size_t j = 0; j < table.n_rho; ++j) rho_params.push_back(&table.parameters[j]);
    for (std::size_t j = 0; j < table.n_f; ++j)
        f_params.push_back(&table.parameters[table.n_rho + j]);

    std::vector<double> r_mid(rgrid.bins()), e_mid(egrid.bins());
    for (std::size_t i = 0; i < rgrid.bins(); ++i)
        r_mid[i] = 0.5 * (rgrid.edges[i] + rgrid.edges[i + 1]);
    for (std::size_t j = 0; j < egrid.bins(); ++j)
        e_mid[j] = 0.5 * (egrid.edges[j] + egrid.edges[j + 1]);

    draw_hpd_panel(svg, PanelLayout{70.0, 40.0, 360.0, 320.0},
                   "rho (95% HPD, mode)", rho_params, r_mid);
    draw_hpd_panel(svg, PanelLayout{530.0, 40.0, 360.0, 320.0},
                   "f (95% HPD, mode)", f_params, e_mid);
    svg.text(250.0, 415.0, "bin index / bin midpoint radius", 10.0, "middle");
    svg.text(710.0, 415.0, "bin index / bin midpoint energy", 10.0, "middle");
    svg.write(path);
}

void write_trace_plot(const std::vector<Chain>& chains, std::size_t param_index,
                      const std::string& param_name, const std::string& path) {
    static const char* palette[] = {"#3366aa", "#aa5522", "#33aa66", "#9944aa",
                                    "#aaa022", "#22aaa5"};
    SvgCanvas svg(760.0, 320.0);
    const PanelLayout p{60.0, 30.0, 660.0, 240.0};

    double lo = 0.0, hi = 1.0;
    std::uint64_t it_max = 1;
    bool first = true;
    for (const auto& c : chains) {
        for (const auto& s : c.samples) {
            const double v = param_index < c.n_rho ? s.rho[param_index]
                                                   : s.f[param_index - c.n_rho];
            if (first) {
                lo = hi = v;
                first = false;
            } else {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            it_max = std::max(it_max, s.iteration);
        }
    }
    if (!(hi > lo)) hi = lo + 1.0;
    Axis x{0.0, static_cast<double>(it_max), p.x0, p.x0 + p.w};
    Axis y{lo, hi, p.y0 + p.h, p.y0};

    svg.rect(p.x0, p.y0, p.w, p.h, "#fafafa");
    svg.line(p.x0, p.y0, p.x0, p.y0 + p.h, "#000");
    svg.line(p.x0, p.y0 + p.h, p.x0 + p.w, p.y0 + p.h, "#000");
    svg.text(p.x0 + 0.5 * p.w, 20.0, param_name + " trace", 13.0, "middle");
    svg.text(p.x0 + 0.5 * p.w, 300.0, "iteration", 10.0, "middle");
    for (int t = 0; t <= 4; ++t) {
        const double v = lo + (hi - lo) * t / 4.0;
        svg.text(p.x0 - 6.0, y(v) + 4.0, num(v), 9.0, "end");
    }

    for (std::size_t c = 0; c < chains.size(); ++c) {
        const auto& samples = chains[c].samples;
        if (samples.empty()) continue;
        const std::size_t stride = std::max<std::size_t>(1, samples.size() / 2000);
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < samples.size(); i += stride) {
            const double v = param_index < chains[c].n_rho
                                 ? samples[i].rho[param_index]
                                 : samples[i].f[param_index - chains[c].n_rho];
            pts.emplace_back(x(static_cast<double>(samples[i].iteration)), y(v));
        }
        svg.polyline(pts, palette[c % 6], 0.8);
    }
    svg.write(path);
}

}  // namespace darkmass
