#include "binquest/charts.hpp"

#include <algorithm>
#include <cmath>

#include "binquest/error.hpp"
#include "binquest/textio.hpp"

namespace binquest {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string f6(double v) { return fmt_fixed(v, 6); }

std::string rgb(const Rgb& c) {
    return "rgb(" + std::to_string(c.r) + "," + std::to_string(c.g) + "," + std::to_string(c.b) + ")";
}

int lerp_channel(int a, int b, double t) {
    return static_cast<int>(std::lround(static_cast<double>(a) + (static_cast<double>(b) - a) * t));
}

Rgb lerp(const Rgb& a, const Rgb& b, double t) {
    return {lerp_channel(a.r, b.r, t), lerp_channel(a.g, b.g, t), lerp_channel(a.b, b.b, t)};
}

// Point on the semicircle at `deg` degrees from the left end of the baseline,
// sweeping over the top. SVG y grows downward.
std::pair<double, double> arc_point(double cx, double cy, double radius, double deg) {
    const double rad = deg * kPi / 180.0;
    return {cx - radius * std::cos(rad), cy - radius * std::sin(rad)};
}

void append_sector(std::string& out, double cx, double cy, double radius, double from_deg,
                   double to_deg, const std::string& fill, const std::string& extra) {
    if (!(to_deg > from_deg)) return;
    const auto [x0, y0] = arc_point(cx, cy, radius, from_deg);
    const auto [x1, y1] = arc_point(cx, cy, radius, to_deg);
    out += "<path d=\"M " + f6(cx) + " " + f6(cy) + " L " + f6(x0) + " " + f6(y0) + " A " +
           f6(radius) + " " + f6(radius) + " 0 0 1 " + f6(x1) + " " + f6(y1) + " Z\" fill=\"" +
           fill + "\"" + extra + "/>\n";
}

void append_radial_line(std::string& out, double cx, double cy, double radius, double deg,
                        const std::string& stroke, double width) {
    const auto [x, y] = arc_point(cx, cy, radius, deg);
    out += "<line x1=\"" + f6(cx) + "\" y1=\"" + f6(cy) + "\" x2=\"" + f6(x) + "\" y2=\"" + f6(y) +
           "\" stroke=\"" + stroke + "\" stroke-width=\"" + f6(width) + "\"/>\n";
}

std::string svg_open(double width, double height) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + f6(width) + "\" height=\"" +
           f6(height) + "\" viewBox=\"0 0 " + f6(width) + " " + f6(height) + "\">\n";
}

std::string escape_xml(std::string_view text) {
    std::string out;
    for (char c : text) {
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

}  // namespace

Rgb grape_color(double p, const ColorScale& scale) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("grape_color: p outside [0,1]");
    if (p <= 0.5) return lerp(scale.low, scale.mid, p / 0.5);
    return lerp(scale.mid, scale.high, (p - 0.5) / 0.5);
}

GrapeLayout make_grape_layout(std::vector<std::string> codes, double radius) {
    if (codes.empty()) throw std::invalid_argument("grape layout: no questions");
    if (radius <= 0.0) throw std::invalid_argument("grape layout: radius must be positive");
    GrapeLayout layout;
    layout.radius = radius;
    layout.ordering = std::move(codes);

    // Triangle of rows holding 1, 2, 3, ... grapes; the last row may be
    // partial and is centered like the others. Spacing 2.2 r keeps circles
    // at most tangential.
    const double spacing = 2.2 * radius;
    const std::size_t m = layout.ordering.size();
    std::size_t placed = 0;
    std::size_t row = 0;
    while (placed < m) {
        const std::size_t row_capacity = row + 1;
        const std::size_t in_row = std::min(row_capacity, m - placed);
        for (std::size_t i = 0; i < in_row; ++i) {
            const double x = (static_cast<double>(i) - static_cast<double>(in_row - 1) / 2.0) * spacing;
            const double y = static_cast<double>(row) * spacing;
            layout.positions.emplace_back(x, y);
        }
        placed += in_row;
        ++row;
    }
    return layout;
}

ChartDocument render_grape_bunch(std::span<const double> proportions, const GrapeLayout& layout,
                                 const ColorScale& scale, const std::string& title) {
    if (proportions.size() != layout.positions.size()) {
        throw std::invalid_argument("grape bunch: proportion count does not match layout");
    }
    double min_x = 0.0, max_x = 0.0, max_y = 0.0;
    for (const auto& [x, y] : layout.positions) {
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        max_y = std::max(max_y, y);
    }
    const double pad = layout.radius + 8.0;
    const double ox = pad - min_x;
    const double oy = pad + 16.0;
    const double width = (max_x - min_x) + 2.0 * pad;
    const double height = max_y + 2.0 * pad + 16.0;

    std::string out = svg_open(width, height);
    out += "<title>" + escape_xml(title) + "</title>\n";
    out += "<text x=\"" + f6(width / 2.0) + "\" y=\"14\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\">" +
           escape_xml(title) + "</text>\n";
    for (std::size_t i = 0; i < proportions.size(); ++i) {
        const Rgb color = grape_color(proportions[i], scale);
        const auto& [x, y] = layout.positions[i];
        out += "<circle cx=\"" + f6(x + ox) + "\" cy=\"" + f6(y + oy) + "\" r=\"" +
               f6(layout.radius) + "\" fill=\"" + rgb(color) +
               "\" stroke=\"rgb(60,60,60)\" stroke-width=\"1.000000\">";
        out += "<title>" + escape_xml(layout.ordering[i]) + " p=" + f6(proportions[i]) + "</title>";
        out += "</circle>\n";
    }
    out += "</svg>\n";
    return {std::move(out)};
}

ChartDocument render_grapeshape(const ClusterModel& model, const GrapeLayout& layout,
                                const ColorScale& scale) {
    if (model.centroids.empty()) throw std::invalid_argument("grapeshape: model has no centroids");
    for (const auto& c : model.centroids) {
        if (c.size() != layout.positions.size()) {
            throw std::invalid_argument("grapeshape: centroid size does not match layout");
        }
    }
    // One bunch per cluster, side by side on the shared layout.
    std::vector<ChartDocument> bunches;
    double bunch_width = 0.0, bunch_height = 0.0;
    {
        double min_x = 0.0, max_x = 0.0, max_y = 0.0;
        for (const auto& [x, y] : layout.positions) {
            min_x = std::min(min_x, x);
            max_x = std::max(max_x, x);
            max_y = std::max(max_y, y);
        }
        const double pad = layout.radius + 8.0;
        bunch_width = (max_x - min_x) + 2.0 * pad;
        bunch_height = max_y + 2.0 * pad + 16.0;
    }
    std::string out = svg_open(bunch_width * static_cast<double>(model.centroids.size()), bunch_height);
    for (std::size_t c = 0; c < model.centroids.size(); ++c) {
        ChartDocument bunch = render_grape_bunch(model.centroids[c], layout, scale,
                                                 "cluster " + std::to_string(c));
        // Inline the bunch's elements shifted into its slot.
        out += "<g transform=\"translate(" + f6(bunch_width * static_cast<double>(c)) + " 0.000000)\">\n";
        const std::string& body = bunch.bytes;
        const std::size_t start = body.find('\n') + 1;
        const std::size_t end = body.rfind("</svg>");
        out += body.substr(start, end - start);
        out += "</g>\n";
    }
    out += "</svg>\n";
    return {std::move(out)};
}

HalfPieGeometry halfpie_geometry(const ConditionalStats& cond, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("halfpie: alpha outside (0,1)");
    if (cond.n_b <= 0 || cond.n_b >= cond.n) throw DataError("halfpie: empty stratum");
    HalfPieGeometry g;
    g.divider_deg = 180.0 * cond.p_a;
    g.cond_b_deg = 180.0 * cond.p_a_given_b;
    g.cond_not_b_deg = 180.0 * cond.p_a_given_not_b;
    // Margin half-widths use the baseline-proportion standard error, the same
    // quantity the z test scales by, which keeps the drawn test and the
    // numeric test in exact agreement.
    g.cond_b_margin_deg = 180.0 * ci_margin(cond.p_a, cond.n_b, alpha);
    g.cond_not_b_margin_deg = 180.0 * ci_margin(cond.p_a, cond.n - cond.n_b, alpha);
    return g;
}

ChartDocument render_halfpie(const HalfPieSpec& spec) {
    const HalfPieGeometry g = halfpie_geometry(spec.cond, spec.alpha);
    const double radius = spec.radius;
    const double pad = 20.0;
    const double width = 2.0 * radius + 2.0 * pad;
    const double cx = width / 2.0;
    const double cy = pad + radius;
    const double height = radius + 2.0 * pad + 40.0;

    const std::string orange = "rgb(255,165,0)";
    const std::string blue = "rgb(70,130,180)";
    const std::string turquoise = "rgb(64,224,208)";
    const std::string magenta = "rgb(255,0,255)";

    std::string out = svg_open(width, height);
    out += "<title>" + escape_xml(spec.cond.a_code + " given " + spec.cond.b_code) + "</title>\n";
    append_sector(out, cx, cy, radius, 0.0, g.divider_deg, orange, "");
    append_sector(out, cx, cy, radius, g.divider_deg, 180.0, blue, "");

    // Confidence margins, clamped to the semicircle.
    const std::string translucent = " fill-opacity=\"0.300000\"";
    append_sector(out, cx, cy, radius, std::max(0.0, g.cond_b_deg - g.cond_b_margin_deg),
                  std::min(180.0, g.cond_b_deg + g.cond_b_margin_deg), turquoise, translucent);
    append_sector(out, cx, cy, radius, std::max(0.0, g.cond_not_b_deg - g.cond_not_b_margin_deg),
                  std::min(180.0, g.cond_not_b_deg + g.cond_not_b_margin_deg), magenta, translucent);

    append_radial_line(out, cx, cy, radius, g.divider_deg, "rgb(0,0,0)", 2.0);
    append_radial_line(out, cx, cy, radius, g.cond_b_deg, turquoise, 2.0);
    append_radial_line(out, cx, cy, radius, g.cond_not_b_deg, magenta, 2.0);
    out += "<line x1=\"" + f6(cx - radius) + "\" y1=\"" + f6(cy) + "\" x2=\"" + f6(cx + radius) +
           "\" y2=\"" + f6(cy) + "\" stroke=\"rgb(0,0,0)\" stroke-width=\"1.000000\"/>\n";

    const auto& c = spec.cond;
    out += "<text x=\"" + f6(cx) + "\" y=\"" + f6(cy + 18.0) +
           "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">" +
           escape_xml("A=" + c.a_code + " B=" + c.b_code) + "</text>\n";
    out += "<text x=\"" + f6(cx) + "\" y=\"" + f6(cy + 32.0) +
           "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">" +
           escape_xml("P(A)=" + f6(c.p_a) + " P(A|B)=" + f6(c.p_a_given_b) + " (n=" +
                      std::to_string(c.n_b) + ") P(A|!B)=" + f6(c.p_a_given_not_b) + " (n=" +
                      std::to_string(c.n - c.n_b) + ")") +
           "</text>\n";
    out += "</svg>\n";
    return {std::move(out)};
}

ChartDocument render_bar_chart(std::span<const std::string> labels, std::span<const double> values,
                               const std::string& title) {
    if (labels.size() != values.size()) throw std::invalid_argument("bar chart: size mismatch");
    if (labels.empty()) throw std::invalid_argument("bar chart: no bars");
    const double bar_w = 36.0, gap = 12.0, plot_h = 160.0, pad = 20.0;
    const double width = pad * 2.0 + static_cast<double>(labels.size()) * (bar_w + gap) - gap;
    const double height = plot_h + 70.0;
    double max_v = 0.0;
    for (double v : values) max_v = std::max(max_v, v);
    if (max_v <= 0.0) max_v = 1.0;

    std::string out = svg_open(width, height);
    out += "<title>" + escape_xml(title) + "</title>\n";
    out += "<text x=\"" + f6(width / 2.0) + "\" y=\"14\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\">" +
           escape_xml(title) + "</text>\n";
    const double base_y = 20.0 + plot_h;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double h = values[i] / max_v * plot_h;
        const double x = pad + static_cast<double>(i) * (bar_w + gap);
        out += "<rect x=\"" + f6(x) + "\" y=\"" + f6(base_y - h) + "\" width=\"" + f6(bar_w) +
               "\" height=\"" + f6(h) + "\" fill=\"rgb(70,130,180)\"/>\n";
        out += "<text x=\"" + f6(x + bar_w / 2.0) + "\" y=\"" + f6(base_y + 14.0) +
               "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"10\">" +
               escape_xml(labels[i]) + "</text>\n";
        out += "<text x=\"" + f6(x + bar_w / 2.0) + "\" y=\"" + f6(base_y + 28.0) +
               "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"10\">" +
               f6(values[i]) + "</text>\n";
    }
    out += "<line x1=\"" + f6(pad) + "\" y1=\"" + f6(base_y) + "\" x2=\"" + f6(width - pad) +
           "\" y2=\"" + f6(base_y) + "\" stroke=\"rgb(0,0,0)\" stroke-width=\"1.000000\"/>\n";
    out += "</svg>\n";
    return {std::move(out)};
}

std::string gallery_html(std::vector<std::string> files) {
    std::sort(files.begin(), files.end());
    std::string out =
        "<!DOCTYPE html>\n<html>\n<head><meta charset=\"utf-8\"><title>binquest charts</title></head>\n"
        "<body>\n<h1>Charts</h1>\n<ul>\n";
    for (const auto& f : files) {
        out += "<li><a href=\"" + f + "\">" + escape_xml(f) + "</a></li>\n";
    }
    out += "</ul>\n</body>\n</html>\n";
    return out;
}

}  // namespace binquest
