#pragma once

#include <span>
#include <string>
#include <vector>

#include "binquest/cluster.hpp"
#include "binquest/stats.hpp"

namespace binquest {

struct Rgb {
    int r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

// Piecewise-linear yes-predictability scale: p=0 -> low (yellow), p=0.5 ->
// mid (green), p=1 -> high (purple). Anchor inputs return anchor colors
// exactly.
struct ColorScale {
    Rgb low{230, 200, 40};
    Rgb mid{80, 160, 60};
    Rgb high{120, 40, 140};
};

Rgb grape_color(double p, const ColorScale& scale);

// Fixed bunch arrangement shared by every cluster icon: rows of 1,2,3,...
// circles, one per question in schema order, centers 2.2 r apart.
struct GrapeLayout {
    std::vector<std::pair<double, double>> positions;  // per question
    double radius = 12.0;
    std::vector<std::string> ordering;                 // question codes
};

GrapeLayout make_grape_layout(std::vector<std::string> codes, double radius = 12.0);

// Deterministic SVG byte stream; all numbers rendered with 6 decimals.
struct ChartDocument {
    std::string bytes;
};

// One bunch: circle per coordinate, filled by grape_color, tooltip with code
// and proportion.
ChartDocument render_grape_bunch(std::span<const double> proportions, const GrapeLayout& layout,
                                 const ColorScale& scale, const std::string& title);

// All of the model's clusters side by side on the shared layout.
ChartDocument render_grapeshape(const ClusterModel& model, const GrapeLayout& layout,
                                const ColorScale& scale);

struct HalfPieSpec {
    ConditionalStats cond;
    double alpha = 0.05;
    double radius = 120.0;
};

// Angles in degrees from the left end of the baseline, sweeping over the top.
// Margins are centered on the conditional lines with half-width
// z_{alpha/2} * sqrt(p_a (1 - p_a) / n_stratum) * 180, the standard error the
// proportion test uses, so the drawn test and the numeric test always agree:
// the divider falls outside the margin exactly when the z test rejects.
struct HalfPieGeometry {
    double divider_deg = 0.0;          // black line; orange sector spans [0, divider]
    double cond_b_deg = 0.0;           // turquoise line
    double cond_b_margin_deg = 0.0;    // half-width, before clamping to [0, 180]
    double cond_not_b_deg = 0.0;       // magenta line
    double cond_not_b_margin_deg = 0.0;
};

HalfPieGeometry halfpie_geometry(const ConditionalStats& cond, double alpha);

ChartDocument render_halfpie(const HalfPieSpec& spec);

// Simple labeled bar chart (used for per-cluster segment rates).
ChartDocument render_bar_chart(std::span<const std::string> labels, std::span<const double> values,
                               const std::string& title);

// Static file index, entries sorted.
std::string gallery_html(std::vector<std::string> files);

}  // namespace binquest
