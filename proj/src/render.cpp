#include "baysc/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace baysc {

namespace {

constexpr std::array<const char*, 20> kPalette{
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#aec7e8", "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5", "#c49c94", "#f7b6d2", "#c7c7c7", "#dbdb8d", "#9edae5"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

// Dark blue (certain) to yellow (uncertain).
std::string ramp(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const int r = static_cast<int>(std::lround(68 + t * (253 - 68)));
    const int g = static_cast<int>(std::lround(1 + t * (231 - 1)));
    const int b = static_cast<int>(std::lround(84 + t * (37 - 84)));
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace

std::string domain_color(int domain) {
    const int idx = ((domain - 1) % static_cast<int>(kPalette.size()) + static_cast<int>(kPalette.size())) %
                    static_cast<int>(kPalette.size());
    return kPalette[static_cast<std::size_t>(idx)];
}

std::string render_domain_svg(const Coordinates& coords, std::span<const int> domains,
                              const std::optional<std::vector<double>>& uncertainty, const RenderOptions& opts) {
    const auto n = static_cast<std::size_t>(coords.n());
    if (domains.size() != n) throw std::invalid_argument("label count does not match coordinates");
    if (uncertainty && uncertainty->size() != n) throw std::invalid_argument("uncertainty count does not match coordinates");
    if (n == 0) throw std::invalid_argument("nothing to render");

    const double xmin = coords.positions.col(0).minCoeff();
    const double xmax = coords.positions.col(0).maxCoeff();
    const double ymin = coords.positions.col(1).minCoeff();
    const double ymax = coords.positions.col(1).maxCoeff();
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
    const double inner = opts.panel_size - 2.0 * opts.margin;
    const double scale = inner / span;
    const double radius = std::max(1.0, std::min(8.0, 0.45 * inner / std::sqrt(static_cast<double>(n))));
    const int panels = uncertainty ? 2 : 1;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(opts.panel_size * panels) << "\" height=\""
        << fmt(opts.panel_size + 24.0) << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    auto emit_panel = [&](int panel, const char* title, auto&& color_of) {
        const double x0 = panel * opts.panel_size;
        svg << "<g id=\"" << title << "\">\n";
        svg << "<text x=\"" << fmt(x0 + opts.margin) << "\" y=\"16\" font-family=\"sans-serif\" font-size=\"13\">"
            << title << "</text>\n";
        for (std::size_t i = 0; i < n; ++i) {
            const double cx = x0 + opts.margin + (coords.positions(static_cast<Eigen::Index>(i), 0) - xmin) * scale;
            // flip y so that larger coordinates appear higher
            const double cy = 24.0 + opts.margin + (ymax - coords.positions(static_cast<Eigen::Index>(i), 1)) * scale;
            svg << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\"" << fmt(radius) << "\" fill=\""
                << color_of(i) << "\"/>\n";
        }
        svg << "</g>\n";
    };

    emit_panel(0, "domains", [&](std::size_t i) { return domain_color(domains[i]); });
    if (uncertainty) {
        const double lo = std::log10(opts.uncertainty_floor);
        emit_panel(1, "log10-uncertainty", [&](std::size_t i) {
            const double u = std::max((*uncertainty)[i], opts.uncertainty_floor);
            return ramp((std::log10(u) - lo) / (0.0 - lo));
        });
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace baysc
