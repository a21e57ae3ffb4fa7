#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "baysc/similarity_graph.hpp"

namespace baysc {

struct RenderOptions {
    double panel_size = 480.0;  // pixels per panel side
    double margin = 20.0;
    double uncertainty_floor = 1e-4;  // log10 scale lower bound
};

// Domain map (one circle per cell, colored by domain number) and, when
// uncertainty is supplied, a second panel shaded by log10(uncertainty).
std::string render_domain_svg(const Coordinates& coords, std::span<const int> domains,
                              const std::optional<std::vector<double>>& uncertainty, const RenderOptions& opts = {});

// Fixed categorical palette indexed by domain number.
std::string domain_color(int domain);

}  // namespace baysc
