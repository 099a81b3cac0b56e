#ifndef OKM_PLOT_HPP
#define OKM_PLOT_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "okm/dataset.hpp"

namespace okm {

/// Cluster fill colors, indexed by cluster id modulo the palette size.
inline constexpr std::array<std::string_view, 10> kClusterPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#d62728",
};
inline constexpr std::string_view kPointColor = "#4c72b0";
inline constexpr std::string_view kHighlightColor = "#d62728";

struct PlotSpec {
    std::string x_variable;
    std::string y_variable;
    RowSelection highlight;
    std::optional<std::vector<std::size_t>> color_by;
    int width = 640;
    int height = 480;
    std::string title;
};

/// Throws if the variables are missing or equal, the size is too small, or color_by has the wrong length.
void validate(const Dataset& ds, const PlotSpec& spec);

/**
 * @brief Standalone SVG 1.1 scatter plot.
 *
 * Every row becomes one `<circle class="point ...">`. Highlighted rows are
 * filled red and get an extra `<circle class="annotation">` ring around them.
 * With `color_by`, each cluster id takes its palette color. Coordinates are
 * printed with two decimals so identical inputs give identical bytes.
 */
std::string render_scatter_svg(const Dataset& ds, const PlotSpec& spec);

} // namespace okm

#endif
