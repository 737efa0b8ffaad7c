#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "falsimeter/classify.hpp"
#include "falsimeter/falseness.hpp"
#include "falsimeter/stats.hpp"

namespace falsimeter::svg {

std::string escape(std::string_view s);

/// Minimal SVG builder for unit-square plots. Data coordinates in [0,1]^2
/// map onto a square plot area with y pointing up.
class Canvas {
public:
    Canvas(std::string title, std::string_view header_comment);

    double px(double x) const noexcept;
    double py(double y) const noexcept;
    double scale() const noexcept { return kPlot; }

    /// Raw element markup, already well-formed.
    void add(std::string element);
    void axes(std::string_view x_label, std::string_view y_label);

    std::string str() const;

    static constexpr double kMargin = 60.0;
    static constexpr double kPlot = 480.0;

private:
    std::string title_;
    std::string header_;
    std::vector<std::string> body_;
};

/// Stable color per index.
std::string_view palette(std::size_t i);

struct FitLine {
    std::string key;  // class or category label
    stats::RegressionFit fit;
};

/// Scatter of both classes with one <line> per fitted class.
std::string scatter_figure(std::span<const falseness::CasePoint> points, std::span<const FitLine> class_fits,
                           std::string_view header_comment);

/// Points colored by category with one <line> per fitted category.
std::string category_figure(std::span<const falseness::CasePoint> points, std::span<const FitLine> category_fits,
                            std::string_view header_comment);

struct EllipseOverlay {
    std::string group;
    stats::EllipseSummary ellipse;
    double mean_mahalanobis = 0.0;
};

/// Points plus k-sigma ellipses. Each <ellipse> carries data-centroid-x/y,
/// data-semi-major/minor and data-orientation at full precision.
std::string ellipse_figure(std::span<const falseness::CasePoint> points, std::span<const EllipseOverlay> ellipses,
                           std::string_view header_comment);

/// Heat grid of predicted classes (horizontal runs merged into one rect),
/// with the training points on top when given.
std::string boundary_figure(const classify::BoundaryGrid& grid, std::string_view model_name,
                            std::span<const falseness::CasePoint> points, std::string_view header_comment);

}  // namespace falsimeter::svg
