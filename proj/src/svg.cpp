#include "falsimeter/svg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "falsimeter/text.hpp"

namespace falsimeter::svg {

using text::format;

std::string escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

namespace {

std::string comment_text(std::string_view s) {
    // "--" is not allowed inside an XML comment
    std::string out(s);
    for (std::size_t pos; (pos = out.find("--")) != std::string::npos;) out.replace(pos, 2, "- -");
    return out;
}

std::string num(double v) { return text::fixed(v, 3); }
std::string exact(double v) { return format("%.17g", v); }

std::string_view class_color(falseness::ClassLabel l) {
    return l == falseness::ClassLabel::false_news ? "#d62728" : "#1f77b4";
}

}  // namespace

std::string_view palette(std::size_t i) {
    static constexpr std::string_view kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return kColors[i % std::size(kColors)];
}

Canvas::Canvas(std::string title, std::string_view header_comment)
    : title_(std::move(title)), header_(header_comment) {}

double Canvas::px(double x) const noexcept { return kMargin + x * kPlot; }
double Canvas::py(double y) const noexcept { return kMargin + (1.0 - y) * kPlot; }

void Canvas::add(std::string element) { body_.push_back(std::move(element)); }

void Canvas::axes(std::string_view x_label, std::string_view y_label) {
    add(format(R"(<path class="frame" d="M%s %s H%s V%s H%s Z" fill="none" stroke="#333" stroke-width="1"/>)",
               num(px(0)).c_str(), num(py(0)).c_str(), num(px(1)).c_str(), num(py(1)).c_str(), num(px(0)).c_str()));
    for (int i = 0; i <= 10; ++i) {
        const double v = i / 10.0;
        add(format(R"(<text x="%s" y="%s" font-size="10" text-anchor="middle">%.1f</text>)", num(px(v)).c_str(),
                   num(py(0) + 14).c_str(), v));
        add(format(R"(<text x="%s" y="%s" font-size="10" text-anchor="end">%.1f</text>)", num(px(0) - 4).c_str(),
                   num(py(v) + 3).c_str(), v));
    }
    add(format(R"(<text x="%s" y="%s" font-size="12" text-anchor="middle">%s</text>)", num(px(0.5)).c_str(),
               num(py(0) + 34).c_str(), escape(x_label).c_str()));
    add(format(R"x(<text x="%s" y="%s" font-size="12" text-anchor="middle" transform="rotate(-90 %s %s)">%s</text>)x",
               num(px(0) - 38).c_str(), num(py(0.5)).c_str(), num(px(0) - 38).c_str(), num(py(0.5)).c_str(),
               escape(y_label).c_str()));
}

std::string Canvas::str() const {
    const double size = 2 * kMargin + kPlot;
    std::string out;
    if (!header_.empty()) out += "<!-- " + comment_text(header_) + " -->\n";
    out += format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="%s" height="%s" viewBox="0 0 %s %s">)",
                  num(size).c_str(), num(size).c_str(), num(size).c_str(), num(size).c_str());
    out += "\n<title>" + escape(title_) + "</title>\n";
    out += format(R"(<rect class="background" x="0" y="0" width="%s" height="%s" fill="#ffffff"/>)",
                  num(size).c_str(), num(size).c_str());
    out += '\n';
    for (const auto& e : body_) out += e + '\n';
    out += "</svg>\n";
    return out;
}

namespace {

void add_point(Canvas& c, const falseness::CasePoint& p, std::string_view color) {
    c.add(format(R"(<circle cx="%s" cy="%s" r="3.5" fill="%s" fill-opacity="0.75" data-case="%s" data-class="%s"/>)",
                 num(c.px(p.score.concealment)).c_str(), num(c.py(p.score.overstatement)).c_str(),
                 std::string(color).c_str(), escape(p.case_id).c_str(),
                 std::string(falseness::to_string(p.label)).c_str()));
}

// Clips y = a + b x to the unit square's x range [0, 1].
void add_fit_line(Canvas& c, const FitLine& f, std::string_view color, std::string_view attr) {
    c.add(format(R"(<line x1="%s" y1="%s" x2="%s" y2="%s" stroke="%s" stroke-width="2" %s="%s" )"
                 R"(data-slope="%s" data-intercept="%s" data-r-squared="%s"/>)",
                 num(c.px(0)).c_str(), num(c.py(f.fit.predict(0))).c_str(), num(c.px(1)).c_str(),
                 num(c.py(f.fit.predict(1))).c_str(), std::string(color).c_str(), std::string(attr).c_str(),
                 escape(f.key).c_str(), exact(f.fit.slope).c_str(), exact(f.fit.intercept).c_str(),
                 exact(f.fit.r_squared).c_str()));
}

void legend(Canvas& c, std::size_t row, std::string_view color, std::string_view label) {
    const double x = c.px(1) - 150;
    const double y = c.py(1) + 16 + 16 * static_cast<double>(row);
    c.add(format(R"(<rect x="%s" y="%s" width="10" height="10" fill="%s"/>)", num(x).c_str(), num(y - 9).c_str(),
                 std::string(color).c_str()));
    c.add(format(R"(<text x="%s" y="%s" font-size="11">%s</text>)", num(x + 14).c_str(), num(y).c_str(),
                 escape(label).c_str()));
}

std::vector<std::string> category_order(std::span<const falseness::CasePoint> points) {
    std::vector<std::string> labels;
    for (const auto& p : points)
        if (std::find(labels.begin(), labels.end(), p.category.label) == labels.end())
            labels.push_back(p.category.label);
    std::sort(labels.begin(), labels.end());
    return labels;
}

}  // namespace

std::string scatter_figure(std::span<const falseness::CasePoint> points, std::span<const FitLine> class_fits,
                           std::string_view header_comment) {
    Canvas c("Concealment vs overstatement by class", header_comment);
    c.axes("concealment", "overstatement");
    for (const auto& p : points) add_point(c, p, class_color(p.label));
    std::size_t row = 0;
    for (const auto& f : class_fits) {
        const auto label = falseness::parse_class_label(f.key).value_or(falseness::ClassLabel::false_news);
        add_fit_line(c, f, class_color(label), "data-class");
        legend(c, row++, class_color(label),
               f.key + format(" y=%.4fx%+.4f", f.fit.slope, f.fit.intercept));
    }
    return c.str();
}

std::string category_figure(std::span<const falseness::CasePoint> points, std::span<const FitLine> category_fits,
                            std::string_view header_comment) {
    Canvas c("Concealment vs overstatement by category", header_comment);
    c.axes("concealment", "overstatement");
    const auto labels = category_order(points);
    const auto color_of = [&](const std::string& label) {
        const auto it = std::find(labels.begin(), labels.end(), label);
        return palette(static_cast<std::size_t>(it - labels.begin()));
    };
    for (const auto& p : points) add_point(c, p, color_of(p.category.label));
    for (const auto& f : category_fits) add_fit_line(c, f, color_of(f.key), "data-category");
    std::size_t row = 0;
    for (const auto& l : labels) legend(c, row++, color_of(l), l);
    return c.str();
}

std::string ellipse_figure(std::span<const falseness::CasePoint> points, std::span<const EllipseOverlay> ellipses,
                           std::string_view header_comment) {
    Canvas c("Confidence ellipses", header_comment);
    c.axes("concealment", "overstatement");
    const auto labels = category_order(points);
    const auto color_of = [&](const std::string& label) {
        const auto it = std::find(labels.begin(), labels.end(), label);
        return palette(static_cast<std::size_t>(it - labels.begin()));
    };
    for (const auto& p : points) add_point(c, p, color_of(p.category.label));
    for (const auto& o : ellipses) {
        const auto& e = o.ellipse;
        const double degrees = -e.orientation * 180.0 / std::numbers::pi;
        const std::string cx = num(c.px(e.centroid.x));
        const std::string cy = num(c.py(e.centroid.y));
        c.add(format(R"x(<ellipse cx="%s" cy="%s" rx="%s" ry="%s" transform="rotate(%s %s %s)" fill="none" )x"
                     R"(stroke="%s" stroke-width="1.5" data-group="%s" data-centroid-x="%s" data-centroid-y="%s" )"
                     R"(data-semi-major="%s" data-semi-minor="%s" data-orientation="%s" data-k-sigma="%s" )"
                     R"(data-mahalanobis="%s"/>)",
                     cx.c_str(), cy.c_str(), num(e.semi_major * c.scale()).c_str(),
                     num(e.semi_minor * c.scale()).c_str(), num(degrees).c_str(), cx.c_str(), cy.c_str(),
                     std::string(color_of(o.group)).c_str(), escape(o.group).c_str(), exact(e.centroid.x).c_str(),
                     exact(e.centroid.y).c_str(), exact(e.semi_major).c_str(), exact(e.semi_minor).c_str(),
                     exact(e.orientation).c_str(), exact(e.k_sigma).c_str(), exact(o.mean_mahalanobis).c_str()));
        c.add(format(R"(<circle class="centroid" cx="%s" cy="%s" r="5" fill="none" stroke="%s" stroke-width="2"/>)",
                     cx.c_str(), cy.c_str(), std::string(color_of(o.group)).c_str()));
    }
    std::size_t row = 0;
    for (const auto& l : labels) legend(c, row++, color_of(l), l);
    return c.str();
}

std::string boundary_figure(const classify::BoundaryGrid& grid, std::string_view model_name,
                            std::span<const falseness::CasePoint> points, std::string_view header_comment) {
    Canvas c("Decision boundary: " + std::string(model_name), header_comment);
    const double cw = c.scale() / static_cast<double>(grid.cols);
    const double ch = c.scale() / static_cast<double>(grid.rows);
    for (std::size_t r = 0; r < grid.rows; ++r) {
        std::size_t start = 0;
        while (start < grid.cols) {
            std::size_t end = start;
            while (end < grid.cols && grid.at(end, r) == grid.at(start, r)) ++end;
            const bool is_false = grid.at(start, r) == falseness::ClassLabel::false_news;
            c.add(format(R"(<rect x="%s" y="%s" width="%s" height="%s" fill="%s" fill-opacity="0.25"/>)",
                         num(c.px(0) + static_cast<double>(start) * cw).c_str(),
                         num(c.py(0) - static_cast<double>(r + 1) * ch).c_str(),
                         num(static_cast<double>(end - start) * cw).c_str(), num(ch).c_str(),
                         is_false ? "#d62728" : "#1f77b4"));
            start = end;
        }
    }
    c.axes("concealment", "overstatement");
    for (const auto& p : points) add_point(c, p, class_color(p.label));
    legend(c, 0, class_color(falseness::ClassLabel::false_news), "false_news");
    legend(c, 1, class_color(falseness::ClassLabel::real_news), "real_news");
    return c.str();
}

}  // namespace falsimeter::svg
