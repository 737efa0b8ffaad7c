#include "falsimeter/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include "falsimeter/error.hpp"

namespace falsimeter::stats {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

namespace {

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 1000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

// I_x(a, b) with y = 1 - x supplied separately to avoid cancellation.
double ibeta(double a, double b, double x, double y) {
    if (x <= 0.0) return 0.0;
    if (y <= 0.0) return 1.0;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log(y);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, y) / b;
}

void require_df(int df) {
    if (df < 1) throw DomainError("Student-t needs df >= 1, got " + std::to_string(df));
}

// P(T > |t|)
double student_t_upper_tail(double t, int df) {
    const double v = df;
    const double t2 = t * t;
    return 0.5 * ibeta(v / 2.0, 0.5, v / (v + t2), t2 / (v + t2));
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) throw DomainError("incomplete beta needs a, b > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete beta needs x in [0,1]");
    return ibeta(a, b, x, 1.0 - x);
}

double student_t_cdf(double t, int df) {
    require_df(df);
    if (std::isnan(t)) return t;
    if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
    const double tail = student_t_upper_tail(t, df);
    return t > 0 ? 1.0 - tail : tail;
}

double student_t_two_tailed_p(double t, int df) {
    require_df(df);
    if (std::isinf(t)) return 0.0;
    return std::clamp(2.0 * student_t_upper_tail(t, df), 0.0, 1.0);
}

// -- regression --------------------------------------------------------------

RegressionFit linear_fit(std::span<const Point2> points) {
    const std::size_t n = points.size();
    if (n < 3) throw DomainError("linear fit needs at least 3 points, got " + std::to_string(n));
    const bool constant_x = std::all_of(points.begin(), points.end(), [&](const Point2& p) {
        return p.x == points.front().x;
    });
    if (constant_x) throw DomainError("degenerate predictor");
    const bool constant_y = std::all_of(points.begin(), points.end(), [&](const Point2& p) {
        return p.y == points.front().y;
    });
    if (constant_y) throw DomainError("degenerate response");

    const Point2 mean = centroid(points);
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (const auto& p : points) {
        const double dx = p.x - mean.x;
        const double dy = p.y - mean.y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }

    RegressionFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = mean.y - fit.slope * mean.x;
    double ss_res = 0.0;
    for (const auto& p : points) {
        const double e = p.y - fit.predict(p.x);
        ss_res += e * e;
    }
    fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    fit.residual_variance = ss_res / static_cast<double>(n - 2);
    fit.slope_std_error = std::sqrt(fit.residual_variance / sxx);
    return fit;
}

SlopeTest compare_slopes(const RegressionFit& a, const RegressionFit& b) {
    if (a.n < 3 || b.n < 3) throw DomainError("slope comparison needs fits with n >= 3");
    SlopeTest test;
    test.df = static_cast<int>(a.n + b.n) - 4;
    const double diff = a.slope - b.slope;
    const double se = std::sqrt(a.slope_std_error * a.slope_std_error + b.slope_std_error * b.slope_std_error);
    if (se == 0.0) {
        if (diff != 0.0) throw DomainError("slopes differ but both standard errors are zero");
        test.t = 0.0;
        test.p_two_tailed = 1.0;
        return test;
    }
    test.t = diff / se;
    test.p_two_tailed = student_t_two_tailed_p(test.t, test.df);
    return test;
}

// -- rank test ---------------------------------------------------------------

RankTest mann_whitney_u(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw DomainError("Mann-Whitney needs two non-empty samples");
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    const std::size_t n = na + nb;

    std::vector<std::pair<double, bool>> pooled;  // value, from_a
    pooled.reserve(n);
    for (double v : a) pooled.emplace_back(v, true);
    for (double v : b) pooled.emplace_back(v, false);
    std::sort(pooled.begin(), pooled.end(), [](const auto& l, const auto& r) { return l.first < r.first; });

    double rank_sum_a = 0.0;
    double tie_term = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && pooled[j].first == pooled[i].first) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1 .. j
        for (std::size_t k = i; k < j; ++k)
            if (pooled[k].second) rank_sum_a += avg_rank;
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }

    const double dna = static_cast<double>(na);
    const double dnb = static_cast<double>(nb);
    const double dn = static_cast<double>(n);
    RankTest r;
    r.u_a = rank_sum_a - dna * (dna + 1.0) / 2.0;
    r.u_b = dna * dnb - r.u_a;
    r.u_statistic = std::min(r.u_a, r.u_b);

    const double variance = dna * dnb / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
    if (!(variance > 0.0)) throw DomainError("degenerate ranking");
    r.z_score = (r.u_statistic - dna * dnb / 2.0) / std::sqrt(variance);
    r.p_two_tailed = std::clamp(std::erfc(std::fabs(r.z_score) / std::numbers::sqrt2), 0.0, 1.0);
    return r;
}

// -- covariance geometry -----------------------------------------------------

Point2 centroid(std::span<const Point2> points) {
    if (points.empty()) throw DomainError("centroid of an empty point set");
    Point2 c;
    for (const auto& p : points) {
        c.x += p.x;
        c.y += p.y;
    }
    c.x /= static_cast<double>(points.size());
    c.y /= static_cast<double>(points.size());
    return c;
}

Cov2 sample_covariance(std::span<const Point2> points) {
    if (points.size() < 2) throw DomainError("sample covariance needs at least 2 points");
    const Point2 c = centroid(points);
    Cov2 cov;
    for (const auto& p : points) {
        const double dx = p.x - c.x;
        const double dy = p.y - c.y;
        cov.xx += dx * dx;
        cov.xy += dx * dy;
        cov.yy += dy * dy;
    }
    const double denom = static_cast<double>(points.size() - 1);
    cov.xx /= denom;
    cov.xy /= denom;
    cov.yy /= denom;
    return cov;
}

namespace {

Cov2 checked_covariance(std::span<const Point2> points) {
    if (points.size() < 3) throw DomainError("need at least 3 points, got " + std::to_string(points.size()));
    const Cov2 cov = sample_covariance(points);
    const double trace = cov.xx + cov.yy;
    if (!(trace > 0.0) || !(cov.det() > 1e-12 * trace * trace)) throw DomainError("collinear points");
    return cov;
}

}  // namespace

EllipseSummary covariance_ellipse(std::span<const Point2> points, double k_sigma) {
    if (!(k_sigma > 0.0)) throw DomainError("k_sigma must be positive");
    const Cov2 cov = checked_covariance(points);
    const double mean = 0.5 * (cov.xx + cov.yy);
    const double radius = std::hypot(0.5 * (cov.xx - cov.yy), cov.xy);
    const double major = mean + radius;
    const double minor = std::max(mean - radius, 0.0);

    EllipseSummary e;
    e.centroid = centroid(points);
    e.k_sigma = k_sigma;
    e.semi_major = k_sigma * std::sqrt(major);
    e.semi_minor = k_sigma * std::sqrt(minor);
    double angle = 0.5 * std::atan2(2.0 * cov.xy, cov.xx - cov.yy);
    if (angle < 0.0) angle += std::numbers::pi;
    if (angle >= std::numbers::pi) angle -= std::numbers::pi;
    e.orientation = angle;
    return e;
}

double mahalanobis_distance(Point2 p, Point2 center, const Cov2& cov) {
    const double det = cov.det();
    if (!(det > 0.0)) throw DomainError("covariance is not positive definite");
    const double dx = p.x - center.x;
    const double dy = p.y - center.y;
    // inverse of [[xx, xy], [xy, yy]] is [[yy, -xy], [-xy, xx]] / det
    const double q = (cov.yy * dx * dx - 2.0 * cov.xy * dx * dy + cov.xx * dy * dy) / det;
    return std::sqrt(std::max(q, 0.0));
}

MahalanobisSummary mahalanobis_summary(std::span<const Point2> points) {
    MahalanobisSummary s;
    s.covariance = checked_covariance(points);
    s.centroid = centroid(points);
    double total = 0.0;
    for (const auto& p : points) total += mahalanobis_distance(p, s.centroid, s.covariance);
    s.mean_distance = total / static_cast<double>(points.size());
    return s;
}

}  // namespace falsimeter::stats
