#pragma once

#include <cstddef>
#include <span>

namespace falsimeter::stats {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

// -- distribution functions --------------------------------------------------

/// Standard normal CDF.
double normal_cdf(double z);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

/// Student-t CDF. Throws DomainError for df < 1.
double student_t_cdf(double t, int df);

/// 2 * P(T_df > |t|), evaluated directly in the tail so tiny p-values keep
/// their precision.
double student_t_two_tailed_p(double t, int df);

// -- regression --------------------------------------------------------------

struct RegressionFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t n = 0;
    double slope_std_error = 0.0;
    /// SSres / (n - 2).
    double residual_variance = 0.0;

    double predict(double x) const noexcept { return intercept + slope * x; }
};

/// Ordinary least squares y = intercept + slope * x.
/// Throws DomainError for n < 3, constant x ("degenerate predictor"), or
/// constant y ("degenerate response").
RegressionFit linear_fit(std::span<const Point2> points);

struct SlopeTest {
    double t = 0.0;
    int df = 0;
    double p_two_tailed = 1.0;
};

/// Unpooled-SE slope difference test, df = n_a + n_b - 4.
SlopeTest compare_slopes(const RegressionFit& a, const RegressionFit& b);

// -- rank test ---------------------------------------------------------------

struct RankTest {
    double u_a = 0.0;
    double u_b = 0.0;
    /// min(u_a, u_b)
    double u_statistic = 0.0;
    double z_score = 0.0;
    double p_two_tailed = 1.0;
};

/// Mann-Whitney U with average ranks for ties and the tie-corrected normal
/// approximation. Throws DomainError for an empty sample or when every
/// value is identical.
RankTest mann_whitney_u(std::span<const double> a, std::span<const double> b);

// -- covariance geometry -----------------------------------------------------

/// Symmetric 2x2 matrix.
struct Cov2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    double det() const noexcept { return xx * yy - xy * xy; }
};

Point2 centroid(std::span<const Point2> points);
/// Sample covariance (n - 1 denominator).
Cov2 sample_covariance(std::span<const Point2> points);

struct EllipseSummary {
    Point2 centroid;
    double semi_major = 0.0;
    double semi_minor = 0.0;
    /// Angle of the major axis from +x, radians in [0, pi).
    double orientation = 0.0;
    double k_sigma = 3.0;
};

/// k-sigma ellipse from the eigendecomposition of the sample covariance.
/// Throws DomainError for n < 3 or a singular covariance ("collinear points").
EllipseSummary covariance_ellipse(std::span<const Point2> points, double k_sigma);

struct MahalanobisSummary {
    Point2 centroid;
    Cov2 covariance;
    double mean_distance = 0.0;
};

double mahalanobis_distance(Point2 p, Point2 center, const Cov2& cov);

/// Mean distance of the points from their own centroid under their own
/// covariance. Throws DomainError for n < 3 or a singular covariance.
MahalanobisSummary mahalanobis_summary(std::span<const Point2> points);

}  // namespace falsimeter::stats
