#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "falsimeter/falseness.hpp"
#include "falsimeter/stats.hpp"

namespace falsimeter::classify {

using falseness::ClassLabel;
using stats::Point2;

enum class ModelKind { logistic_regression, naive_bayes, qda, linear_svm, random_forest, decision_tree };

inline constexpr std::array kAllModels = {ModelKind::logistic_regression, ModelKind::naive_bayes,
                                          ModelKind::qda,                 ModelKind::linear_svm,
                                          ModelKind::random_forest,       ModelKind::decision_tree};

std::string_view to_string(ModelKind kind) noexcept;
/// "lr", "nb", "qda", "svm", "rf", "dt"
std::string_view short_name(ModelKind kind) noexcept;
/// Accepts the long or the short name.
std::optional<ModelKind> parse_model_kind(std::string_view s) noexcept;
/// Comma-separated list; throws ConfigError on unknown names.
std::vector<ModelKind> parse_model_list(std::string_view csv);
bool is_linear(ModelKind kind) noexcept;

/// x = concealment, y = overstatement.
struct LabeledPoint2D {
    double x = 0.0;
    double y = 0.0;
    ClassLabel label = ClassLabel::false_news;
};

struct Hyperparams {
    struct {
        double l2_lambda = 1e-4;
        int max_iters = 500;
        double tolerance = 1e-8;
    } lr;
    struct {
        double c = 1.0;
        int epochs = 200;
    } svm;
    struct {
        int max_depth = 4;
        int min_leaf = 2;
    } tree;
    struct {
        int n_trees = 100;
        int max_depth = 4;
        /// Mixed into the fit seed.
        std::uint64_t bootstrap_seed = 0;
        bool bootstrap = true;
    } forest;
    struct {
        double variance_floor = 1e-9;
    } gaussian;
};

/// A fitted classifier. The decision score is positive toward false_news;
/// predict() returns false_news when the score is >= 0.
class Model {
public:
    virtual ~Model() = default;
    virtual ModelKind kind() const noexcept = 0;
    virtual double decision_score(Point2 p) const = 0;

    ClassLabel predict(Point2 p) const {
        return decision_score(p) >= 0.0 ? ClassLabel::false_news : ClassLabel::real_news;
    }
};

/// L2-regularized logistic regression fitted by damped Newton steps.
/// Parameters are {w_x, w_y, bias}; the bias is not penalized.
class LogisticRegression final : public Model {
public:
    using Params = std::array<double, 3>;

    static LogisticRegression fit(std::span<const LabeledPoint2D> data, const Hyperparams& hp);

    ModelKind kind() const noexcept override { return ModelKind::logistic_regression; }
    double decision_score(Point2 p) const override;

    const Params& params() const noexcept { return params_; }
    /// Objective value after each accepted step, starting at the initial point.
    const std::vector<double>& loss_trace() const noexcept { return loss_trace_; }

    /// Mean log-loss plus penalty, and its analytic gradient.
    static double loss(std::span<const LabeledPoint2D> data, const Params& w, double l2_lambda);
    static Params gradient(std::span<const LabeledPoint2D> data, const Params& w, double l2_lambda);

private:
    Params params_{};
    std::vector<double> loss_trace_;
};

/// Depth-limited CART tree with Gini impurity over the two coordinates.
class DecisionTree final : public Model {
public:
    static DecisionTree fit(std::span<const LabeledPoint2D> data, int max_depth, int min_leaf);

    ModelKind kind() const noexcept override { return ModelKind::decision_tree; }
    double decision_score(Point2 p) const override;

    std::size_t node_count() const noexcept { return nodes_.size(); }

private:
    struct Node {
        int feature = -1;  // -1 for a leaf
        double threshold = 0.0;
        std::size_t left = 0;
        std::size_t right = 0;
        double false_fraction = 0.0;
    };

    std::size_t grow(std::span<const LabeledPoint2D> data, std::vector<std::size_t>& idx, int depth, int max_depth,
                     int min_leaf);

    std::vector<Node> nodes_;
};

/// Fits `kind`. Deterministic for a given (data order, params, seed).
/// Throws DomainError unless each class has at least 2 points.
std::unique_ptr<Model> fit_model(ModelKind kind, std::span<const LabeledPoint2D> data, const Hyperparams& params,
                                 std::uint64_t seed);

double accuracy(const Model& model, std::span<const LabeledPoint2D> data);

// -- cross-validation --------------------------------------------------------

/// Stratified fold assignment with a seeded shuffle per class. Returns the
/// test indices of each fold, ascending. Throws DomainError naming the class
/// when it has fewer points than folds.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const LabeledPoint2D> data, int folds,
                                                       std::uint64_t seed);

struct ModelCV {
    ModelKind kind = ModelKind::logistic_regression;
    double mean_accuracy = 0.0;
    /// Population standard deviation of the fold accuracies.
    double std_dev = 0.0;
    std::vector<double> fold_accuracies;
};

struct CVReport {
    /// Sorted by descending mean accuracy; ties keep the requested order.
    std::vector<ModelCV> models;
    int fold_count = 0;
    std::uint64_t seed = 0;
};

CVReport cross_validate(std::span<const ModelKind> kinds, std::span<const LabeledPoint2D> data,
                        const Hyperparams& params, int folds, std::uint64_t seed);

void write_cv_csv(std::ostream& out, const CVReport& report, std::string_view header_comment = {});

// -- decision grids ----------------------------------------------------------

/// Predictions at cell centers over [0,1]^2, row-major, row 0 at the bottom.
struct BoundaryGrid {
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::vector<ClassLabel> labels;

    ClassLabel at(std::size_t col, std::size_t row) const { return labels[row * cols + col]; }
    static Point2 cell_center(std::size_t col, std::size_t row, std::size_t cols, std::size_t rows) {
        return {(static_cast<double>(col) + 0.5) / static_cast<double>(cols),
                (static_cast<double>(row) + 0.5) / static_cast<double>(rows)};
    }
};

/// Throws DomainError for a zero dimension.
BoundaryGrid decision_grid(const Model& model, std::size_t cols, std::size_t rows);

/// `cols rows` line, then one line per row (bottom row first) of 0/1 values,
/// 1 = false_news.
void write_grid(std::ostream& out, const BoundaryGrid& grid, std::string_view header_comment = {});
BoundaryGrid read_grid(std::istream& in);

}  // namespace falsimeter::classify
