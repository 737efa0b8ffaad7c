#include "falsimeter/classify.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "falsimeter/error.hpp"
#include "falsimeter/random.hpp"
#include "falsimeter/text.hpp"

namespace falsimeter::classify {

std::string_view to_string(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::logistic_regression: return "logistic_regression";
        case ModelKind::naive_bayes: return "naive_bayes";
        case ModelKind::qda: return "qda";
        case ModelKind::linear_svm: return "linear_svm";
        case ModelKind::random_forest: return "random_forest";
        case ModelKind::decision_tree: return "decision_tree";
    }
    return "logistic_regression";
}

std::string_view short_name(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::logistic_regression: return "lr";
        case ModelKind::naive_bayes: return "nb";
        case ModelKind::qda: return "qda";
        case ModelKind::linear_svm: return "svm";
        case ModelKind::random_forest: return "rf";
        case ModelKind::decision_tree: return "dt";
    }
    return "lr";
}

std::optional<ModelKind> parse_model_kind(std::string_view s) noexcept {
    for (auto k : kAllModels)
        if (s == to_string(k) || s == short_name(k)) return k;
    return std::nullopt;
}

std::vector<ModelKind> parse_model_list(std::string_view csv) {
    std::vector<ModelKind> kinds;
    for (const auto& part : text::split(csv, ',')) {
        const auto name = text::trim(part);
        const auto k = parse_model_kind(name);
        if (!k) throw ConfigError("unknown model '" + std::string(name) + "'");
        if (std::find(kinds.begin(), kinds.end(), *k) == kinds.end()) kinds.push_back(*k);
    }
    if (kinds.empty()) throw ConfigError("empty model list");
    return kinds;
}

bool is_linear(ModelKind kind) noexcept {
    return kind == ModelKind::logistic_regression || kind == ModelKind::linear_svm;
}

namespace {

double target(ClassLabel l) { return l == ClassLabel::false_news ? 1.0 : 0.0; }

double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double linear(const LogisticRegression::Params& w, double x, double y) { return w[0] * x + w[1] * y + w[2]; }

// Solves a symmetric 3x3 system by Gaussian elimination with partial pivoting.
std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> a, std::array<double, 3> b) {
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        if (a[col][col] == 0.0) throw DomainError("singular Newton system");
        for (int r = col + 1; r < 3; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 3; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::array<double, 3> x{};
    for (int r = 2; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < 3; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return x;
}

void require_both_classes(std::span<const LabeledPoint2D> data) {
    std::size_t n_false = 0;
    std::size_t n_real = 0;
    for (const auto& p : data) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw DomainError("non-finite training point");
        (p.label == ClassLabel::false_news ? n_false : n_real) += 1;
    }
    if (n_false < 2 || n_real < 2) throw DomainError("need both classes (at least 2 points each)");
}

}  // namespace

// -- logistic regression -----------------------------------------------------

double LogisticRegression::loss(std::span<const LabeledPoint2D> data, const Params& w, double l2_lambda) {
    double total = 0.0;
    for (const auto& p : data) {
        const double z = linear(w, p.x, p.y);
        total += softplus(z) - target(p.label) * z;
    }
    return total / static_cast<double>(data.size()) + 0.5 * l2_lambda * (w[0] * w[0] + w[1] * w[1]);
}

LogisticRegression::Params LogisticRegression::gradient(std::span<const LabeledPoint2D> data, const Params& w,
                                                        double l2_lambda) {
    Params g{};
    for (const auto& p : data) {
        const double r = sigmoid(linear(w, p.x, p.y)) - target(p.label);
        g[0] += r * p.x;
        g[1] += r * p.y;
        g[2] += r;
    }
    const double n = static_cast<double>(data.size());
    for (auto& v : g) v /= n;
    g[0] += l2_lambda * w[0];
    g[1] += l2_lambda * w[1];
    return g;
}

LogisticRegression LogisticRegression::fit(std::span<const LabeledPoint2D> data, const Hyperparams& hp) {
    require_both_classes(data);
    const double lambda = hp.lr.l2_lambda;
    const double n = static_cast<double>(data.size());
    LogisticRegression model;
    Params w{};
    double current = loss(data, w, lambda);
    model.loss_trace_.push_back(current);

    for (int iter = 0; iter < hp.lr.max_iters; ++iter) {
        const Params g = gradient(data, w, lambda);
        const double gnorm = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
        if (gnorm <= hp.lr.tolerance) break;

        std::array<std::array<double, 3>, 3> h{};
        for (const auto& p : data) {
            const double s = sigmoid(linear(w, p.x, p.y));
            const double c = s * (1.0 - s) / n;
            const double v[3] = {p.x, p.y, 1.0};
            for (int r = 0; r < 3; ++r)
                for (int k = 0; k < 3; ++k) h[r][k] += c * v[r] * v[k];
        }
        h[0][0] += lambda;
        h[1][1] += lambda;
        for (int r = 0; r < 3; ++r) h[r][r] += 1e-12;
        const auto step = solve3(h, {-g[0], -g[1], -g[2]});
        const double slope = g[0] * step[0] + g[1] * step[1] + g[2] * step[2];

        // Armijo backtracking; the loss never increases.
        double t = 1.0;
        bool accepted = false;
        while (t > 1e-16) {
            const Params trial{w[0] + t * step[0], w[1] + t * step[1], w[2] + t * step[2]};
            const double trial_loss = loss(data, trial, lambda);
            if (trial_loss <= current + 1e-4 * t * slope) {
                w = trial;
                current = trial_loss;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;
        model.loss_trace_.push_back(current);
    }
    model.params_ = w;
    return model;
}

double LogisticRegression::decision_score(Point2 p) const { return linear(params_, p.x, p.y); }

// -- decision tree -----------------------------------------------------------

namespace {

double gini(double n_false, double n) {
    if (n <= 0) return 0.0;
    const double p = n_false / n;
    return 2.0 * p * (1.0 - p);
}

double coord(const LabeledPoint2D& p, int feature) { return feature == 0 ? p.x : p.y; }

}  // namespace

DecisionTree DecisionTree::fit(std::span<const LabeledPoint2D> data, int max_depth, int min_leaf) {
    if (data.empty()) throw DomainError("decision tree needs training data");
    if (max_depth < 0 || min_leaf < 1) throw ConfigError("tree needs max_depth >= 0 and min_leaf >= 1");
    DecisionTree tree;
    std::vector<std::size_t> idx(data.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    tree.grow(data, idx, 0, max_depth, min_leaf);
    return tree;
}

std::size_t DecisionTree::grow(std::span<const LabeledPoint2D> data, std::vector<std::size_t>& idx, int depth,
                               int max_depth, int min_leaf) {
    const std::size_t self = nodes_.size();
    nodes_.emplace_back();
    const double n = static_cast<double>(idx.size());
    double n_false = 0.0;
    for (auto i : idx) n_false += target(data[i].label);
    nodes_[self].false_fraction = n_false / n;

    const bool pure = n_false == 0.0 || n_false == n;
    if (pure || depth >= max_depth || idx.size() < 2 * static_cast<std::size_t>(min_leaf)) return self;

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_impurity = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> order = idx;
    for (int feature = 0; feature < 2; ++feature) {
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return coord(data[a], feature) < coord(data[b], feature);
        });
        double left_false = 0.0;
        for (std::size_t k = 0; k + 1 < order.size(); ++k) {
            left_false += target(data[order[k]].label);
            const double lo = coord(data[order[k]], feature);
            const double hi = coord(data[order[k + 1]], feature);
            if (lo == hi) continue;
            const std::size_t n_left = k + 1;
            const std::size_t n_right = order.size() - n_left;
            if (n_left < static_cast<std::size_t>(min_leaf) || n_right < static_cast<std::size_t>(min_leaf)) continue;
            const double nl = static_cast<double>(n_left);
            const double nr = static_cast<double>(n_right);
            const double impurity = (nl * gini(left_false, nl) + nr * gini(n_false - left_false, nr)) / n;
            if (impurity < best_impurity) {
                best_impurity = impurity;
                best_feature = feature;
                best_threshold = 0.5 * (lo + hi);
            }
        }
    }
    if (best_feature < 0) return self;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (auto i : idx) (coord(data[i], best_feature) <= best_threshold ? left : right).push_back(i);
    nodes_[self].feature = best_feature;
    nodes_[self].threshold = best_threshold;
    const std::size_t l = grow(data, left, depth + 1, max_depth, min_leaf);
    const std::size_t r = grow(data, right, depth + 1, max_depth, min_leaf);
    nodes_[self].left = l;
    nodes_[self].right = r;
    return self;
}

double DecisionTree::decision_score(Point2 p) const {
    std::size_t i = 0;
    while (nodes_[i].feature >= 0) {
        const double v = nodes_[i].feature == 0 ? p.x : p.y;
        i = v <= nodes_[i].threshold ? nodes_[i].left : nodes_[i].right;
    }
    return nodes_[i].false_fraction - 0.5;
}

namespace {

// -- random forest -----------------------------------------------------------

class RandomForest final : public Model {
public:
    RandomForest(std::span<const LabeledPoint2D> data, const Hyperparams& hp, std::uint64_t seed) {
        if (hp.forest.n_trees < 1) throw ConfigError("forest needs n_trees >= 1");
        Rng rng(seed ^ (hp.forest.bootstrap_seed * 0x9E3779B97F4A7C15ULL));
        std::vector<LabeledPoint2D> sample(data.size());
        trees_.reserve(static_cast<std::size_t>(hp.forest.n_trees));
        for (int t = 0; t < hp.forest.n_trees; ++t) {
            if (hp.forest.bootstrap) {
                for (auto& s : sample) s = data[static_cast<std::size_t>(rng.below(data.size()))];
                trees_.push_back(DecisionTree::fit(sample, hp.forest.max_depth, hp.tree.min_leaf));
            } else {
                trees_.push_back(DecisionTree::fit(data, hp.forest.max_depth, hp.tree.min_leaf));
            }
        }
    }

    ModelKind kind() const noexcept override { return ModelKind::random_forest; }

    // Vote margin: (false votes - real votes) / trees.
    double decision_score(Point2 p) const override {
        double margin = 0.0;
        for (const auto& t : trees_) margin += t.predict(p) == ClassLabel::false_news ? 1.0 : -1.0;
        return margin / static_cast<double>(trees_.size());
    }

private:
    std::vector<DecisionTree> trees_;
};

// -- Gaussian models ---------------------------------------------------------

struct ClassMoments {
    double prior = 0.0;
    Point2 mean;
    stats::Cov2 cov;
};

ClassMoments moments(std::span<const LabeledPoint2D> data, ClassLabel label) {
    std::vector<Point2> pts;
    for (const auto& p : data)
        if (p.label == label) pts.push_back({p.x, p.y});
    ClassMoments m;
    m.prior = static_cast<double>(pts.size()) / static_cast<double>(data.size());
    m.mean = stats::centroid(pts);
    m.cov = stats::sample_covariance(pts);
    return m;
}

class NaiveBayes final : public Model {
public:
    NaiveBayes(std::span<const LabeledPoint2D> data, const Hyperparams& hp)
        : false_(moments(data, ClassLabel::false_news)), real_(moments(data, ClassLabel::real_news)) {
        for (auto* m : {&false_, &real_}) {
            m->cov.xy = 0.0;
            m->cov.xx += hp.gaussian.variance_floor;
            m->cov.yy += hp.gaussian.variance_floor;
            if (!(m->cov.xx > 0.0 && m->cov.yy > 0.0)) throw DomainError("zero class variance in naive Bayes");
        }
    }

    ModelKind kind() const noexcept override { return ModelKind::naive_bayes; }

    double decision_score(Point2 p) const override { return log_joint(false_, p) - log_joint(real_, p); }

private:
    static double log_joint(const ClassMoments& m, Point2 p) {
        const double dx = p.x - m.mean.x;
        const double dy = p.y - m.mean.y;
        return std::log(m.prior) - 0.5 * (std::log(m.cov.xx) + std::log(m.cov.yy)) -
               0.5 * (dx * dx / m.cov.xx + dy * dy / m.cov.yy);
    }

    ClassMoments false_;
    ClassMoments real_;
};

class Qda final : public Model {
public:
    Qda(std::span<const LabeledPoint2D> data, const Hyperparams& hp)
        : false_(moments(data, ClassLabel::false_news)), real_(moments(data, ClassLabel::real_news)) {
        for (auto* m : {&false_, &real_}) {
            m->cov.xx += hp.gaussian.variance_floor;
            m->cov.yy += hp.gaussian.variance_floor;
            const double trace = m->cov.xx + m->cov.yy;
            if (!(trace > 0.0) || !(m->cov.det() > 1e-15 * trace * trace))
                throw DomainError("singular class covariance in QDA");
        }
    }

    ModelKind kind() const noexcept override { return ModelKind::qda; }

    double decision_score(Point2 p) const override { return log_joint(false_, p) - log_joint(real_, p); }

private:
    static double log_joint(const ClassMoments& m, Point2 p) {
        const double d = stats::mahalanobis_distance(p, m.mean, m.cov);
        return std::log(m.prior) - 0.5 * std::log(m.cov.det()) - 0.5 * d * d;
    }

    ClassMoments false_;
    ClassMoments real_;
};

// -- linear SVM --------------------------------------------------------------

// Stochastic subgradient descent on the primal hinge objective
// 1/2 |w|^2 + C sum max(0, 1 - y (w.x + b)), written per sample as
// lambda/2 |w|^2 + hinge with lambda = 1 / (C n). The bias rides along as a
// constant feature.
class LinearSvm final : public Model {
public:
    LinearSvm(std::span<const LabeledPoint2D> data, const Hyperparams& hp, std::uint64_t seed) {
        if (!(hp.svm.c > 0.0) || hp.svm.epochs < 1) throw ConfigError("svm needs c > 0 and epochs >= 1");
        const double lambda = 1.0 / (hp.svm.c * static_cast<double>(data.size()));
        std::vector<std::size_t> order(data.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        Rng rng(seed);
        std::array<double, 3> w{};
        std::size_t t = 0;
        for (int epoch = 0; epoch < hp.svm.epochs; ++epoch) {
            rng.shuffle(std::span(order));
            for (auto i : order) {
                ++t;
                const double eta = 1.0 / (lambda * static_cast<double>(t));
                const auto& p = data[i];
                const double y = p.label == ClassLabel::false_news ? 1.0 : -1.0;
                const double margin = y * (w[0] * p.x + w[1] * p.y + w[2]);
                for (auto& v : w) v *= 1.0 - eta * lambda;
                if (margin < 1.0) {
                    w[0] += eta * y * p.x;
                    w[1] += eta * y * p.y;
                    w[2] += eta * y;
                }
                // projection onto the ball that contains the optimum
                const double norm = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
                const double radius = 1.0 / std::sqrt(lambda);
                if (norm > radius)
                    for (auto& v : w) v *= radius / norm;
            }
        }
        w_ = w;
    }

    ModelKind kind() const noexcept override { return ModelKind::linear_svm; }
    double decision_score(Point2 p) const override { return w_[0] * p.x + w_[1] * p.y + w_[2]; }

private:
    std::array<double, 3> w_{};
};

class TreeModel final : public Model {
public:
    explicit TreeModel(DecisionTree tree) : tree_(std::move(tree)) {}
    ModelKind kind() const noexcept override { return ModelKind::decision_tree; }
    double decision_score(Point2 p) const override { return tree_.decision_score(p); }

private:
    DecisionTree tree_;
};

class LrModel final : public Model {
public:
    explicit LrModel(LogisticRegression lr) : lr_(std::move(lr)) {}
    ModelKind kind() const noexcept override { return ModelKind::logistic_regression; }
    double decision_score(Point2 p) const override { return lr_.decision_score(p); }

private:
    LogisticRegression lr_;
};

}  // namespace

std::unique_ptr<Model> fit_model(ModelKind kind, std::span<const LabeledPoint2D> data, const Hyperparams& params,
                                 std::uint64_t seed) {
    require_both_classes(data);
    switch (kind) {
        case ModelKind::logistic_regression:
            return std::make_unique<LrModel>(LogisticRegression::fit(data, params));
        case ModelKind::naive_bayes: return std::make_unique<NaiveBayes>(data, params);
        case ModelKind::qda: return std::make_unique<Qda>(data, params);
        case ModelKind::linear_svm: return std::make_unique<LinearSvm>(data, params, seed);
        case ModelKind::random_forest: return std::make_unique<RandomForest>(data, params, seed);
        case ModelKind::decision_tree:
            return std::make_unique<TreeModel>(DecisionTree::fit(data, params.tree.max_depth, params.tree.min_leaf));
    }
    throw ConfigError("unknown model kind");
}

double accuracy(const Model& model, std::span<const LabeledPoint2D> data) {
    if (data.empty()) throw DomainError("accuracy of an empty set");
    std::size_t correct = 0;
    for (const auto& p : data) correct += model.predict({p.x, p.y}) == p.label ? 1 : 0;
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

// -- cross-validation --------------------------------------------------------

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const LabeledPoint2D> data, int folds,
                                                       std::uint64_t seed) {
    if (folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
    const auto k = static_cast<std::size_t>(folds);
    Rng rng(seed);
    std::vector<std::vector<std::size_t>> out(k);
    std::size_t offset = 0;
    for (const auto label : {ClassLabel::false_news, ClassLabel::real_news}) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < data.size(); ++i)
            if (data[i].label == label) members.push_back(i);
        if (members.size() < k)
            throw DomainError("class '" + std::string(falseness::to_string(label)) + "' has " +
                              std::to_string(members.size()) + " points, fewer than " + std::to_string(k) +
                              " folds");
        rng.shuffle(std::span(members));
        for (std::size_t j = 0; j < members.size(); ++j) out[(offset + j) % k].push_back(members[j]);
        offset = (offset + members.size()) % k;
    }
    for (auto& f : out) std::sort(f.begin(), f.end());
    return out;
}

CVReport cross_validate(std::span<const ModelKind> kinds, std::span<const LabeledPoint2D> data,
                        const Hyperparams& params, int folds, std::uint64_t seed) {
    const auto assignment = stratified_folds(data, folds, seed);
    CVReport report;
    report.fold_count = folds;
    report.seed = seed;
    for (const auto kind : kinds) {
        ModelCV cv;
        cv.kind = kind;
        for (std::size_t f = 0; f < assignment.size(); ++f) {
            std::vector<LabeledPoint2D> train;
            std::vector<LabeledPoint2D> test;
            std::vector<bool> in_test(data.size(), false);
            for (auto i : assignment[f]) in_test[i] = true;
            for (std::size_t i = 0; i < data.size(); ++i) (in_test[i] ? test : train).push_back(data[i]);
            const auto model = fit_model(kind, train, params, seed + 1000003ULL * (f + 1));
            cv.fold_accuracies.push_back(accuracy(*model, test));
        }
        const double n = static_cast<double>(cv.fold_accuracies.size());
        cv.mean_accuracy = std::accumulate(cv.fold_accuracies.begin(), cv.fold_accuracies.end(), 0.0) / n;
        double ss = 0.0;
        for (double a : cv.fold_accuracies) ss += (a - cv.mean_accuracy) * (a - cv.mean_accuracy);
        cv.std_dev = std::sqrt(ss / n);
        report.models.push_back(std::move(cv));
    }
    std::stable_sort(report.models.begin(), report.models.end(),
                     [](const ModelCV& a, const ModelCV& b) { return a.mean_accuracy > b.mean_accuracy; });
    return report;
}

void write_cv_csv(std::ostream& out, const CVReport& report, std::string_view header_comment) {
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    out << "model,mean_accuracy,std_dev";
    for (int f = 1; f <= report.fold_count; ++f) out << ",fold_" << f;
    out << '\n';
    for (const auto& m : report.models) {
        out << to_string(m.kind) << ',' << text::fixed(m.mean_accuracy, 6) << ',' << text::fixed(m.std_dev, 6);
        for (double a : m.fold_accuracies) out << ',' << text::fixed(a, 6);
        out << '\n';
    }
}

// -- decision grids ----------------------------------------------------------

BoundaryGrid decision_grid(const Model& model, std::size_t cols, std::size_t rows) {
    if (cols == 0 || rows == 0) throw DomainError("grid resolution must be positive");
    BoundaryGrid grid;
    grid.cols = cols;
    grid.rows = rows;
    grid.labels.reserve(cols * rows);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            grid.labels.push_back(model.predict(BoundaryGrid::cell_center(c, r, cols, rows)));
    return grid;
}

void write_grid(std::ostream& out, const BoundaryGrid& grid, std::string_view header_comment) {
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    out << grid.cols << ' ' << grid.rows << '\n';
    for (std::size_t r = 0; r < grid.rows; ++r) {
        for (std::size_t c = 0; c < grid.cols; ++c) {
            if (c > 0) out << ' ';
            out << (grid.at(c, r) == ClassLabel::false_news ? '1' : '0');
        }
        out << '\n';
    }
}

BoundaryGrid read_grid(std::istream& in) {
    std::string line;
    std::ostringstream body;
    while (std::getline(in, line))
        if (line.empty() || line.front() != '#') body << line << '\n';
    std::istringstream values(body.str());
    BoundaryGrid grid;
    if (!(values >> grid.cols >> grid.rows) || grid.cols == 0 || grid.rows == 0)
        throw ParseError(1, "", "grid header must be 'cols rows'");
    grid.labels.reserve(grid.cols * grid.rows);
    int v = 0;
    while (values >> v) {
        if (v != 0 && v != 1) throw ParseError(1, "", "grid labels must be 0 or 1");
        grid.labels.push_back(v == 1 ? ClassLabel::false_news : ClassLabel::real_news);
    }
    if (grid.labels.size() != grid.cols * grid.rows) throw ParseError(1, "", "grid size does not match header");
    return grid;
}

}  // namespace falsimeter::classify
