#include "falsimeter/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "falsimeter/corpus.hpp"
#include "falsimeter/csv.hpp"
#include "falsimeter/error.hpp"
#include "falsimeter/falseness.hpp"
#include "falsimeter/random.hpp"
#include "falsimeter/stats.hpp"
#include "falsimeter/svg.hpp"
#include "falsimeter/text.hpp"

namespace falsimeter::commands {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using falseness::CasePoint;
using falseness::ClassLabel;

std::string config_hash(const RunConfig& c, std::string_view extra) {
    std::string canonical;
    canonical += "noun_tags=" + lingua::format_tag_list(c.noun_tags) + ';';
    canonical += "pos_tags=" + lingua::format_tag_list(c.pos_tags) + ';';
    canonical += "folds=" + std::to_string(c.folds) + ';';
    canonical += "seed=" + std::to_string(c.seed) + ';';
    canonical += "grid=" + std::to_string(c.grid_cols) + 'x' + std::to_string(c.grid_rows) + ';';
    canonical += "formats=";
    for (const auto& f : c.report_formats) canonical += f + ',';
    canonical += ";models=";
    for (auto m : c.models) canonical += std::string(classify::short_name(m)) + ',';
    canonical += ";categories=";
    if (c.categories)
        for (const auto& cat : *c.categories) canonical += cat + ',';
    canonical += ';';
    canonical += extra;
    return text::fnv1a_hex(canonical);
}

std::string header_line(const RunConfig& config, std::string_view extra) {
    return std::string(kToolName) + ' ' + std::string(kVersion) + " seed=" + std::to_string(config.seed) +
           " config=" + config_hash(config, extra);
}

std::uint64_t default_seed(std::uint64_t fallback) {
    const char* env = std::getenv("FALSIMETER_SEED");
    if (env == nullptr || *env == '\0') return fallback;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') return fallback;
    return v;
}

std::pair<std::size_t, std::size_t> parse_resolution(std::string_view s) {
    const auto x = s.find('x');
    if (x == std::string_view::npos) throw ConfigError("grid resolution must look like 200x200");
    const auto to_size = [&](std::string_view part) {
        std::size_t v = 0;
        for (char ch : part) {
            if (ch < '0' || ch > '9') throw ConfigError("grid resolution must look like 200x200");
            v = v * 10 + static_cast<std::size_t>(ch - '0');
        }
        if (part.empty() || v == 0) throw ConfigError("grid resolution must be positive");
        return v;
    };
    return {to_size(s.substr(0, x)), to_size(s.substr(x + 1))};
}

namespace {

// -- shared helpers ----------------------------------------------------------

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
    if (!out) throw Error("failed writing " + path.string());
}

/// Six significant digits.
json sig6(double v) {
    if (!std::isfinite(v)) return nullptr;
    return std::stod(text::format("%.6g", v));
}

json meta_json(const RunConfig& config, std::string_view command, std::string_view extra = {}) {
    json m;
    m["tool"] = kToolName;
    m["version"] = kVersion;
    m["command"] = command;
    m["seed"] = config.seed;
    m["config_hash"] = config_hash(config, extra);
    return m;
}

std::string dump(const json& j) { return j.dump(2) + '\n'; }

struct TokenizedDoc {
    std::optional<lingua::TaggedDocument> doc;
    bool naive = false;
    std::string error;
};

const corpus::Document& slot_document(const corpus::CaseRecord& r, std::string_view slot) {
    if (slot == corpus::kFullStorySlot) return r.full_story;
    if (slot == corpus::kFalseSlot) return r.false_article;
    return r.real_article;
}

TokenizedDoc tokenize(const corpus::CaseRecord& record, std::string_view slot, const RunConfig& config) {
    TokenizedDoc out;
    const auto& doc = slot_document(record, slot);
    if (!config.tagged_dir.empty()) {
        const auto path = config.tagged_dir / record.case_id / (std::string(slot) + ".tsv");
        if (fs::exists(path)) {
            try {
                auto tagged = lingua::parse_tagged(path);
                tagged.doc_id = doc.id;
                out.doc = std::move(tagged);
            } catch (const Error& e) {
                out.error = e.what();
            }
            return out;
        }
    }
    out.naive = true;
    try {
        out.doc = lingua::naive_tokenize(doc.clean_text ? *doc.clean_text : doc.raw_text, doc.id);
    } catch (const Error& e) {
        out.error = e.what();
    }
    return out;
}

std::vector<corpus::CaseRecord> load_corpus(const RunConfig& config) {
    if (config.corpus_path.empty()) throw ConfigError("--corpus is required");
    if (!fs::exists(config.corpus_path)) throw Error("corpus file not found: " + config.corpus_path.string());
    auto records = corpus::parse_corpus(config.corpus_path);
    const auto rules = config.cleaning_rules_path.empty() ? corpus::default_rules()
                                                          : corpus::load_rules(config.cleaning_rules_path);
    for (auto& r : records) corpus::prepare(r, rules);
    return records;
}

std::vector<CasePoint> load_scores(const RunConfig& config) {
    const auto path = config.scores_file();
    if (!fs::exists(path)) throw Error("scores file not found: " + path.string());
    return falseness::read_scores_csv(path);
}

std::vector<stats::Point2> to_points(const std::vector<const CasePoint*>& pts) {
    std::vector<stats::Point2> out;
    out.reserve(pts.size());
    for (const auto* p : pts) out.push_back({p->score.concealment, p->score.overstatement});
    return out;
}

std::vector<const CasePoint*> select(const std::vector<CasePoint>& points, auto pred) {
    std::vector<const CasePoint*> out;
    for (const auto& p : points)
        if (pred(p)) out.push_back(&p);
    return out;
}

std::vector<std::string> categories_of(const std::vector<CasePoint>& points) {
    std::set<std::string> labels;
    for (const auto& p : points) labels.insert(p.category.label);
    return {labels.begin(), labels.end()};
}

json fit_json(const stats::RegressionFit& f) {
    json j;
    j["n"] = f.n;
    j["slope"] = sig6(f.slope);
    j["intercept"] = sig6(f.intercept);
    j["r_squared"] = sig6(f.r_squared);
    j["slope_std_error"] = sig6(f.slope_std_error);
    j["residual_variance"] = sig6(f.residual_variance);
    return j;
}

}  // namespace

// -- measure -----------------------------------------------------------------

int cmd_measure(const RunConfig& config, std::ostream& err) {
    try {
        const auto records = load_corpus(config);
        const std::string header = header_line(config);
        const falseness::NounConfig nouns{config.noun_tags};

        std::vector<CasePoint> points;
        json skipped = json::array();
        json findings = json::array();
        std::vector<std::string> naive_docs;
        std::map<std::string, std::vector<lingua::TaggedDocument>> by_class;
        std::vector<std::pair<std::string, lingua::TaggedDocument>> all_docs;

        const auto skip = [&](const std::string& case_id, std::string_view slot, const std::string& reason) {
            err << "skipped case '" << case_id << "' " << slot << ": " << reason << '\n';
            skipped.push_back({{"case_id", case_id}, {"slot", slot}, {"reason", reason}});
        };

        for (const auto& record : records) {
            std::set<std::string> bad_roles;
            for (const auto& f : corpus::validate_case(record)) {
                findings.push_back({{"case_id", f.case_id}, {"slot", f.slot}, {"message", f.message}});
                if (f.message.find("does not match slot") != std::string::npos) bad_roles.insert(f.slot);
            }

            std::map<std::string_view, TokenizedDoc> docs;
            for (auto slot : {corpus::kFullStorySlot, corpus::kFalseSlot, corpus::kRealSlot}) {
                if (bad_roles.contains(std::string(slot))) continue;
                auto t = tokenize(record, slot, config);
                if (t.naive && t.doc) naive_docs.push_back(t.doc->doc_id);
                if (t.doc) {
                    const std::string cls = slot == corpus::kFullStorySlot ? "full_story"
                                            : slot == corpus::kFalseSlot  ? "false_news"
                                                                          : "real_news";
                    by_class[cls].push_back(*t.doc);
                    all_docs.emplace_back(cls, *t.doc);
                }
                docs.emplace(slot, std::move(t));
            }

            const auto full_it = docs.find(corpus::kFullStorySlot);
            if (full_it == docs.end() || !full_it->second.doc) {
                skip(record.case_id, corpus::kFullStorySlot,
                     full_it == docs.end() ? "role does not match slot" : full_it->second.error);
                continue;
            }
            for (const auto label : {ClassLabel::false_news, ClassLabel::real_news}) {
                const auto slot = label == ClassLabel::false_news ? corpus::kFalseSlot : corpus::kRealSlot;
                const auto it = docs.find(slot);
                if (it == docs.end() || !it->second.doc) {
                    skip(record.case_id, slot, it == docs.end() ? "role does not match slot" : it->second.error);
                    continue;
                }
                try {
                    points.push_back(
                        falseness::score_article(record, *full_it->second.doc, *it->second.doc, label, nouns));
                } catch (const falseness::ScoringError& e) {
                    skip(record.case_id, e.slot(), e.what());
                }
            }
        }

        std::ostringstream scores;
        falseness::write_scores_csv(scores, points, header);

        std::ostringstream class_stats;
        class_stats << "# " << header << '\n'
                    << "class,documents,token_count,pos_count,sentence_count,type_count,ttr\n";
        json class_json = json::object();
        for (const auto* cls : {"full_story", "false_news", "real_news"}) {
            const auto it = by_class.find(cls);
            if (it == by_class.end() || it->second.empty()) continue;
            const auto s = lingua::corpus_stats(it->second);
            class_stats << cls << ',' << s.document_count << ',' << s.token_count << ',' << s.pos_count << ','
                        << s.sentence_count << ',' << s.type_count << ',' << text::fixed(s.ttr, 6) << '\n';
            class_json[cls] = {{"documents", s.document_count}, {"token_count", s.token_count},
                               {"pos_count", s.pos_count},      {"sentence_count", s.sentence_count},
                               {"type_count", s.type_count},    {"ttr", sig6(s.ttr)}};
        }

        std::ostringstream doc_stats;
        doc_stats << "# " << header << '\n' << "doc_id,class,token_count,type_count,ttr\n";
        for (const auto& [cls, doc] : all_docs) {
            const auto s = lingua::document_stats(doc);
            doc_stats << csv::escape(doc.doc_id) << ',' << cls << ',' << s.token_count << ',' << s.type_count << ','
                      << text::fixed(s.ttr, 6) << '\n';
        }

        json summary;
        summary["meta"] = meta_json(config, "measure");
        summary["cases"] = records.size();
        summary["points"] = points.size();
        summary["skipped"] = skipped;
        summary["validation_findings"] = findings;
        summary["tokenization"] = {{"tagged_dir", !config.tagged_dir.empty()},
                                   {"naive_fallback", !naive_docs.empty()},
                                   {"naive_fallback_documents", naive_docs}};
        summary["noun_tags"] = lingua::format_tag_list(config.noun_tags);
        summary["class_stats"] = class_json;
        summary["notes"] = json::array({"pos_count counts tokens whose tag is not a punctuation class"});

        write_file(config.output_dir / "scores.csv", scores.str());
        write_file(config.output_dir / "corpus_stats.csv", class_stats.str());
        write_file(config.output_dir / "document_stats.csv", doc_stats.str());
        write_file(config.output_dir / "measure_summary.json", dump(summary));
        if (!naive_docs.empty())
            err << "note: " << naive_docs.size() << " document(s) used the fallback tokenizer\n";
        return skipped.empty() ? kOk : kPartial;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kFatal;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kFatal;
    }
}

// -- stats -------------------------------------------------------------------

int cmd_stats(const RunConfig& config, std::ostream& err) {
    try {
        const auto points = load_scores(config);
        json warnings = json::array();
        const auto warn = [&](const std::string& what) {
            err << "warning: " << what << '\n';
            warnings.push_back(what);
        };

        json out;
        out["meta"] = meta_json(config, "stats");
        out["axes"] = {{"x", "concealment"}, {"y", "overstatement"}};

        std::map<ClassLabel, stats::RegressionFit> class_fits;
        json classes = json::object();
        for (const auto label : {ClassLabel::false_news, ClassLabel::real_news}) {
            const auto pts = select(points, [&](const CasePoint& p) { return p.label == label; });
            json c;
            c["n"] = pts.size();
            try {
                const auto fit = stats::linear_fit(to_points(pts));
                class_fits[label] = fit;
                c["fit"] = fit_json(fit);
            } catch (const DomainError& e) {
                c["fit"] = nullptr;
                warn(std::string("fit omitted for ") + std::string(falseness::to_string(label)) + ": " + e.what());
            }
            classes[std::string(falseness::to_string(label))] = c;
        }
        out["classes"] = classes;

        if (class_fits.size() == 2) {
            const auto t = stats::compare_slopes(class_fits[ClassLabel::false_news], class_fits[ClassLabel::real_news]);
            out["slope_test"] = {{"a", "false_news"},
                                 {"b", "real_news"},
                                 {"t", sig6(t.t)},
                                 {"df", t.df},
                                 {"p_two_tailed", sig6(t.p_two_tailed)}};
        } else {
            out["slope_test"] = nullptr;
            warn("slope test omitted: needs fits for both classes");
        }

        json mw = json::object();
        for (const auto* metric : {"concealment", "overstatement"}) {
            std::vector<double> a;
            std::vector<double> b;
            for (const auto& p : points) {
                const double v = std::string_view(metric) == "concealment" ? p.score.concealment : p.score.overstatement;
                (p.label == ClassLabel::false_news ? a : b).push_back(v);
            }
            try {
                const auto r = stats::mann_whitney_u(a, b);
                mw[metric] = {{"n_false", a.size()},
                              {"n_real", b.size()},
                              {"u", sig6(r.u_statistic)},
                              {"u_false", sig6(r.u_a)},
                              {"u_real", sig6(r.u_b)},
                              {"z", sig6(r.z_score)},
                              {"p_two_tailed", sig6(r.p_two_tailed)}};
            } catch (const DomainError& e) {
                mw[metric] = nullptr;
                warn(std::string("Mann-Whitney omitted for ") + metric + ": " + e.what());
            }
        }
        out["mann_whitney"] = mw;

        json categories = json::object();
        for (const auto& cat : categories_of(points)) {
            json c = json::object();
            for (const auto label : {ClassLabel::false_news, ClassLabel::real_news}) {
                const auto pts = select(points, [&](const CasePoint& p) {
                    return p.label == label && p.category.label == cat;
                });
                try {
                    c[std::string(falseness::to_string(label))] = fit_json(stats::linear_fit(to_points(pts)));
                } catch (const DomainError& e) {
                    c[std::string(falseness::to_string(label))] = nullptr;
                    warn("category '" + cat + "' " + std::string(falseness::to_string(label)) +
                         " fit omitted: " + e.what());
                }
            }
            categories[cat] = c;
        }
        out["categories"] = categories;

        json groups = json::array();
        const auto add_group = [&](const std::string& kind, const std::string& name,
                                   const std::vector<const CasePoint*>& pts) {
            try {
                const auto pp = to_points(pts);
                const auto e = stats::covariance_ellipse(pp, 3.0);
                const auto m = stats::mahalanobis_summary(pp);
                groups.push_back({{"kind", kind},
                                  {"group", name},
                                  {"n", pts.size()},
                                  {"centroid", {sig6(e.centroid.x), sig6(e.centroid.y)}},
                                  {"k_sigma", sig6(e.k_sigma)},
                                  {"semi_major", sig6(e.semi_major)},
                                  {"semi_minor", sig6(e.semi_minor)},
                                  {"orientation", sig6(e.orientation)},
                                  {"covariance",
                                   {{"xx", sig6(m.covariance.xx)}, {"xy", sig6(m.covariance.xy)},
                                    {"yy", sig6(m.covariance.yy)}}},
                                  {"mean_mahalanobis", sig6(m.mean_distance)}});
            } catch (const DomainError& e) {
                warn("ellipse omitted for " + kind + " '" + name + "': " + e.what());
            }
        };
        for (const auto& cat : categories_of(points))
            add_group("category", cat, select(points, [&](const CasePoint& p) { return p.category.label == cat; }));
        for (const auto label : {ClassLabel::false_news, ClassLabel::real_news})
            add_group("class", std::string(falseness::to_string(label)),
                      select(points, [&](const CasePoint& p) { return p.label == label; }));
        out["ellipses"] = groups;
        out["warnings"] = warnings;

        if (config.wants("json") || !config.wants("csv")) write_file(config.output_dir / "stats.json", dump(out));
        if (config.wants("csv")) {
            std::ostringstream csv_out;
            csv_out << "# " << header_line(config) << '\n'
                    << "scope,group,class,n,slope,intercept,r_squared,slope_std_error\n";
            const auto row = [&](const std::string& scope, const std::string& group, std::string_view cls,
                                 const std::vector<const CasePoint*>& pts) {
                try {
                    const auto f = stats::linear_fit(to_points(pts));
                    csv_out << scope << ',' << csv::escape(group) << ',' << cls << ',' << f.n << ','
                            << text::format("%.6g,%.6g,%.6g,%.6g", f.slope, f.intercept, f.r_squared,
                                            f.slope_std_error)
                            << '\n';
                } catch (const DomainError&) {
                }
            };
            for (const auto label : {ClassLabel::false_news, ClassLabel::real_news})
                row("class", "all", falseness::to_string(label),
                    select(points, [&](const CasePoint& p) { return p.label == label; }));
            for (const auto& cat : categories_of(points))
                for (const auto label : {ClassLabel::false_news, ClassLabel::real_news})
                    row("category", cat, falseness::to_string(label), select(points, [&](const CasePoint& p) {
                            return p.label == label && p.category.label == cat;
                        }));
            write_file(config.output_dir / "stats_fits.csv", csv_out.str());
        }
        return kOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kFatal;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kFatal;
    }
}

// -- classify ----------------------------------------------------------------

namespace {

std::vector<classify::LabeledPoint2D> labeled(const std::vector<CasePoint>& points) {
    std::vector<classify::LabeledPoint2D> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back({p.score.concealment, p.score.overstatement, p.label});
    return out;
}

}  // namespace

int cmd_classify(const RunConfig& config, std::ostream& err) {
    try {
        const auto points = load_scores(config);
        const auto data = labeled(points);
        for (const auto label : {ClassLabel::false_news, ClassLabel::real_news}) {
            const auto n = std::count_if(data.begin(), data.end(), [&](const auto& p) { return p.label == label; });
            if (n < 2)
                throw DomainError("need both classes: '" + std::string(falseness::to_string(label)) + "' has " +
                                  std::to_string(n) + " point(s)");
        }
        const std::string header = header_line(config);
        const classify::Hyperparams params;

        classify::CVReport report;
        report.fold_count = config.folds;
        report.seed = config.seed;
        bool partial = false;
        std::map<std::string, std::string> files;
        for (const auto kind : config.models) {
            try {
                const classify::ModelKind one[] = {kind};
                auto cv = classify::cross_validate(one, data, params, config.folds, config.seed);
                const auto model = classify::fit_model(kind, data, params, config.seed);
                const auto grid = classify::decision_grid(*model, config.grid_cols, config.grid_rows);
                std::ostringstream g;
                classify::write_grid(g, grid, header);
                const std::string name(classify::short_name(kind));
                files["grid_" + name + ".txt"] = g.str();
                if (config.wants("svg"))
                    files["boundary_" + name + ".svg"] =
                        svg::boundary_figure(grid, classify::to_string(kind), points, header);
                report.models.push_back(std::move(cv.models.front()));
            } catch (const DomainError& e) {
                err << "warning: model " << classify::to_string(kind) << " skipped: " << e.what() << '\n';
                partial = true;
            }
        }
        std::stable_sort(report.models.begin(), report.models.end(),
                         [](const auto& a, const auto& b) { return a.mean_accuracy > b.mean_accuracy; });

        std::ostringstream csv_out;
        classify::write_cv_csv(csv_out, report, header);
        files["cv_report.csv"] = csv_out.str();
        if (config.wants("json")) {
            json j;
            j["meta"] = meta_json(config, "classify");
            j["folds"] = report.fold_count;
            j["grid"] = {config.grid_cols, config.grid_rows};
            json models = json::array();
            for (const auto& m : report.models) {
                json folds = json::array();
                for (double a : m.fold_accuracies) folds.push_back(sig6(a));
                models.push_back({{"model", classify::to_string(m.kind)},
                                  {"mean_accuracy", sig6(m.mean_accuracy)},
                                  {"std_dev", sig6(m.std_dev)},
                                  {"fold_accuracies", folds}});
            }
            j["models"] = models;
            files["cv_report.json"] = dump(j);
        }
        for (const auto& [name, content] : files) write_file(config.output_dir / name, content);
        return partial ? kPartial : kOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kFatal;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kFatal;
    }
}

// -- posdiff -----------------------------------------------------------------

int cmd_posdiff(const RunConfig& config, std::ostream& err) {
    try {
        const auto records = load_corpus(config);
        std::vector<falseness::TokenizedCase> cases;
        bool partial = false;
        for (const auto& record : records) {
            auto full = tokenize(record, corpus::kFullStorySlot, config);
            auto f = tokenize(record, corpus::kFalseSlot, config);
            auto r = tokenize(record, corpus::kRealSlot, config);
            if (!full.doc || !f.doc || !r.doc) {
                const std::string reason = !full.doc ? full.error : !f.doc ? f.error : r.error;
                err << "skipped case '" << record.case_id << "': " << reason << '\n';
                partial = true;
                continue;
            }
            cases.push_back({record.case_id, record.category, {*full.doc, *f.doc, *r.doc}});
        }
        const auto table = falseness::aggregate_pos_diff(cases, config.pos_tags);
        const std::string header = header_line(config);
        std::ostringstream rows;
        falseness::write_pos_diff_csv(rows, table, header);
        std::ostringstream totals;
        falseness::write_pos_totals_csv(totals, table, header);
        write_file(config.output_dir / "posdiff.csv", rows.str());
        write_file(config.output_dir / "posdiff_totals.csv", totals.str());
        return partial ? kPartial : kOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kFatal;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kFatal;
    }
}

// -- synth -------------------------------------------------------------------

namespace {

// Two Hangul syllables per inventory index; unique below 11172^2.
std::string noun_word(std::size_t k) {
    std::string s;
    text::append_utf8(s, static_cast<char32_t>(0xAC00 + k % 11172));
    text::append_utf8(s, static_cast<char32_t>(0xAC00 + (k / 11172) % 11172));
    return s;
}

// Nouns in sentences of up to 6, each sentence closed by a number token
// (tagged SN, so it never enters the default noun set).
std::string compose_text(const std::vector<std::size_t>& nouns, Rng& rng) {
    std::string out;
    for (std::size_t i = 0; i < nouns.size(); ++i) {
        if (!out.empty()) out.push_back(' ');
        out += noun_word(nouns[i]);
        if (i % 6 == 5 || i + 1 == nouns.size()) out += ' ' + std::to_string(1 + rng.below(2024)) + '.';
    }
    return out;
}

struct PlantedCounts {
    std::size_t removed = 0;
    std::size_t added = 0;
    double concealment = 0.0;
    double overstatement = 0.0;
};

PlantedCounts plant(std::size_t n, double c, double o) {
    PlantedCounts p;
    p.removed = static_cast<std::size_t>(std::llround(std::clamp(c, 0.0, 1.0) * static_cast<double>(n)));
    const std::size_t kept = n - p.removed;
    if (kept == 0) {
        p.added = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(n) * o)));
    } else {
        const double ratio = o >= 1.0 ? 1e9 : o / (1.0 - o);
        p.added = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(kept)));
    }
    p.concealment = static_cast<double>(p.removed) / static_cast<double>(n);
    p.overstatement = static_cast<double>(p.added) / static_cast<double>(kept + p.added);
    return p;
}

void check_rate(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must be in [0,1]");
}

}  // namespace

SynthResult synthesize(const SynthSpec& spec, std::string_view header) {
    if (spec.n_cases == 0) throw ConfigError("n_cases must be positive");
    if (spec.nouns_per_story == 0) throw ConfigError("nouns_per_story must be positive");
    if (!(spec.noise_std >= 0.0)) throw ConfigError("noise_std must be >= 0");
    if (spec.categories.empty()) throw ConfigError("at least one category is required");
    const double rc = spec.real_concealment.value_or(spec.planted_concealment);
    const double ro = spec.real_overstatement.value_or(spec.planted_overstatement);
    check_rate(spec.planted_concealment, "planted concealment");
    check_rate(spec.planted_overstatement, "planted overstatement");
    check_rate(rc, "real concealment");
    check_rate(ro, "real overstatement");

    Rng rng(spec.seed);
    std::size_t next_noun = 0;
    SynthResult result;
    json adjustments = json::array();
    double sums[2][2] = {{0, 0}, {0, 0}};

    for (std::size_t i = 0; i < spec.n_cases; ++i) {
        corpus::CaseRecord rec;
        rec.case_id = text::format("synth-%04zu", i + 1);
        rec.category = corpus::Category::from_label(spec.categories[i % spec.categories.size()]);

        std::vector<std::size_t> story(spec.nouns_per_story);
        for (auto& s : story) s = next_noun++;
        const auto make_doc = [&](corpus::Role role, std::string_view slot, std::string body) {
            corpus::Document d;
            d.id = rec.case_id + ":" + std::string(slot);
            d.role = role;
            d.raw_text = body;
            d.clean_text = std::move(body);
            return d;
        };
        rec.full_story = make_doc(corpus::Role::full_story, corpus::kFullStorySlot, compose_text(story, rng));

        for (int cls = 0; cls < 2; ++cls) {
            double c = cls == 0 ? spec.planted_concealment : rc;
            double o = cls == 0 ? spec.planted_overstatement : ro;
            if (spec.noise_std > 0.0) {
                c = std::clamp(c + rng.normal(0.0, spec.noise_std), 0.0, 1.0);
                o = std::clamp(o + rng.normal(0.0, spec.noise_std), 0.0, 0.99);
            }
            const auto counts = plant(spec.nouns_per_story, c, o);
            std::vector<std::size_t> pool = story;
            rng.shuffle(std::span(pool));
            std::vector<std::size_t> article(pool.begin(), pool.end() - static_cast<std::ptrdiff_t>(counts.removed));
            for (std::size_t k = 0; k < counts.added; ++k) article.push_back(next_noun++);
            rng.shuffle(std::span(article));

            const bool is_false = cls == 0;
            auto doc = make_doc(is_false ? corpus::Role::false_news : corpus::Role::real_news,
                                is_false ? corpus::kFalseSlot : corpus::kRealSlot, compose_text(article, rng));
            (is_false ? rec.false_article : rec.real_article) = std::move(doc);
            sums[cls][0] += counts.concealment;
            sums[cls][1] += counts.overstatement;
            if (counts.concealment != c || counts.overstatement != o)
                adjustments.push_back({{"case_id", rec.case_id},
                                       {"class", is_false ? "false_news" : "real_news"},
                                       {"target", {sig6(c), sig6(o)}},
                                       {"achieved", {sig6(counts.concealment), sig6(counts.overstatement)}}});
        }
        result.records.push_back(std::move(rec));
    }

    const double n = static_cast<double>(spec.n_cases);
    json manifest;
    manifest["header"] = header;
    manifest["spec"] = {{"n_cases", spec.n_cases},
                        {"nouns_per_story", spec.nouns_per_story},
                        {"planted_concealment", spec.planted_concealment},
                        {"planted_overstatement", spec.planted_overstatement},
                        {"real_concealment", rc},
                        {"real_overstatement", ro},
                        {"noise_std", spec.noise_std},
                        {"categories", spec.categories},
                        {"seed", spec.seed}};
    manifest["achieved_means"] = {
        {"false_news", {{"concealment", sig6(sums[0][0] / n)}, {"overstatement", sig6(sums[0][1] / n)}}},
        {"real_news", {{"concealment", sig6(sums[1][0] / n)}, {"overstatement", sig6(sums[1][1] / n)}}}};
    manifest["rounded_cases"] = adjustments;
    result.manifest_json = dump(manifest);
    return result;
}

int cmd_synth(const SynthSpec& spec, const RunConfig& config, std::ostream& err) {
    try {
        std::string extra = text::format("synth:%zu:%zu:%.17g:%.17g:%.17g:%.17g:%.17g", spec.n_cases,
                                         spec.nouns_per_story, spec.planted_concealment, spec.planted_overstatement,
                                         spec.real_concealment.value_or(-1), spec.real_overstatement.value_or(-1),
                                         spec.noise_std);
        for (const auto& c : spec.categories) extra += ':' + c;
        RunConfig seeded = config;
        seeded.seed = spec.seed;
        const std::string header = header_line(seeded, extra);
        const auto result = synthesize(spec, header);
        std::ostringstream corpus_out;
        corpus::write_corpus(corpus_out, result.records, header);
        write_file(config.output_dir / "corpus.jsonl", corpus_out.str());
        write_file(config.output_dir / "synth_manifest.json", result.manifest_json);
        return kOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kFatal;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kFatal;
    }
}

// -- report ------------------------------------------------------------------

int cmd_report(const RunConfig& config, std::ostream& err) {
    try {
        const auto points = load_scores(config);
        if (!config.grids_dir.empty() && !fs::is_directory(config.grids_dir))
            throw Error("grids directory not found: " + config.grids_dir.string());
        const std::string header = header_line(config);
        std::map<std::string, std::string> files;

        std::vector<svg::FitLine> class_fits;
        for (const auto label : {ClassLabel::false_news, ClassLabel::real_news}) {
            const auto pts = select(points, [&](const CasePoint& p) { return p.label == label; });
            try {
                class_fits.push_back({std::string(falseness::to_string(label)), stats::linear_fit(to_points(pts))});
            } catch (const DomainError& e) {
                err << "warning: no fit line for " << falseness::to_string(label) << ": " << e.what() << '\n';
            }
        }
        files["scatter.svg"] = svg::scatter_figure(points, class_fits, header);

        std::vector<CasePoint> filtered;
        for (const auto& p : points)
            if (!config.categories || config.categories->contains(p.category.label)) filtered.push_back(p);
        if (filtered.empty()) {
            err << "warning: category filter selects no points; per-category figure not written\n";
        } else {
            std::vector<svg::FitLine> cat_fits;
            std::vector<svg::EllipseOverlay> ellipses;
            for (const auto& cat : categories_of(filtered)) {
                const auto pp = to_points(select(filtered, [&](const CasePoint& p) { return p.category.label == cat; }));
                try {
                    cat_fits.push_back({cat, stats::linear_fit(pp)});
                } catch (const DomainError& e) {
                    err << "warning: no fit line for category '" << cat << "': " << e.what() << '\n';
                }
                try {
                    ellipses.push_back(
                        {cat, stats::covariance_ellipse(pp, 3.0), stats::mahalanobis_summary(pp).mean_distance});
                } catch (const DomainError& e) {
                    err << "warning: no ellipse for category '" << cat << "': " << e.what() << '\n';
                }
            }
            files["categories.svg"] = svg::category_figure(filtered, cat_fits, header);
            files["ellipses.svg"] = svg::ellipse_figure(filtered, ellipses, header);
        }

        if (!config.grids_dir.empty()) {
            std::vector<fs::path> grids;
            for (const auto& entry : fs::directory_iterator(config.grids_dir)) {
                const auto name = entry.path().filename().string();
                if (name.starts_with("grid_") && entry.path().extension() == ".txt") grids.push_back(entry.path());
            }
            std::sort(grids.begin(), grids.end());
            for (const auto& path : grids) {
                std::ifstream in(path, std::ios::binary);
                if (!in) throw Error("cannot read grid file " + path.string());
                const auto grid = classify::read_grid(in);
                const std::string model = path.stem().string().substr(5);
                const auto kind = classify::parse_model_kind(model);
                const std::string name = kind ? std::string(classify::to_string(*kind)) : model;
                files["boundary_" + model + ".svg"] = svg::boundary_figure(grid, name, points, header);
            }
        }
        for (const auto& [name, content] : files) write_file(config.output_dir / name, content);
        return kOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kFatal;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kFatal;
    }
}

}  // namespace falsimeter::commands
