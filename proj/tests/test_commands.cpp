#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "falsimeter/classify.hpp"
#include "falsimeter/commands.hpp"
#include "falsimeter/corpus.hpp"
#include "falsimeter/falseness.hpp"
#include "falsimeter/random.hpp"
#include "falsimeter/stats.hpp"
#include "support.hpp"
#include "xml_check.hpp"

using namespace falsimeter;
using namespace falsimeter::commands;
using falseness::CasePoint;
using falseness::ClassLabel;
using testsupport::count_substr;
using testsupport::read_file;
using testsupport::TempDir;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

corpus::Document doc(const std::string& id, corpus::Role role, std::string text) {
    corpus::Document d;
    d.id = id;
    d.role = role;
    d.raw_text = std::move(text);
    return d;
}

corpus::CaseRecord record(const std::string& id, const std::string& category, std::string full, std::string f,
                          std::string r) {
    corpus::CaseRecord rec;
    rec.case_id = id;
    rec.category = corpus::Category::from_label(category);
    rec.full_story = doc(id + "-full", corpus::Role::full_story, std::move(full));
    rec.false_article = doc(id + "-false", corpus::Role::false_news, std::move(f));
    rec.real_article = doc(id + "-real", corpus::Role::real_news, std::move(r));
    return rec;
}

void write_corpus_file(const fs::path& path, const std::vector<corpus::CaseRecord>& records) {
    std::ostringstream out;
    corpus::write_corpus(out, records);
    testsupport::write_file(path, out.str());
}

std::vector<corpus::CaseRecord> two_cases() {
    return {record("c1", "politics", "정부 예산 발표 국회 통과", "정부 예산 음모", "정부 예산 국회"),
            record("c2", "science", "연구 결과 실험 논문", "연구 기적", "연구 결과 실험")};
}

std::size_t data_rows(const std::string& csv_text) {
    std::size_t rows = 0;
    std::istringstream in(csv_text);
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            header = true;
            continue;
        }
        ++rows;
    }
    return rows;
}

void write_scores(const fs::path& path, const std::vector<CasePoint>& points) {
    std::ostringstream out;
    falseness::write_scores_csv(out, points, "fixture");
    testsupport::write_file(path, out.str());
}

CasePoint point(std::string id, ClassLabel label, std::string category, double c, double o) {
    return {std::move(id), label, corpus::Category::from_label(std::move(category)), {c, o}};
}

// Points on y = 0.5x + 0.1 (false) and y = -0.25x + 0.6 (real), all exact at
// six decimals.
std::vector<CasePoint> line_scores() {
    std::vector<CasePoint> pts;
    const char* cats[] = {"politics", "science"};
    for (int i = 0; i < 10; ++i) {
        const double x = 0.08 * (i + 1);
        pts.push_back(point("f" + std::to_string(i), ClassLabel::false_news, cats[i % 2], x, 0.5 * x + 0.1));
        pts.push_back(point("r" + std::to_string(i), ClassLabel::real_news, cats[i % 2], x, -0.25 * x + 0.6));
    }
    return pts;
}

std::vector<CasePoint> separable_scores() {
    std::vector<CasePoint> pts;
    for (int i = 0; i < 12; ++i) {
        const double d = 0.01 * i;
        pts.push_back(point("f" + std::to_string(i), ClassLabel::false_news, "politics", 0.1 + d, 0.15 + d / 2));
        pts.push_back(point("r" + std::to_string(i), ClassLabel::real_news, "politics", 0.8 + d / 2, 0.75 + d));
    }
    return pts;
}

RunConfig config_in(const TempDir& dir) {
    RunConfig c;
    c.output_dir = dir.path() / "out";
    c.corpus_path = dir / "corpus.jsonl";
    c.grid_cols = 20;
    c.grid_rows = 20;
    return c;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::directory_iterator(dir)) files[e.path().filename().string()] = read_file(e.path());
    return files;
}

double attr(const std::string& element, const std::string& name) {
    const std::regex re(name + "=\"([^\"]+)\"");
    std::smatch m;
    REQUIRE(std::regex_search(element, m, re));
    return std::stod(m[1].str());
}

}  // namespace

TEST_CASE("measure writes one row per article") {
    TempDir dir;
    write_corpus_file(dir / "corpus.jsonl", two_cases());
    std::ostringstream err;
    const auto cfg = config_in(dir);
    CHECK(cmd_measure(cfg, err) == kOk);
    const auto scores = read_file(cfg.output_dir / "scores.csv");
    CHECK(data_rows(scores) == 4);

    const auto points = falseness::read_scores_csv(cfg.output_dir / "scores.csv");
    REQUIRE(points.size() == 4);
    // c1 false: full {정부,예산,발표,국회,통과}, article {정부,예산,음모}
    CHECK(points[0].case_id == "c1");
    CHECK(points[0].label == ClassLabel::false_news);
    CHECK(points[0].score.concealment == doctest::Approx(0.6));
    CHECK(points[0].score.overstatement == doctest::Approx(1.0 / 3.0).epsilon(1e-6));

    const auto summary = json::parse(read_file(cfg.output_dir / "measure_summary.json"));
    CHECK(summary["tokenization"]["naive_fallback"] == true);
    CHECK(summary["class_stats"].contains("full_story"));
    CHECK(err.str().find("fallback tokenizer") != std::string::npos);
}

TEST_CASE("measure skips an empty article and reports partial success") {
    TempDir dir;
    auto cases = two_cases();
    cases[1].real_article.raw_text = "";
    write_corpus_file(dir / "corpus.jsonl", cases);
    std::ostringstream err;
    const auto cfg = config_in(dir);
    CHECK(cmd_measure(cfg, err) == kPartial);
    CHECK(data_rows(read_file(cfg.output_dir / "scores.csv")) == 3);
    CHECK(err.str().find("c2") != std::string::npos);
    const auto summary = json::parse(read_file(cfg.output_dir / "measure_summary.json"));
    REQUIRE(summary["skipped"].size() == 1);
    CHECK(summary["skipped"][0]["case_id"] == "c2");
    CHECK(summary["skipped"][0]["slot"] == "real_article");
}

TEST_CASE("measure prefers tagged files over the fallback tokenizer") {
    TempDir dir;
    write_corpus_file(dir / "corpus.jsonl", {two_cases()[0]});
    const auto tagged = dir / "tagged";
    fs::create_directories(tagged / "c1");
    testsupport::write_file(tagged / "c1" / "full_story.tsv", "정부\tNNG\n예산\tNNG\n발표\tNNG\n.\tSF\n");
    testsupport::write_file(tagged / "c1" / "false_article.tsv", "정부\tNNG\n했다\tVV\n");
    testsupport::write_file(tagged / "c1" / "real_article.tsv", "정부\tNNG\n예산\tNNG\n발표\tNNG\n");
    auto cfg = config_in(dir);
    cfg.tagged_dir = tagged;
    std::ostringstream err;
    CHECK(cmd_measure(cfg, err) == kOk);
    const auto points = falseness::read_scores_csv(cfg.output_dir / "scores.csv");
    REQUIRE(points.size() == 2);
    CHECK(points[0].score.concealment == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
    CHECK(points[0].score.overstatement == 0.0);
    CHECK(points[1].score == falseness::FalsenessScore{0.0, 0.0});
    const auto summary = json::parse(read_file(cfg.output_dir / "measure_summary.json"));
    CHECK(summary["tokenization"]["naive_fallback"] == false);
}

TEST_CASE("missing corpus is fatal") {
    TempDir dir;
    std::ostringstream err;
    CHECK(cmd_measure(config_in(dir), err) == kFatal);
    CHECK(err.str().find("corpus.jsonl") != std::string::npos);
    RunConfig none;
    none.output_dir = dir.path();
    CHECK(cmd_measure(none, err) == kFatal);
}

TEST_CASE("repeated runs produce byte-identical output") {
    TempDir dir;
    std::ostringstream err;
    SynthSpec spec;
    spec.n_cases = 12;
    spec.noise_std = 0.05;
    RunConfig synth_cfg;
    synth_cfg.output_dir = dir.path();
    REQUIRE(cmd_synth(spec, synth_cfg, err) == kOk);

    std::vector<std::map<std::string, std::string>> runs;
    for (int run = 0; run < 2; ++run) {
        auto cfg = config_in(dir);
        cfg.output_dir = dir.path() / ("run" + std::to_string(run));
        REQUIRE(cmd_measure(cfg, err) == kOk);
        REQUIRE(cmd_stats(cfg, err) == kOk);
        cfg.grids_dir = cfg.output_dir;
        REQUIRE(cmd_classify(cfg, err) == kOk);
        REQUIRE(cmd_posdiff(cfg, err) == kOk);
        REQUIRE(cmd_report(cfg, err) == kOk);
        runs.push_back(snapshot(cfg.output_dir));
    }
    CHECK(runs[0].size() >= 15);
    CHECK(runs[0] == runs[1]);
}

TEST_CASE("every output file starts with a header naming version, seed and config") {
    TempDir dir;
    std::ostringstream err;
    SynthSpec spec;
    spec.n_cases = 9;
    spec.noise_std = 0.05;
    spec.seed = 7;
    auto cfg = config_in(dir);
    cfg.seed = 7;
    cfg.output_dir = dir.path();
    REQUIRE(cmd_synth(spec, cfg, err) == kOk);
    REQUIRE(cmd_measure(cfg, err) == kOk);
    REQUIRE(cmd_stats(cfg, err) == kOk);
    cfg.grids_dir = dir.path();
    REQUIRE(cmd_classify(cfg, err) == kOk);
    REQUIRE(cmd_posdiff(cfg, err) == kOk);
    REQUIRE(cmd_report(cfg, err) == kOk);

    const std::regex text_header(R"(^(# |<!-- )falsimeter 0\.1\.0 seed=7 config=[0-9a-f]{16}( -->)?$)");
    std::size_t checked = 0;
    for (const auto& [name, content] : snapshot(dir.path())) {
        CAPTURE(name);
        if (name.ends_with(".json")) {
            const auto j = json::parse(content);
            if (j.contains("meta")) {
                CHECK(j["meta"]["version"] == "0.1.0");
                CHECK(j["meta"]["seed"] == 7);
            } else {
                CHECK(std::regex_search(j["header"].get<std::string>(), std::regex("^falsimeter 0\\.1\\.0 seed=7")));
            }
        } else {
            const auto first = content.substr(0, content.find('\n'));
            CHECK(std::regex_match(first, text_header));
        }
        ++checked;
    }
    CHECK(checked >= 15);
}

TEST_CASE("the config hash follows settings that change content") {
    RunConfig a;
    RunConfig b;
    CHECK(config_hash(a) == config_hash(b));
    b.output_dir = "/elsewhere";
    CHECK(config_hash(a) == config_hash(b));
    b.folds = 3;
    CHECK(config_hash(a) != config_hash(b));
    RunConfig c;
    c.noun_tags = lingua::parse_tag_list("NNG");
    CHECK(config_hash(a) != config_hash(c));
    CHECK(config_hash(a, "x") != config_hash(a));
}

TEST_CASE("FALSIMETER_SEED supplies the default seed") {
    ::unsetenv("FALSIMETER_SEED");
    CHECK(default_seed() == 42);
    ::setenv("FALSIMETER_SEED", "1234", 1);
    CHECK(default_seed() == 1234);
    ::setenv("FALSIMETER_SEED", "12ab", 1);
    CHECK(default_seed(9) == 9);
    ::setenv("FALSIMETER_SEED", "", 1);
    CHECK(default_seed(9) == 9);
    ::unsetenv("FALSIMETER_SEED");
}

TEST_CASE("grid resolution parsing") {
    CHECK(parse_resolution("200x200") == std::pair<std::size_t, std::size_t>{200, 200});
    CHECK(parse_resolution("30x7") == std::pair<std::size_t, std::size_t>{30, 7});
    CHECK_THROWS(parse_resolution("200"));
    CHECK_THROWS(parse_resolution("0x10"));
    CHECK_THROWS(parse_resolution("x10"));
    CHECK_THROWS(parse_resolution("10x-1"));
}

TEST_CASE("stats on exact lines gives R squared of one") {
    TempDir dir;
    write_scores(dir / "scores.csv", line_scores());
    auto cfg = config_in(dir);
    cfg.scores_path = dir / "scores.csv";
    std::ostringstream err;
    REQUIRE(cmd_stats(cfg, err) == kOk);
    const auto j = json::parse(read_file(cfg.output_dir / "stats.json"));
    CHECK(j["classes"]["false_news"]["fit"]["r_squared"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(j["classes"]["real_news"]["fit"]["r_squared"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(j["classes"]["false_news"]["fit"]["slope"].get<double>() == doctest::Approx(0.5));
    CHECK(j["classes"]["real_news"]["fit"]["slope"].get<double>() == doctest::Approx(-0.25));
    CHECK(j["slope_test"]["a"] == "false_news");
    // per-class points are collinear, so only the category ellipses exist
    CHECK(j["ellipses"].size() == 2);
    CHECK(err.str().find("ellipse omitted for class") != std::string::npos);
    CHECK(fs::exists(cfg.output_dir / "stats_fits.csv"));
}

TEST_CASE("stats on identical class distributions gives a Mann-Whitney p of one") {
    TempDir dir;
    std::vector<CasePoint> pts;
    for (int i = 0; i < 8; ++i) {
        const double c = 0.1 * (1 + i % 4);
        const double o = 0.05 * (1 + (i * 3) % 5);
        pts.push_back(point("f" + std::to_string(i), ClassLabel::false_news, "politics", c, o));
        pts.push_back(point("r" + std::to_string(i), ClassLabel::real_news, "politics", c, o));
    }
    write_scores(dir / "scores.csv", pts);
    auto cfg = config_in(dir);
    cfg.scores_path = dir / "scores.csv";
    std::ostringstream err;
    REQUIRE(cmd_stats(cfg, err) == kOk);
    const auto j = json::parse(read_file(cfg.output_dir / "stats.json"));
    CHECK(j["mann_whitney"]["concealment"]["p_two_tailed"].get<double>() == 1.0);
    CHECK(j["mann_whitney"]["overstatement"]["p_two_tailed"].get<double>() == 1.0);
}

TEST_CASE("stats output matches the stats functions on the same file") {
    TempDir dir;
    std::ostringstream err;
    SynthSpec spec;
    spec.n_cases = 30;
    spec.noise_std = 0.08;
    spec.real_concealment = 0.2;
    spec.real_overstatement = 0.1;
    auto cfg = config_in(dir);
    cfg.output_dir = dir.path();
    REQUIRE(cmd_synth(spec, cfg, err) == kOk);
    REQUIRE(cmd_measure(cfg, err) == kOk);
    REQUIRE(cmd_stats(cfg, err) == kOk);
    const auto j = json::parse(read_file(dir / "stats.json"));

    const auto points = falseness::read_scores_csv(dir / "scores.csv");
    std::vector<stats::Point2> f, r;
    std::vector<double> fc, rc;
    for (const auto& p : points) {
        (p.label == ClassLabel::false_news ? f : r).push_back({p.score.concealment, p.score.overstatement});
        (p.label == ClassLabel::false_news ? fc : rc).push_back(p.score.concealment);
    }
    const auto ff = stats::linear_fit(f);
    const auto rf = stats::linear_fit(r);
    const auto t = stats::compare_slopes(ff, rf);
    const auto mw = stats::mann_whitney_u(fc, rc);
    const auto e = stats::covariance_ellipse(f, 3.0);
    const auto close = [](const json& v, double want) {
        return std::abs(v.get<double>() - want) <= 5e-6 * std::max(1.0, std::abs(want));
    };
    CHECK(close(j["classes"]["false_news"]["fit"]["slope"], ff.slope));
    CHECK(close(j["classes"]["false_news"]["fit"]["intercept"], ff.intercept));
    CHECK(close(j["classes"]["real_news"]["fit"]["r_squared"], rf.r_squared));
    CHECK(close(j["classes"]["real_news"]["fit"]["slope_std_error"], rf.slope_std_error));
    CHECK(close(j["slope_test"]["t"], t.t));
    CHECK(j["slope_test"]["df"] == t.df);
    CHECK(close(j["slope_test"]["p_two_tailed"], t.p_two_tailed));
    CHECK(close(j["mann_whitney"]["concealment"]["u"], mw.u_statistic));
    CHECK(close(j["mann_whitney"]["concealment"]["z"], mw.z_score));
    bool found = false;
    for (const auto& g : j["ellipses"]) {
        if (g["kind"] != "class" || g["group"] != "false_news") continue;
        found = true;
        CHECK(close(g["centroid"][0], e.centroid.x));
        CHECK(close(g["semi_major"], e.semi_major));
        CHECK(close(g["orientation"], e.orientation));
    }
    CHECK(found);
}

TEST_CASE("stats omits analyses without enough points and warns") {
    TempDir dir;
    auto pts = line_scores();
    pts.push_back(point("lonely", ClassLabel::false_news, "civics", 0.5, 0.5));
    write_scores(dir / "scores.csv", pts);
    auto cfg = config_in(dir);
    cfg.scores_path = dir / "scores.csv";
    std::ostringstream err;
    REQUIRE(cmd_stats(cfg, err) == kOk);
    const auto j = json::parse(read_file(cfg.output_dir / "stats.json"));
    CHECK(j["categories"]["civics"]["false_news"].is_null());
    CHECK(!j["warnings"].empty());
    CHECK(err.str().find("civics") != std::string::npos);
}

TEST_CASE("classify separates separable scores perfectly") {
    TempDir dir;
    write_scores(dir / "scores.csv", separable_scores());
    auto cfg = config_in(dir);
    cfg.scores_path = dir / "scores.csv";
    std::ostringstream err;
    REQUIRE(cmd_classify(cfg, err) == kOk);
    const auto report = read_file(cfg.output_dir / "cv_report.csv");
    CHECK(data_rows(report) == 6);
    std::istringstream in(report);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.starts_with("model,")) continue;
        CAPTURE(line);
        CHECK(line.find(",1.000000,0.000000,") != std::string::npos);
    }
    for (auto k : classify::kAllModels) {
        const std::string name(classify::short_name(k));
        CHECK(fs::exists(cfg.output_dir / ("grid_" + name + ".txt")));
        CHECK(fs::exists(cfg.output_dir / ("boundary_" + name + ".svg")));
    }
    std::ifstream g(cfg.output_dir / "grid_lr.txt");
    const auto grid = classify::read_grid(g);
    CHECK(grid.cols == 20);
    CHECK(grid.at(0, 0) == ClassLabel::false_news);
    CHECK(grid.at(19, 19) == ClassLabel::real_news);
}

TEST_CASE("classify honours the model subset") {
    TempDir dir;
    write_scores(dir / "scores.csv", separable_scores());
    auto cfg = config_in(dir);
    cfg.scores_path = dir / "scores.csv";
    cfg.models = classify::parse_model_list("lr,dt");
    std::ostringstream err;
    REQUIRE(cmd_classify(cfg, err) == kOk);
    CHECK(data_rows(read_file(cfg.output_dir / "cv_report.csv")) == 2);
    CHECK(!fs::exists(cfg.output_dir / "grid_rf.txt"));
}

TEST_CASE("classify reproduces fold accuracies for a fixed seed") {
    TempDir dir;
    write_scores(dir / "scores.csv", line_scores());
    auto cfg = config_in(dir);
    cfg.scores_path = dir / "scores.csv";
    cfg.seed = 11;
    std::ostringstream err;
    REQUIRE(cmd_classify(cfg, err) == kOk);
    const auto first = read_file(cfg.output_dir / "cv_report.csv");
    REQUIRE(cmd_classify(cfg, err) == kOk);
    CHECK(read_file(cfg.output_dir / "cv_report.csv") == first);
}

TEST_CASE("classify rejects single-class input") {
    TempDir dir;
    std::vector<CasePoint> pts;
    for (const auto& p : separable_scores())
        if (p.label == ClassLabel::real_news) pts.push_back(p);
    write_scores(dir / "scores.csv", pts);
    auto cfg = config_in(dir);
    cfg.scores_path = dir / "scores.csv";
    std::ostringstream err;
    CHECK(cmd_classify(cfg, err) == kFatal);
    CHECK(err.str().find("false_news") != std::string::npos);
}

TEST_CASE("posdiff writes the table and totals") {
    TempDir dir;
    write_corpus_file(dir / "corpus.jsonl", two_cases());
    auto cfg = config_in(dir);
    std::ostringstream err;
    REQUIRE(cmd_posdiff(cfg, err) == kOk);
    const auto rows = read_file(cfg.output_dir / "posdiff.csv");
    const auto totals = read_file(cfg.output_dir / "posdiff_totals.csv");
    CHECK(data_rows(rows) > 0);
    CHECK(data_rows(totals) > 0);
    CHECK(rows.find("NNG") != std::string::npos);
}

TEST_CASE("synth then measure recovers the planted rates exactly") {
    TempDir dir;
    SynthSpec spec;
    spec.n_cases = 20;
    spec.nouns_per_story = 20;
    auto cfg = config_in(dir);
    cfg.output_dir = dir.path();
    std::ostringstream err;
    REQUIRE(cmd_synth(spec, cfg, err) == kOk);
    REQUIRE(cmd_measure(cfg, err) == kOk);
    const auto points = falseness::read_scores_csv(dir / "scores.csv");
    REQUIRE(points.size() == 40);
    for (const auto& p : points) {
        CAPTURE(p.case_id);
        CHECK(p.score.concealment == 0.4);
        CHECK(p.score.overstatement == 0.25);
    }
    const auto manifest = json::parse(read_file(dir / "synth_manifest.json"));
    CHECK(manifest["rounded_cases"].empty());
}

TEST_CASE("synth with zero rates copies the story nouns") {
    SynthSpec spec;
    spec.n_cases = 5;
    spec.planted_concealment = 0.0;
    spec.planted_overstatement = 0.0;
    const auto result = synthesize(spec);
    for (const auto& rec : result.records) {
        const auto [f, r] = falseness::score_case(rec);
        CHECK(f.score == falseness::FalsenessScore{0.0, 0.0});
        CHECK(r.score == falseness::FalsenessScore{0.0, 0.0});
    }
}

TEST_CASE("synth reports rates it can only approximate") {
    SynthSpec spec;
    spec.n_cases = 3;
    spec.nouns_per_story = 7;
    const auto result = synthesize(spec);
    const auto manifest = json::parse(result.manifest_json);
    CHECK(manifest["rounded_cases"].size() == 6);
    const auto& first = manifest["rounded_cases"][0];
    // 0.4 * 7 rounds to 3 removed; 0.25 / 0.75 * 4 rounds to 1 added
    CHECK(first["achieved"][0].get<double>() == doctest::Approx(3.0 / 7.0).epsilon(1e-5));
    CHECK(first["achieved"][1].get<double>() == doctest::Approx(0.2));
}

TEST_CASE("synth is deterministic per seed and rejects bad settings") {
    SynthSpec spec;
    spec.n_cases = 6;
    spec.noise_std = 0.1;
    const auto a = synthesize(spec);
    const auto b = synthesize(spec);
    CHECK(a.records == b.records);
    CHECK(a.manifest_json == b.manifest_json);
    spec.seed = 43;
    CHECK(!(synthesize(spec).records == a.records));

    SynthSpec bad;
    bad.planted_concealment = 1.5;
    CHECK_THROWS(synthesize(bad));
    bad = {};
    bad.noise_std = -0.1;
    CHECK_THROWS(synthesize(bad));
    bad = {};
    bad.n_cases = 0;
    CHECK_THROWS(synthesize(bad));
}

TEST_CASE("report draws one fit line per class") {
    TempDir dir;
    write_scores(dir / "scores.csv", line_scores());
    auto cfg = config_in(dir);
    cfg.scores_path = dir / "scores.csv";
    std::ostringstream err;
    REQUIRE(cmd_report(cfg, err) == kOk);
    const auto scatter = read_file(cfg.output_dir / "scatter.svg");
    CHECK(count_substr(scatter, "<line ") == 2);
    CHECK(count_substr(scatter, "data-class=\"false_news\" data-slope") == 1);
    CHECK(count_substr(scatter, "<circle ") == 20);
    for (const auto* name : {"scatter.svg", "categories.svg", "ellipses.svg"}) {
        CAPTURE(name);
        std::string why;
        CHECK_MESSAGE(testsupport::well_formed_svg(read_file(cfg.output_dir / name), &why), why);
    }

    std::vector<CasePoint> one_class;
    for (const auto& p : line_scores())
        if (p.label == ClassLabel::real_news) one_class.push_back(p);
    write_scores(dir / "scores.csv", one_class);
    REQUIRE(cmd_report(cfg, err) == kOk);
    CHECK(count_substr(read_file(cfg.output_dir / "scatter.svg"), "<line ") == 1);
}

TEST_CASE("report ellipse attributes match the ellipse summary") {
    TempDir dir;
    const auto pts = line_scores();
    write_scores(dir / "scores.csv", pts);
    auto cfg = config_in(dir);
    cfg.scores_path = dir / "scores.csv";
    std::ostringstream err;
    REQUIRE(cmd_report(cfg, err) == kOk);
    const auto svg_text = read_file(cfg.output_dir / "ellipses.svg");

    const auto parsed = falseness::read_scores_csv(dir / "scores.csv");
    for (const std::string cat : {"politics", "science"}) {
        std::vector<stats::Point2> group;
        for (const auto& p : parsed)
            if (p.category.label == cat) group.push_back({p.score.concealment, p.score.overstatement});
        const auto e = stats::covariance_ellipse(group, 3.0);
        const auto start = svg_text.find("data-group=\"" + cat + "\"");
        REQUIRE(start != std::string::npos);
        const auto open = svg_text.rfind("<ellipse", start);
        const auto element = svg_text.substr(open, svg_text.find("/>", start) - open);
        CHECK(std::abs(attr(element, "data-centroid-x") - e.centroid.x) <= 1e-6);
        CHECK(std::abs(attr(element, "data-centroid-y") - e.centroid.y) <= 1e-6);
        CHECK(std::abs(attr(element, "data-semi-major") - e.semi_major) <= 1e-6);
        CHECK(std::abs(attr(element, "data-orientation") - e.orientation) <= 1e-6);
    }
}

TEST_CASE("report with an empty category selection skips the category figures") {
    TempDir dir;
    write_scores(dir / "scores.csv", line_scores());
    auto cfg = config_in(dir);
    cfg.scores_path = dir / "scores.csv";
    cfg.categories = std::set<std::string>{};
    std::ostringstream err;
    REQUIRE(cmd_report(cfg, err) == kOk);
    CHECK(fs::exists(cfg.output_dir / "scatter.svg"));
    CHECK(!fs::exists(cfg.output_dir / "categories.svg"));
    CHECK(err.str().find("warning") != std::string::npos);

    TempDir other;
    write_scores(other / "scores.csv", line_scores());
    auto some = config_in(other);
    some.scores_path = other / "scores.csv";
    some.categories = std::set<std::string>{"science"};
    REQUIRE(cmd_report(some, err) == kOk);
    const auto cats = read_file(some.output_dir / "categories.svg");
    CHECK(count_substr(cats, "data-category=\"science\"") == 1);
    CHECK(count_substr(cats, "data-category=\"politics\"") == 0);
}

TEST_CASE("report names a missing upstream file") {
    TempDir dir;
    auto cfg = config_in(dir);
    cfg.scores_path = dir / "nowhere.csv";
    std::ostringstream err;
    CHECK(cmd_report(cfg, err) == kFatal);
    CHECK(err.str().find("nowhere.csv") != std::string::npos);

    write_scores(dir / "scores.csv", line_scores());
    cfg.scores_path = dir / "scores.csv";
    cfg.grids_dir = dir / "no-grids";
    std::ostringstream err2;
    CHECK(cmd_report(cfg, err2) == kFatal);
    CHECK(err2.str().find("no-grids") != std::string::npos);
}

TEST_CASE("report renders boundary figures from classify grids") {
    TempDir dir;
    write_scores(dir / "scores.csv", separable_scores());
    auto cfg = config_in(dir);
    cfg.scores_path = dir / "scores.csv";
    cfg.models = classify::parse_model_list("nb,rf");
    cfg.report_formats = {"csv"};
    std::ostringstream err;
    REQUIRE(cmd_classify(cfg, err) == kOk);
    CHECK(!fs::exists(cfg.output_dir / "boundary_nb.svg"));
    cfg.grids_dir = cfg.output_dir;
    REQUIRE(cmd_report(cfg, err) == kOk);
    for (const auto* name : {"boundary_nb.svg", "boundary_rf.svg"}) {
        CAPTURE(name);
        const auto content = read_file(cfg.output_dir / name);
        CHECK(testsupport::well_formed_svg(content));
        CHECK(content.find("fill=\"#d62728\" fill-opacity=\"0.25\"") != std::string::npos);
    }
}

TEST_CASE("command-line binary exit codes") {
    TempDir dir;
    const std::string cli = FALSIMETER_CLI;
    const auto run = [&](const std::string& args) {
        const int status = std::system((cli + " " + args + " >/dev/null 2>&1").c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    const std::string out = dir.path().string();
    CHECK(run("synth --cases 5 --out " + out) == 0);
    CHECK(run("measure --corpus " + out + "/corpus.jsonl --out " + out) == 0);
    CHECK(run("stats --out " + out) == 0);
    CHECK(run("measure --corpus " + out + "/missing.jsonl --out " + out) == 1);
    CHECK(run("classify --out " + out + " --models lr,bogus") == 1);
    CHECK(run("stats --out " + out + " --grid 10") == 1);
}

TEST_CASE("synth round trip holds for random rates") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        SynthSpec spec;
        spec.n_cases = 2;
        spec.nouns_per_story = 1 + rng.below(40);
        spec.planted_concealment = rng.uniform();
        spec.planted_overstatement = rng.uniform(0.0, 0.95);
        spec.seed = static_cast<std::uint64_t>(trial);
        const double n = static_cast<double>(spec.nouns_per_story);
        const double removed = std::round(spec.planted_concealment * n);
        const double kept = n - removed;
        const double added = kept == 0 ? std::max(1.0, std::round(n * spec.planted_overstatement))
                                        : std::round(spec.planted_overstatement / (1 - spec.planted_overstatement) * kept);
        for (const auto& rec : synthesize(spec).records) {
            CAPTURE(spec.nouns_per_story);
            CAPTURE(spec.planted_concealment);
            CAPTURE(spec.planted_overstatement);
            const auto [f, r] = falseness::score_case(rec);
            CHECK(f.score.concealment == removed / n);
            CHECK(f.score.overstatement == added / (kept + added));
            CHECK(r.score == f.score);
        }
    }
}
