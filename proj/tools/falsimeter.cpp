#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "falsimeter/commands.hpp"
#include "falsimeter/error.hpp"
#include "falsimeter/text.hpp"

using namespace falsimeter;
using commands::RunConfig;

namespace {

struct SharedFlags {
    std::string noun_tags;
    std::string pos_tags;
    std::string grid;
    std::string formats;
    std::string models;
    std::string categories;
    std::optional<std::uint64_t> seed;
};

void add_shared(CLI::App* cmd, RunConfig& config, SharedFlags& flags) {
    cmd->add_option("--corpus", config.corpus_path, "Corpus file (JSON Lines)");
    cmd->add_option("--tagged-dir", config.tagged_dir, "Directory of <case_id>/<slot>.tsv tagged files");
    cmd->add_option("--noun-tags", flags.noun_tags, "Noun tags used for scoring, e.g. NNG,NNP");
    cmd->add_option("--pos-tags", flags.pos_tags, "Tags reported by posdiff");
    cmd->add_option("--rules", config.cleaning_rules_path, "Cleaning rules file (action<TAB>pattern)");
    cmd->add_option("--folds", config.folds, "Cross-validation folds")->check(CLI::Range(2, 1000));
    cmd->add_option("--seed", flags.seed, "Random seed (default: FALSIMETER_SEED or 42)");
    cmd->add_option("--grid", flags.grid, "Decision grid resolution, e.g. 200x200");
    cmd->add_option("--out", config.output_dir, "Output directory");
    cmd->add_option("--format", flags.formats, "Output formats: csv,json,svg");
    cmd->add_option("--models", flags.models, "Models: lr,nb,qda,svm,rf,dt");
    cmd->add_option("--scores", config.scores_path, "Scores CSV (default: <out>/scores.csv)");
    cmd->add_option("--grids", config.grids_dir, "Directory holding grid_<model>.txt files");
    cmd->add_option("--categories", flags.categories, "Category filter for the per-category figure");
}

void apply(const SharedFlags& flags, RunConfig& config) {
    config.seed = flags.seed.value_or(commands::default_seed());
    if (!flags.noun_tags.empty()) config.noun_tags = lingua::parse_tag_list(flags.noun_tags);
    if (!flags.pos_tags.empty()) config.pos_tags = lingua::parse_tag_list(flags.pos_tags);
    if (!flags.grid.empty()) std::tie(config.grid_cols, config.grid_rows) = commands::parse_resolution(flags.grid);
    if (!flags.formats.empty()) {
        config.report_formats.clear();
        for (const auto& f : text::split(flags.formats, ',')) {
            const std::string name(text::trim(f));
            if (name != "csv" && name != "json" && name != "svg") throw ConfigError("unknown format '" + name + "'");
            config.report_formats.insert(name);
        }
    }
    if (!flags.models.empty()) config.models = classify::parse_model_list(flags.models);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Measures concealment and overstatement of news articles against a reference story"};
    app.set_version_flag("--version", std::string(commands::kVersion));
    app.require_subcommand(1);

    RunConfig config;
    SharedFlags flags;
    std::optional<std::string> category_filter;

    auto* measure = app.add_subcommand("measure", "Score every case of a corpus");
    auto* stats = app.add_subcommand("stats", "Regression fits, tests and ellipses over scores");
    auto* classify = app.add_subcommand("classify", "Cross-validate classifiers and export decision grids");
    auto* posdiff = app.add_subcommand("posdiff", "Concealed/overstated tokens per tag, category and class");
    auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with planted rates");
    auto* report = app.add_subcommand("report", "Render SVG figures from earlier outputs");
    for (auto* cmd : {measure, stats, classify, posdiff, synth, report}) add_shared(cmd, config, flags);
    report->callback([&] {
        if (report->count("--categories") > 0) category_filter = flags.categories;
    });

    commands::SynthSpec spec;
    std::string synth_categories;
    std::optional<double> real_c;
    std::optional<double> real_o;
    synth->add_option("--cases", spec.n_cases, "Number of cases")->check(CLI::PositiveNumber);
    synth->add_option("--nouns", spec.nouns_per_story, "Distinct nouns per full story")->check(CLI::PositiveNumber);
    synth->add_option("--concealment", spec.planted_concealment, "Planted concealment of false articles")
        ->check(CLI::Range(0.0, 1.0));
    synth->add_option("--overstatement", spec.planted_overstatement, "Planted overstatement of false articles")
        ->check(CLI::Range(0.0, 1.0));
    synth->add_option("--real-concealment", real_c, "Planted concealment of real articles")
        ->check(CLI::Range(0.0, 1.0));
    synth->add_option("--real-overstatement", real_o, "Planted overstatement of real articles")
        ->check(CLI::Range(0.0, 1.0));
    synth->add_option("--noise", spec.noise_std, "Gaussian jitter added to the planted rates")
        ->check(CLI::NonNegativeNumber);
    synth->add_option("--synth-categories", synth_categories, "Comma-separated categories, assigned round-robin");

    CLI11_PARSE(app, argc, argv);

    try {
        apply(flags, config);
        if (category_filter) {
            std::set<std::string> cats;
            for (const auto& c : text::split(*category_filter, ','))
                if (!text::trim(c).empty()) cats.emplace(text::trim(c));
            config.categories = std::move(cats);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return commands::kFatal;
    }

    if (*measure) return commands::cmd_measure(config, std::cerr);
    if (*stats) return commands::cmd_stats(config, std::cerr);
    if (*classify) return commands::cmd_classify(config, std::cerr);
    if (*posdiff) return commands::cmd_posdiff(config, std::cerr);
    if (*report) return commands::cmd_report(config, std::cerr);

    spec.seed = config.seed;
    spec.real_concealment = real_c;
    spec.real_overstatement = real_o;
    if (!synth_categories.empty()) {
        spec.categories.clear();
        for (const auto& c : text::split(synth_categories, ','))
            if (!text::trim(c).empty()) spec.categories.emplace_back(text::trim(c));
    }
    return commands::cmd_synth(spec, config, std::cerr);
}
