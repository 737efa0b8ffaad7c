#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "falsimeter/corpus.hpp"
#include "falsimeter/error.hpp"
#include "falsimeter/lingua.hpp"

namespace falsimeter::falseness {

enum class ClassLabel { false_news, real_news };

std::string_view to_string(ClassLabel label) noexcept;
std::optional<ClassLabel> parse_class_label(std::string_view s) noexcept;

/// Scatter coordinates: x = concealment, y = overstatement.
struct FalsenessScore {
    double concealment = 0.0;
    double overstatement = 0.0;

    friend bool operator==(const FalsenessScore&, const FalsenessScore&) = default;
};

struct CasePoint {
    std::string case_id;
    ClassLabel label = ClassLabel::false_news;
    corpus::Category category;
    FalsenessScore score;

    friend bool operator==(const CasePoint&, const CasePoint&) = default;
};

/// Fraction of the full story's nouns missing from the article,
/// |full \ article| / |full|. Throws DomainError on an empty full set.
double concealment(const lingua::NounSet& full, const lingua::NounSet& article);

/// Fraction of the article's nouns absent from the full story,
/// |article \ full| / |article|. Throws DomainError on an empty article set.
double overstatement(const lingua::NounSet& full, const lingua::NounSet& article);

struct NounConfig {
    lingua::TagSet tags = lingua::default_noun_tags();
};

/// Tokenized full story and the two articles of one case.
struct CaseDocuments {
    lingua::TaggedDocument full_story;
    lingua::TaggedDocument false_article;
    lingua::TaggedDocument real_article;
};

/// Fallback tokenization of the three clean texts (raw text when a document
/// was never cleaned).
CaseDocuments tokenize_case(const corpus::CaseRecord& record);

/// Pre-tagged files at `<dir>/<case_id>/<slot>.tsv`.
CaseDocuments load_tagged_case(const corpus::CaseRecord& record, const std::filesystem::path& dir);

/// Raised when one document of a case cannot be scored.
class ScoringError : public DomainError {
public:
    ScoringError(std::string case_id, std::string slot, const std::string& what)
        : DomainError("case '" + case_id + "' " + slot + ": " + what),
          case_id_(std::move(case_id)), slot_(std::move(slot)) {}

    const std::string& case_id() const noexcept { return case_id_; }
    const std::string& slot() const noexcept { return slot_; }

private:
    std::string case_id_;
    std::string slot_;
};

/// Scores one article of a case against the full story.
CasePoint score_article(const corpus::CaseRecord& record, const lingua::TaggedDocument& full,
                        const lingua::TaggedDocument& article, ClassLabel label, const NounConfig& config);

/// Both articles against the same full-story noun set: {false point, real point}.
std::pair<CasePoint, CasePoint> score_case(const corpus::CaseRecord& record, const CaseDocuments& docs,
                                           const NounConfig& config = {});
std::pair<CasePoint, CasePoint> score_case(const corpus::CaseRecord& record, const NounConfig& config = {});

// -- POS differences ---------------------------------------------------------

struct PosDiffCounts {
    std::size_t concealed = 0;
    std::size_t overstated = 0;

    PosDiffCounts& operator+=(const PosDiffCounts& o) {
        concealed += o.concealed;
        overstated += o.overstated;
        return *this;
    }
    friend bool operator==(const PosDiffCounts&, const PosDiffCounts&) = default;
};

using PosDiff = std::map<lingua::PosTag, PosDiffCounts>;

/// Per tag in `tags`: distinct full-story surfaces with that tag missing
/// from the article's same-tag surfaces, and the converse.
PosDiff pos_diff(const lingua::TaggedDocument& full, const lingua::TaggedDocument& article,
                 const lingua::TagSet& tags);

struct PosDiffKey {
    lingua::PosTag tag;
    std::string category;
    ClassLabel label = ClassLabel::false_news;

    friend bool operator==(const PosDiffKey&, const PosDiffKey&) = default;
    friend auto operator<=>(const PosDiffKey& a, const PosDiffKey& b) {
        if (auto c = a.tag <=> b.tag; c != 0) return c;
        if (auto c = a.category <=> b.category; c != 0) return c;
        return a.label <=> b.label;
    }
};

struct PosDiffTable {
    std::map<PosDiffKey, PosDiffCounts> rows;

    /// Sum over categories, per (tag, class).
    std::map<std::pair<lingua::PosTag, ClassLabel>, PosDiffCounts> totals() const;
    PosDiffTable& operator+=(const PosDiffTable& o);

    friend bool operator==(const PosDiffTable&, const PosDiffTable&) = default;
};

struct TokenizedCase {
    std::string case_id;
    corpus::Category category;
    CaseDocuments docs;
};

PosDiffTable aggregate_pos_diff(std::span<const TokenizedCase> cases, const lingua::TagSet& tags);

void write_pos_diff_csv(std::ostream& out, const PosDiffTable& table, std::string_view header_comment = {});
void write_pos_totals_csv(std::ostream& out, const PosDiffTable& table, std::string_view header_comment = {});

// -- scored-case CSV ---------------------------------------------------------

/// `case_id,class,category,concealment,overstatement`, six decimals.
void write_scores_csv(std::ostream& out, std::span<const CasePoint> points, std::string_view header_comment = {});
std::vector<CasePoint> read_scores_csv(std::istream& in);
std::vector<CasePoint> read_scores_csv(const std::filesystem::path& path);

}  // namespace falsimeter::falseness
