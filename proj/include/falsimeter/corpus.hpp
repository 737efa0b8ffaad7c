#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

namespace falsimeter::corpus {

enum class Role { full_story, false_news, real_news };

std::string_view to_string(Role role) noexcept;
std::optional<Role> parse_role(std::string_view s) noexcept;

/// Topic category. The input label is kept verbatim; `kind` is derived from it.
struct Category {
    enum class Kind { politics, science, civics, other };

    Kind kind = Kind::other;
    std::string label;

    static Category from_label(std::string label);

    friend bool operator==(const Category& a, const Category& b) { return a.label == b.label; }
    friend auto operator<=>(const Category& a, const Category& b) { return a.label <=> b.label; }
};

struct Document {
    std::string id;
    Role role = Role::full_story;
    std::optional<std::string> source_url;
    std::optional<std::string> date;  // YYYY-MM-DD
    std::string raw_text;
    /// Absent until cleaned; pre-cleaned input keeps its own value.
    std::optional<std::string> clean_text;

    friend bool operator==(const Document&, const Document&) = default;
};

struct CaseRecord {
    std::string case_id;
    Category category;
    Document full_story;
    Document false_article;
    Document real_article;

    friend bool operator==(const CaseRecord& a, const CaseRecord& b) {
        return a.case_id == b.case_id && a.category == b.category && a.full_story == b.full_story &&
               a.false_article == b.false_article && a.real_article == b.real_article;
    }
};

/// Slot names as they appear in the corpus format.
inline constexpr std::string_view kFullStorySlot = "full_story";
inline constexpr std::string_view kFalseSlot = "false_article";
inline constexpr std::string_view kRealSlot = "real_article";

Role expected_role(std::string_view slot);

// -- corpus line format ------------------------------------------------------

/// One JSON object per line. Blank lines and lines starting with '#' are
/// skipped. Throws ParseError naming the line and field.
std::vector<CaseRecord> parse_corpus(const std::filesystem::path& path);
std::vector<CaseRecord> parse_corpus(std::istream& in);

CaseRecord parse_record_line(std::string_view line, std::size_t line_no);
std::string serialize_record(const CaseRecord& record);

/// Writes one line per record; `header_comment` (without '#') is emitted
/// first when non-empty.
void write_corpus(std::ostream& out, const std::vector<CaseRecord>& records,
                  std::string_view header_comment = {});

// -- cleaning ----------------------------------------------------------------

class CleaningRule {
public:
    enum class Action { delete_match, delete_line };

    /// Throws ConfigError on an invalid expression.
    CleaningRule(Action action, std::string pattern);

    Action action() const noexcept { return action_; }
    const std::string& pattern() const noexcept { return pattern_; }
    const std::regex& regex() const noexcept { return regex_; }

private:
    Action action_;
    std::string pattern_;
    std::regex regex_;
};

/// Bracketed captions, photo credits, reporter bylines, e-mail addresses,
/// date stamps and correction-note lines.
std::vector<CleaningRule> default_rules();

/// `action<TAB>pattern` per line; blank and '#' lines ignored.
std::vector<CleaningRule> load_rules(const std::filesystem::path& path);
std::vector<CleaningRule> parse_rules(std::istream& in);

/// Applies the rules in order, collapses whitespace, and repeats until the
/// text stops changing, so the result is a fixed point.
std::string clean_text(std::string_view raw, const std::vector<CleaningRule>& rules);

/// Fills every missing clean_text from raw_text. Existing values are kept.
void prepare(CaseRecord& record, const std::vector<CleaningRule>& rules);

// -- validation --------------------------------------------------------------

struct Finding {
    std::string case_id;
    std::string slot;
    std::string message;

    friend bool operator==(const Finding&, const Finding&) = default;
};

/// Checks each slot for a matching role, a present and non-empty clean_text,
/// and at least one noun under the fallback tokenizer with the default noun
/// tags (so a clean record is always scorable).
std::vector<Finding> validate_case(const CaseRecord& record);

}  // namespace falsimeter::corpus
