#include "falsimeter/corpus.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "falsimeter/error.hpp"
#include "falsimeter/lingua.hpp"
#include "falsimeter/text.hpp"

namespace falsimeter::corpus {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(Role role) noexcept {
    switch (role) {
        case Role::full_story: return "full_story";
        case Role::false_news: return "false_news";
        case Role::real_news: return "real_news";
    }
    return "full_story";
}

std::optional<Role> parse_role(std::string_view s) noexcept {
    if (s == "full_story") return Role::full_story;
    if (s == "false_news") return Role::false_news;
    if (s == "real_news") return Role::real_news;
    return std::nullopt;
}

Category Category::from_label(std::string label) {
    Category c;
    if (label == "politics")
        c.kind = Kind::politics;
    else if (label == "science")
        c.kind = Kind::science;
    else if (label == "civics")
        c.kind = Kind::civics;
    else
        c.kind = Kind::other;
    c.label = std::move(label);
    return c;
}

Role expected_role(std::string_view slot) {
    if (slot == kFullStorySlot) return Role::full_story;
    if (slot == kFalseSlot) return Role::false_news;
    if (slot == kRealSlot) return Role::real_news;
    throw ConfigError("unknown document slot '" + std::string(slot) + "'");
}

namespace {

bool is_iso_date(const std::string& s) {
    static const std::regex re(R"(^(\d{4})-(\d{2})-(\d{2})$)");
    std::smatch m;
    if (!std::regex_match(s, m, re)) return false;
    const int month = std::stoi(m[2]);
    const int day = std::stoi(m[3]);
    return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

std::string require_string(const ordered_json& obj, const std::string& key, const std::string& field,
                           std::size_t line_no) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(line_no, field, "missing field '" + field + "'");
    if (!it->is_string()) throw ParseError(line_no, field, "field '" + field + "' must be a string");
    return it->get<std::string>();
}

std::optional<std::string> optional_string(const ordered_json& obj, const std::string& key,
                                           const std::string& field, std::size_t line_no) {
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw ParseError(line_no, field, "field '" + field + "' must be a string");
    return it->get<std::string>();
}

Document parse_document(const ordered_json& record, std::string_view slot, const std::string& case_id,
                        std::size_t line_no) {
    const std::string name(slot);
    const auto it = record.find(name);
    if (it == record.end()) throw ParseError(line_no, name, "missing field '" + name + "'");
    if (!it->is_object()) throw ParseError(line_no, name, "field '" + name + "' must be an object");
    const auto& obj = *it;

    Document doc;
    doc.id = case_id + ":" + name;
    const std::string role_text = require_string(obj, "role", name + ".role", line_no);
    const auto role = parse_role(role_text);
    if (!role) throw ParseError(line_no, name + ".role", "unknown role '" + role_text + "'");
    doc.role = *role;
    doc.raw_text = require_string(obj, "raw_text", name + ".raw_text", line_no);
    doc.clean_text = optional_string(obj, "clean_text", name + ".clean_text", line_no);
    doc.source_url = optional_string(obj, "source_url", name + ".source_url", line_no);
    doc.date = optional_string(obj, "date", name + ".date", line_no);
    if (doc.date && !is_iso_date(*doc.date))
        throw ParseError(line_no, name + ".date", "date '" + *doc.date + "' is not YYYY-MM-DD");
    return doc;
}

ordered_json document_json(const Document& doc) {
    ordered_json obj;
    obj["role"] = to_string(doc.role);
    obj["raw_text"] = doc.raw_text;
    if (doc.clean_text) obj["clean_text"] = *doc.clean_text;
    if (doc.source_url) obj["source_url"] = *doc.source_url;
    if (doc.date) obj["date"] = *doc.date;
    return obj;
}

bool skippable(std::string_view line) {
    const auto t = text::trim(line);
    return t.empty() || t.front() == '#';
}

}  // namespace

CaseRecord parse_record_line(std::string_view line, std::size_t line_no) {
    ordered_json obj;
    try {
        obj = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(line_no, "", std::string("malformed record: ") + e.what());
    }
    if (!obj.is_object()) throw ParseError(line_no, "", "record must be an object");

    CaseRecord rec;
    rec.case_id = require_string(obj, "case_id", "case_id", line_no);
    if (rec.case_id.empty()) throw ParseError(line_no, "case_id", "case_id is empty");
    rec.category = Category::from_label(require_string(obj, "category", "category", line_no));
    rec.full_story = parse_document(obj, kFullStorySlot, rec.case_id, line_no);
    rec.false_article = parse_document(obj, kFalseSlot, rec.case_id, line_no);
    rec.real_article = parse_document(obj, kRealSlot, rec.case_id, line_no);
    return rec;
}

std::vector<CaseRecord> parse_corpus(std::istream& in) {
    std::vector<CaseRecord> records;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (skippable(line)) continue;
        CaseRecord rec = parse_record_line(line, line_no);
        if (!seen.insert(rec.case_id).second)
            throw ParseError(line_no, "case_id", "duplicate case_id '" + rec.case_id + "'");
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<CaseRecord> parse_corpus(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open corpus file " + path.string());
    return parse_corpus(in);
}

std::string serialize_record(const CaseRecord& record) {
    ordered_json obj;
    obj["case_id"] = record.case_id;
    obj["category"] = record.category.label;
    obj["full_story"] = document_json(record.full_story);
    obj["false_article"] = document_json(record.false_article);
    obj["real_article"] = document_json(record.real_article);
    return obj.dump();
}

void write_corpus(std::ostream& out, const std::vector<CaseRecord>& records, std::string_view header_comment) {
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    for (const auto& rec : records) out << serialize_record(rec) << '\n';
}

// -- cleaning ----------------------------------------------------------------

CleaningRule::CleaningRule(Action action, std::string pattern) : action_(action), pattern_(std::move(pattern)) {
    try {
        regex_ = std::regex(pattern_, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
        throw ConfigError("invalid cleaning pattern '" + pattern_ + "': " + e.what());
    }
}

std::vector<CleaningRule> default_rules() {
    using A = CleaningRule::Action;
    return {
        {A::delete_line, R"((수정|정정|바로잡습니다)\s*[:：])"},
        {A::delete_match, R"(\[[^\]]*\])"},
        {A::delete_match, R"(\((사진|그래픽|자료|출처|제공)[^)]*\))"},
        {A::delete_match, R"([A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,})"},
        {A::delete_match, R"(\S+ (기자|특파원)(?=\s|$|[.,=]))"},
        {A::delete_match, R"(\d{4}[-./] ?\d{1,2}[-./] ?\d{1,2}\.?)"},
        {A::delete_match, R"(\d{4}년 ?\d{1,2}월 ?\d{1,2}일)"},
    };
}

std::vector<CleaningRule> parse_rules(std::istream& in) {
    std::vector<CleaningRule> rules;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (skippable(line)) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ConfigError("rules line " + std::to_string(line_no) + ": expected action<TAB>pattern");
        const std::string action = line.substr(0, tab);
        const std::string pattern = line.substr(tab + 1);
        CleaningRule::Action a;
        if (action == "delete_match")
            a = CleaningRule::Action::delete_match;
        else if (action == "delete_line")
            a = CleaningRule::Action::delete_line;
        else
            throw ConfigError("rules line " + std::to_string(line_no) + ": unknown action '" + action + "'");
        if (pattern.empty()) throw ConfigError("rules line " + std::to_string(line_no) + ": empty pattern");
        try {
            rules.emplace_back(a, pattern);
        } catch (const ConfigError& e) {
            throw ConfigError("rules line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return rules;
}

std::vector<CleaningRule> load_rules(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open rules file " + path.string());
    return parse_rules(in);
}

namespace {

std::string apply_once(std::string s, const std::vector<CleaningRule>& rules) {
    for (const auto& rule : rules) {
        if (rule.action() == CleaningRule::Action::delete_match) {
            s = std::regex_replace(s, rule.regex(), "");
            continue;
        }
        std::string kept;
        bool first = true;
        for (const auto& line : text::split(s, '\n')) {
            if (std::regex_search(line, rule.regex())) continue;
            if (!first) kept.push_back('\n');
            kept += line;
            first = false;
        }
        s = std::move(kept);
    }
    return text::collapse_whitespace(s);
}

}  // namespace

std::string clean_text(std::string_view raw, const std::vector<CleaningRule>& rules) {
    // Each round either shrinks the text or leaves it unchanged.
    std::string current = apply_once(std::string(raw), rules);
    for (;;) {
        std::string next = apply_once(current, rules);
        if (next == current) return current;
        current = std::move(next);
    }
}

void prepare(CaseRecord& record, const std::vector<CleaningRule>& rules) {
    for (Document* doc : {&record.full_story, &record.false_article, &record.real_article})
        if (!doc->clean_text) doc->clean_text = clean_text(doc->raw_text, rules);
}

// -- validation --------------------------------------------------------------

std::vector<Finding> validate_case(const CaseRecord& record) {
    std::vector<Finding> findings;
    const std::pair<std::string_view, const Document*> slots[] = {
        {kFullStorySlot, &record.full_story},
        {kFalseSlot, &record.false_article},
        {kRealSlot, &record.real_article},
    };
    for (const auto& [slot, doc] : slots) {
        const auto add = [&](std::string msg) {
            findings.push_back({record.case_id, std::string(slot), std::move(msg)});
        };
        if (doc->role != expected_role(slot)) {
            add("role '" + std::string(to_string(doc->role)) + "' does not match slot");
            continue;
        }
        if (!doc->clean_text) {
            add("clean_text missing");
            continue;
        }
        if (text::trim(*doc->clean_text).empty()) {
            add("clean_text is empty");
            continue;
        }
        bool has_noun = false;
        try {
            has_noun = !lingua::extract_nouns(lingua::naive_tokenize(*doc->clean_text)).surfaces.empty();
        } catch (const Error&) {
            has_noun = false;
        }
        if (!has_noun) add("no nouns under the default noun tags");
    }
    return findings;
}

}  // namespace falsimeter::corpus
