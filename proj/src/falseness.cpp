#include "falsimeter/falseness.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "falsimeter/csv.hpp"
#include "falsimeter/text.hpp"

namespace falsimeter::falseness {

std::string_view to_string(ClassLabel label) noexcept {
    return label == ClassLabel::false_news ? "false_news" : "real_news";
}

std::optional<ClassLabel> parse_class_label(std::string_view s) noexcept {
    if (s == "false_news") return ClassLabel::false_news;
    if (s == "real_news") return ClassLabel::real_news;
    return std::nullopt;
}

namespace {

std::size_t count_missing(const std::set<std::string>& from, const std::set<std::string>& in) {
    std::size_t missing = 0;
    for (const auto& s : from) missing += in.contains(s) ? 0 : 1;
    return missing;
}

}  // namespace

double concealment(const lingua::NounSet& full, const lingua::NounSet& article) {
    if (full.surfaces.empty()) throw DomainError("undefined concealment: empty full story");
    return static_cast<double>(count_missing(full.surfaces, article.surfaces)) /
           static_cast<double>(full.surfaces.size());
}

double overstatement(const lingua::NounSet& full, const lingua::NounSet& article) {
    if (article.surfaces.empty()) throw DomainError("undefined overstatement: empty article");
    return static_cast<double>(count_missing(article.surfaces, full.surfaces)) /
           static_cast<double>(article.surfaces.size());
}

namespace {

const corpus::Document& slot_document(const corpus::CaseRecord& record, std::string_view slot) {
    if (slot == corpus::kFullStorySlot) return record.full_story;
    if (slot == corpus::kFalseSlot) return record.false_article;
    return record.real_article;
}

lingua::TaggedDocument tokenize_slot(const corpus::CaseRecord& record, std::string_view slot) {
    const auto& doc = slot_document(record, slot);
    try {
        return lingua::naive_tokenize(doc.clean_text ? *doc.clean_text : doc.raw_text, doc.id);
    } catch (const DomainError& e) {
        throw ScoringError(record.case_id, std::string(slot), e.what());
    }
}

lingua::TaggedDocument load_slot(const corpus::CaseRecord& record, const std::filesystem::path& dir,
                                 std::string_view slot) {
    const auto path = dir / record.case_id / (std::string(slot) + ".tsv");
    try {
        auto doc = lingua::parse_tagged(path);
        doc.doc_id = slot_document(record, slot).id;
        return doc;
    } catch (const Error& e) {
        throw ScoringError(record.case_id, std::string(slot), e.what());
    }
}

std::string_view slot_for(ClassLabel label) {
    return label == ClassLabel::false_news ? corpus::kFalseSlot : corpus::kRealSlot;
}

}  // namespace

CaseDocuments tokenize_case(const corpus::CaseRecord& record) {
    return {tokenize_slot(record, corpus::kFullStorySlot), tokenize_slot(record, corpus::kFalseSlot),
            tokenize_slot(record, corpus::kRealSlot)};
}

CaseDocuments load_tagged_case(const corpus::CaseRecord& record, const std::filesystem::path& dir) {
    return {load_slot(record, dir, corpus::kFullStorySlot), load_slot(record, dir, corpus::kFalseSlot),
            load_slot(record, dir, corpus::kRealSlot)};
}

CasePoint score_article(const corpus::CaseRecord& record, const lingua::TaggedDocument& full,
                        const lingua::TaggedDocument& article, ClassLabel label, const NounConfig& config) {
    const auto full_nouns = lingua::extract_nouns(full, config.tags);
    const auto article_nouns = lingua::extract_nouns(article, config.tags);
    if (full_nouns.surfaces.empty())
        throw ScoringError(record.case_id, std::string(corpus::kFullStorySlot),
                           "undefined concealment: empty full story");
    if (article_nouns.surfaces.empty())
        throw ScoringError(record.case_id, std::string(slot_for(label)), "undefined overstatement: empty article");
    return {record.case_id, label, record.category,
            {concealment(full_nouns, article_nouns), overstatement(full_nouns, article_nouns)}};
}

std::pair<CasePoint, CasePoint> score_case(const corpus::CaseRecord& record, const CaseDocuments& docs,
                                           const NounConfig& config) {
    return {score_article(record, docs.full_story, docs.false_article, ClassLabel::false_news, config),
            score_article(record, docs.full_story, docs.real_article, ClassLabel::real_news, config)};
}

std::pair<CasePoint, CasePoint> score_case(const corpus::CaseRecord& record, const NounConfig& config) {
    return score_case(record, tokenize_case(record), config);
}

// -- POS differences ---------------------------------------------------------

PosDiff pos_diff(const lingua::TaggedDocument& full, const lingua::TaggedDocument& article,
                 const lingua::TagSet& tags) {
    PosDiff diff;
    for (const auto& tag : tags) {
        const lingua::TagSet one{tag};
        const auto f = lingua::extract_nouns(full, one).surfaces;
        const auto a = lingua::extract_nouns(article, one).surfaces;
        diff[tag] = {count_missing(f, a), count_missing(a, f)};
    }
    return diff;
}

std::map<std::pair<lingua::PosTag, ClassLabel>, PosDiffCounts> PosDiffTable::totals() const {
    std::map<std::pair<lingua::PosTag, ClassLabel>, PosDiffCounts> out;
    for (const auto& [key, counts] : rows) out[{key.tag, key.label}] += counts;
    return out;
}

PosDiffTable& PosDiffTable::operator+=(const PosDiffTable& o) {
    for (const auto& [key, counts] : o.rows) rows[key] += counts;
    return *this;
}

PosDiffTable aggregate_pos_diff(std::span<const TokenizedCase> cases, const lingua::TagSet& tags) {
    PosDiffTable table;
    for (const auto& c : cases) {
        for (const auto label : {ClassLabel::false_news, ClassLabel::real_news}) {
            const auto& article = label == ClassLabel::false_news ? c.docs.false_article : c.docs.real_article;
            for (const auto& [tag, counts] : pos_diff(c.docs.full_story, article, tags))
                table.rows[{tag, c.category.label, label}] += counts;
        }
    }
    return table;
}

void write_pos_diff_csv(std::ostream& out, const PosDiffTable& table, std::string_view header_comment) {
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    out << "tag,category,class,concealed,overstated\n";
    for (const auto& [key, counts] : table.rows)
        out << key.tag.str() << ',' << csv::escape(key.category) << ',' << to_string(key.label) << ','
            << counts.concealed << ',' << counts.overstated << '\n';
}

void write_pos_totals_csv(std::ostream& out, const PosDiffTable& table, std::string_view header_comment) {
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    out << "tag,false_concealed,real_concealed,false_overstated,real_overstated\n";
    const auto totals = table.totals();
    std::set<lingua::PosTag> tags;
    for (const auto& [key, _] : totals) tags.insert(key.first);
    for (const auto& tag : tags) {
        const auto get = [&](ClassLabel l) {
            const auto it = totals.find({tag, l});
            return it == totals.end() ? PosDiffCounts{} : it->second;
        };
        const auto f = get(ClassLabel::false_news);
        const auto r = get(ClassLabel::real_news);
        out << tag.str() << ',' << f.concealed << ',' << r.concealed << ',' << f.overstated << ',' << r.overstated
            << '\n';
    }
}

// -- scored-case CSV ---------------------------------------------------------

void write_scores_csv(std::ostream& out, std::span<const CasePoint> points, std::string_view header_comment) {
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    out << "case_id,class,category,concealment,overstatement\n";
    for (const auto& p : points)
        out << csv::escape(p.case_id) << ',' << to_string(p.label) << ',' << csv::escape(p.category.label) << ','
            << text::fixed(p.score.concealment, 6) << ',' << text::fixed(p.score.overstatement, 6) << '\n';
}

std::vector<CasePoint> read_scores_csv(std::istream& in) {
    std::vector<CasePoint> points;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty() || line.front() == '#') continue;
        std::vector<std::string> f;
        try {
            f = csv::parse_line(line);
        } catch (const ConfigError& e) {
            throw ParseError(line_no, "", e.what());
        }
        if (!header_seen) {
            if (f != std::vector<std::string>{"case_id", "class", "category", "concealment", "overstatement"})
                throw ParseError(line_no, "", "unexpected scores header");
            header_seen = true;
            continue;
        }
        if (f.size() != 5) throw ParseError(line_no, "", "expected 5 fields");
        CasePoint p;
        p.case_id = f[0];
        const auto label = parse_class_label(f[1]);
        if (!label) throw ParseError(line_no, "class", "unknown class '" + f[1] + "'");
        p.label = *label;
        p.category = corpus::Category::from_label(f[2]);
        const auto number = [&](const std::string& s, const char* field) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(s, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != s.size() || s.empty() || !(v >= 0.0 && v <= 1.0))
                throw ParseError(line_no, field, "expected a ratio in [0,1], got '" + s + "'");
            return v;
        };
        p.score = {number(f[3], "concealment"), number(f[4], "overstatement")};
        points.push_back(std::move(p));
    }
    return points;
}

std::vector<CasePoint> read_scores_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open scores file " + path.string());
    return read_scores_csv(in);
}

}  // namespace falsimeter::falseness
