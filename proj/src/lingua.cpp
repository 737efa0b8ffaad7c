#include "falsimeter/lingua.hpp"

#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_set>

#include "falsimeter/error.hpp"
#include "falsimeter/text.hpp"

namespace falsimeter::lingua {

namespace {

constexpr std::string_view kCodeNames[] = {"NNG", "NNP", "NP", "VV", "VA", "MAG", "SL", "SN"};

}  // namespace

PosTag::PosTag(Code code) : code_(code) {}

PosTag PosTag::parse(std::string_view code) {
    for (std::size_t i = 0; i < std::size(kCodeNames); ++i)
        if (code == kCodeNames[i]) return PosTag(static_cast<Code>(i));
    PosTag t;
    t.code_ = Code::Other;
    t.raw_ = std::string(code);
    return t;
}

std::string_view PosTag::str() const noexcept {
    if (code_ == Code::Other) return raw_;
    return kCodeNames[static_cast<std::size_t>(code_)];
}

bool PosTag::is_punctuation() const noexcept {
    if (code_ != Code::Other) return false;
    static const std::unordered_set<std::string_view> kPunct = {"SF", "SP", "SS", "SSO", "SSC", "SC",
                                                                 "SE", "SO", "SW", "SY"};
    return kPunct.contains(raw_);
}

TagSet default_noun_tags() { return {PosTag::Code::NNG, PosTag::Code::NNP}; }

TagSet default_pos_tags() {
    using C = PosTag::Code;
    return {C::NNG, C::NNP, C::NP, C::VV, C::VA, C::MAG, C::SL, C::SN};
}

TagSet parse_tag_list(std::string_view csv) {
    TagSet tags;
    for (const auto& part : text::split(csv, ',')) {
        const auto t = text::trim(part);
        if (t.empty()) throw ConfigError("empty entry in tag list '" + std::string(csv) + "'");
        tags.insert(PosTag::parse(t));
    }
    return tags;
}

std::string format_tag_list(const TagSet& tags) {
    std::string out;
    for (const auto& t : tags) {
        if (!out.empty()) out.push_back(',');
        out += t.str();
    }
    return out;
}

// -- tagged TSV --------------------------------------------------------------

TaggedDocument parse_tagged_text(std::string_view content, std::string doc_id) {
    TaggedDocument doc;
    doc.doc_id = std::move(doc_id);
    std::size_t sentence = 0;
    bool sentence_open = false;
    std::size_t line_no = 0;
    for (auto line : text::split(content, '\n')) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty()) {
            if (sentence_open) ++sentence;
            sentence_open = false;
            continue;
        }
        const auto fields = text::split(line, '\t');
        if (fields.size() != 2)
            throw ParseError(line_no, "", "expected surface<TAB>tag, got " + std::to_string(fields.size()) +
                                              " field(s)");
        if (fields[0].empty()) throw ParseError(line_no, "surface", "empty surface");
        if (fields[1].empty()) throw ParseError(line_no, "tag", "empty tag");
        doc.tokens.push_back({fields[0], PosTag::parse(fields[1]), sentence});
        sentence_open = true;
    }
    if (doc.tokens.empty()) throw ParseError(line_no, "", "no tokens");
    doc.sentence_count = doc.tokens.back().sentence_index + 1;
    return doc;
}

TaggedDocument parse_tagged(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open tagged file " + path.string());
    const std::string content{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    try {
        return parse_tagged_text(content, path.stem().string());
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.field(), path.string() + ": " + e.what());
    }
}

std::string write_tagged(const TaggedDocument& doc) {
    std::string out;
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
        const auto& tok = doc.tokens[i];
        if (i > 0 && tok.sentence_index != doc.tokens[i - 1].sentence_index) out.push_back('\n');
        out += tok.surface;
        out.push_back('\t');
        out += tok.tag.str();
        out.push_back('\n');
    }
    return out;
}

void write_tagged(const TaggedDocument& doc, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << write_tagged(doc);
}

// -- fallback tokenizer ------------------------------------------------------

namespace {

bool is_space(char32_t c) {
    return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' || c == U'\v' || c == 0x00A0 ||
           c == 0x3000 || (c >= 0x2000 && c <= 0x200B) || c == 0xFEFF;
}

bool is_terminal(char32_t c) {
    return c == U'.' || c == U'!' || c == U'?' || c == 0x3002 || c == 0xFF01 || c == 0xFF0E || c == 0xFF1F;
}

bool is_punct(char32_t c) {
    if (c < 0x80) return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
                         (c >= 0x7B && c <= 0x7E);
    return (c >= 0x00A1 && c <= 0x00BF) || c == 0x00D7 || c == 0x00F7 || (c >= 0x2010 && c <= 0x206F) ||
           (c >= 0x3001 && c <= 0x303F) || (c >= 0xFF01 && c <= 0xFF0F) || (c >= 0xFF1A && c <= 0xFF20) ||
           (c >= 0xFF3B && c <= 0xFF40) || (c >= 0xFF5B && c <= 0xFF65) || (c >= 0x2190 && c <= 0x25FF);
}

bool is_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

bool is_latin(char32_t c) {
    return (c >= U'A' && c <= U'Z') || (c >= U'a' && c <= U'z') || (c >= 0x00C0 && c <= 0x024F && c != 0x00D7 &&
                                                                     c != 0x00F7);
}

PosTag classify_surface(std::u32string_view token) {
    std::size_t digits = 0;
    std::size_t latin = 0;
    for (char32_t c : token) {
        digits += is_digit(c) ? 1 : 0;
        latin += is_latin(c) ? 1 : 0;
    }
    if (digits == token.size()) return PosTag::Code::SN;
    if (2 * latin > token.size()) return PosTag::Code::SL;
    return PosTag::Code::NNG;
}

}  // namespace

TaggedDocument naive_tokenize(std::string_view input, std::string doc_id) {
    TaggedDocument doc;
    doc.doc_id = std::move(doc_id);
    const std::u32string cps = text::decode_utf8(input);
    std::u32string current;
    std::size_t sentence = 0;
    bool sentence_has_tokens = false;

    const auto flush = [&] {
        if (current.empty()) return;
        doc.tokens.push_back({text::encode_utf8(current), classify_surface(current), sentence});
        sentence_has_tokens = true;
        current.clear();
    };

    for (char32_t c : cps) {
        if (is_terminal(c)) {
            flush();
            if (sentence_has_tokens) ++sentence;
            sentence_has_tokens = false;
        } else if (is_space(c) || is_punct(c)) {
            flush();
        } else {
            current.push_back(c);
        }
    }
    flush();
    if (doc.tokens.empty()) throw DomainError("no tokens in text");
    doc.sentence_count = doc.tokens.back().sentence_index + 1;
    return doc;
}

// -- noun sets ---------------------------------------------------------------

NounSet extract_nouns(const TaggedDocument& doc, const TagSet& tag_filter) {
    NounSet set;
    set.tag_filter = tag_filter;
    for (const auto& tok : doc.tokens)
        if (tag_filter.contains(tok.tag)) set.surfaces.insert(text::compose_hangul(tok.surface));
    return set;
}

// -- lexical statistics ------------------------------------------------------

CorpusStats corpus_stats(std::span<const TaggedDocument> docs) {
    CorpusStats stats;
    std::unordered_set<std::string> types;
    for (const auto& doc : docs) {
        ++stats.document_count;
        stats.token_count += doc.tokens.size();
        stats.sentence_count += doc.sentence_count;
        for (const auto& tok : doc.tokens) {
            if (!tok.tag.is_punctuation()) ++stats.pos_count;
            types.insert(tok.surface);
        }
    }
    if (stats.token_count == 0) throw DomainError("corpus statistics need at least one token");
    stats.type_count = types.size();
    stats.ttr = static_cast<double>(stats.type_count) / static_cast<double>(stats.token_count);
    return stats;
}

CorpusStats document_stats(const TaggedDocument& doc) { return corpus_stats(std::span(&doc, 1)); }

}  // namespace falsimeter::lingua
