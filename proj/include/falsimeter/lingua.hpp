#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace falsimeter::lingua {

/// Sejong-style POS tag. Codes outside the named set are kept verbatim as
/// `Other` with their raw string.
class PosTag {
public:
    enum class Code { NNG, NNP, NP, VV, VA, MAG, SL, SN, Other };

    PosTag() = default;
    PosTag(Code code);  // NOLINT(google-explicit-constructor)

    static PosTag parse(std::string_view code);

    Code code() const noexcept { return code_; }
    /// The tagger code as written in files ("NNG", "XSV", ...).
    std::string_view str() const noexcept;

    /// Punctuation / symbol classes (SF, SP, SS*, SC, SE, SO, SW, SY).
    bool is_punctuation() const noexcept;

    friend bool operator==(const PosTag& a, const PosTag& b) noexcept { return a.str() == b.str(); }
    friend auto operator<=>(const PosTag& a, const PosTag& b) noexcept { return a.str() <=> b.str(); }

private:
    Code code_ = Code::NNG;
    std::string raw_;
};

using TagSet = std::set<PosTag>;

/// {NNG, NNP}
TagSet default_noun_tags();
/// The tags tracked by the POS-difference tables.
TagSet default_pos_tags();
/// Parses "NNG,NNP". Throws ConfigError on an empty list or empty entry.
TagSet parse_tag_list(std::string_view csv);
std::string format_tag_list(const TagSet& tags);

struct TaggedToken {
    std::string surface;
    PosTag tag;
    std::size_t sentence_index = 0;

    friend bool operator==(const TaggedToken&, const TaggedToken&) = default;
};

struct TaggedDocument {
    std::string doc_id;
    std::vector<TaggedToken> tokens;
    std::size_t sentence_count = 0;

    friend bool operator==(const TaggedDocument&, const TaggedDocument&) = default;
};

// -- tagged TSV --------------------------------------------------------------

/// `surface<TAB>tag` per line, blank line between sentences. Throws
/// ParseError for lines without exactly two fields and for empty input.
TaggedDocument parse_tagged_text(std::string_view content, std::string doc_id = {});
TaggedDocument parse_tagged(const std::filesystem::path& path);

/// Inverse of parse_tagged_text: one blank line between sentences, no
/// trailing blank line.
std::string write_tagged(const TaggedDocument& doc);
void write_tagged(const TaggedDocument& doc, const std::filesystem::path& path);

// -- fallback tokenizer ------------------------------------------------------

/// Splits on whitespace and punctuation; '.', '!' and '?' end a sentence.
/// Tags: all digits -> SN, mostly Latin letters -> SL, anything else -> NNG.
/// Throws DomainError when the text yields no tokens.
TaggedDocument naive_tokenize(std::string_view text, std::string doc_id = {});

// -- noun sets ---------------------------------------------------------------

struct NounSet {
    std::set<std::string> surfaces;
    TagSet tag_filter;

    friend bool operator==(const NounSet&, const NounSet&) = default;
};

/// Distinct surfaces (Hangul-composed) of tokens whose tag is in the filter.
NounSet extract_nouns(const TaggedDocument& doc, const TagSet& tag_filter = default_noun_tags());

// -- lexical statistics ------------------------------------------------------

struct CorpusStats {
    std::size_t document_count = 0;
    std::size_t token_count = 0;
    /// Tokens excluding punctuation-class tags.
    std::size_t pos_count = 0;
    std::size_t sentence_count = 0;
    std::size_t type_count = 0;
    double ttr = 0.0;
};

/// Counts summed over documents; TTR over the concatenated token stream.
/// Throws DomainError when there are no tokens.
CorpusStats corpus_stats(std::span<const TaggedDocument> docs);
CorpusStats document_stats(const TaggedDocument& doc);

}  // namespace falsimeter::lingua
