#include <doctest.h>

#include <sstream>

#include "falsimeter/corpus.hpp"
#include "falsimeter/error.hpp"
#include "falsimeter/falseness.hpp"
#include "support.hpp"

using namespace falsimeter;
using namespace falsimeter::corpus;

namespace {

const char* kLine =
    R"({"case_id":"c1","category":"science","full_story":{"role":"full_story","raw_text":"살균 소독제 폐 질환 예방."},)"
    R"("false_article":{"role":"false_news","raw_text":"소독제 폐 질환 유발.","source_url":"http://a.example/1","date":"2020-03-01"},)"
    R"("real_article":{"role":"real_news","raw_text":"소독제 폐 질환 예방 사용."}})";

CaseRecord parse_one(const std::string& line) {
    std::istringstream in(line);
    auto records = parse_corpus(in);
    REQUIRE(records.size() == 1);
    return records.front();
}

std::string random_text(Rng& rng) {
    static const std::vector<std::string> pieces = {
        "본문", "내용", "[사진=연합뉴스]", "(사진 제공)", "홍길동 기자", "2020.03.01", "2021년 3월 5일",
        "a@b.kr", "  ", "\t", "정책", "COVID", "19", "[그래픽]", "(자료: 통계청)", "백신", ".", "!"};
    std::string s;
    for (std::uint64_t i = 0, n = rng.below(15); i < n; ++i) {
        s += pieces[rng.below(pieces.size())];
        s += rng.below(3) == 0 ? "\n" : " ";
        if (rng.below(10) == 0) s += "수정: 오류를 바로잡았습니다\n";
    }
    return s;
}

CaseRecord random_record(Rng& rng, int index) {
    CaseRecord r;
    r.case_id = "case-" + std::to_string(index);
    static const std::vector<std::string> cats = {"politics", "science", "civics", "economy, culture"};
    r.category = Category::from_label(cats[rng.below(cats.size())]);
    const auto doc = [&](Role role, std::string_view slot) {
        Document d;
        d.id = r.case_id + ":" + std::string(slot);
        d.role = role;
        d.raw_text = random_text(rng) + "\"quoted\" \\ 끝";
        if (rng.below(2)) d.clean_text = random_text(rng);
        if (rng.below(2)) d.source_url = "https://news.example/" + std::to_string(rng.below(1000));
        if (rng.below(2)) d.date = "2020-0" + std::to_string(1 + rng.below(9)) + "-1" + std::to_string(rng.below(10));
        return d;
    };
    r.full_story = doc(Role::full_story, kFullStorySlot);
    r.false_article = doc(Role::false_news, kFalseSlot);
    r.real_article = doc(Role::real_news, kRealSlot);
    return r;
}

}  // namespace

TEST_CASE("empty corpus parses to an empty list") {
    std::istringstream in("");
    CHECK(parse_corpus(in).empty());
}

TEST_CASE("one full line parses into one record") {
    const auto r = parse_one(kLine);
    CHECK(r.case_id == "c1");
    CHECK(r.category.kind == Category::Kind::science);
    CHECK(r.false_article.role == Role::false_news);
    CHECK(r.false_article.source_url == "http://a.example/1");
    CHECK(r.false_article.date == "2020-03-01");
    CHECK_FALSE(r.full_story.clean_text.has_value());
    CHECK(r.false_article.id == "c1:false_article");
}

TEST_CASE("record count equals non-blank line count") {
    std::string two = std::string(kLine) + "\n\n" + std::string(kLine).replace(12, 2, "c2") + "\n";
    std::istringstream in(two);
    CHECK(parse_corpus(in).size() == 2);
}

TEST_CASE("missing full_story names the line and field") {
    const std::string line = R"({"case_id":"c1","category":"politics","false_article":{"role":"false_news","raw_text":"x"},"real_article":{"role":"real_news","raw_text":"y"}})";
    std::istringstream in(line);
    try {
        parse_corpus(in);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.field() == "full_story");
    }
}

TEST_CASE("malformed lines report their own line number") {
    std::istringstream in(std::string(kLine) + "\n{not json\n");
    try {
        parse_corpus(in);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("bad role and bad date are field errors") {
    std::string bad_role = kLine;
    bad_role.replace(bad_role.find("false_news"), 10, "fake");
    std::istringstream a(bad_role);
    CHECK_THROWS_WITH_AS(parse_corpus(a), doctest::Contains("false_article.role"), ParseError);

    std::string bad_date = kLine;
    bad_date.replace(bad_date.find("2020-03-01"), 10, "03/01/2020");
    std::istringstream b(bad_date);
    CHECK_THROWS_WITH_AS(parse_corpus(b), doctest::Contains("false_article.date"), ParseError);
}

TEST_CASE("duplicate case ids are rejected") {
    std::istringstream in(std::string(kLine) + "\n" + kLine + "\n");
    CHECK_THROWS_WITH_AS(parse_corpus(in), doctest::Contains("duplicate"), ParseError);
}

TEST_CASE("other categories keep their label verbatim") {
    std::string line = kLine;
    line.replace(line.find("science"), 7, "International Affairs");
    const auto r = parse_one(line);
    CHECK(r.category.kind == Category::Kind::other);
    CHECK(r.category.label == "International Affairs");
}

TEST_CASE("parse serialize parse is the identity") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<CaseRecord> records;
        for (int i = 0, n = static_cast<int>(rng.below(4)); i < n; ++i) records.push_back(random_record(rng, i));
        std::ostringstream out;
        write_corpus(out, records, "header line");
        std::istringstream in(out.str());
        const auto back = parse_corpus(in);
        REQUIRE(back == records);
        std::ostringstream again;
        write_corpus(again, back, "header line");
        CHECK(again.str() == out.str());
    }
}

TEST_CASE("bracket caption is removed") {
    const std::vector<CleaningRule> rules = {{CleaningRule::Action::delete_match, R"(\[[^\]]*\])"}};
    CHECK(clean_text("본문 [사진=연합뉴스] 내용", rules) == "본문 내용");
}

TEST_CASE("text without matches only has whitespace normalized") {
    CHECK(clean_text("  평범한   문장\n입니다 ", default_rules()) == "평범한 문장 입니다");
}

TEST_CASE("default rules strip captions, bylines, dates and correction notes") {
    const std::string raw =
        "[사진=연합뉴스] 정부는 백신 (사진 제공) 정책을 2021년 3월 5일 발표했다.\n"
        "수정: 제목의 오류를 바로잡았습니다\n"
        "홍길동 기자 gildong@news.kr 2021.03.05";
    const auto cleaned = clean_text(raw, default_rules());
    CHECK(cleaned == "정부는 백신 정책을 발표했다.");
}

TEST_CASE("delete_line removes the whole line") {
    const std::vector<CleaningRule> rules = {{CleaningRule::Action::delete_line, "^#"}};
    CHECK(clean_text("keep\n# drop me\nalso keep", rules) == "keep also keep");
}

TEST_CASE("cleaning is idempotent and never lengthens text") {
    Rng rng(31);
    const auto rules = default_rules();
    for (int trial = 0; trial < 200; ++trial) {
        const auto raw = random_text(rng);
        const auto once = clean_text(raw, rules);
        CHECK(clean_text(once, rules) == once);
        CHECK(once.size() <= raw.size());
    }
}

TEST_CASE("invalid patterns fail at load time") {
    CHECK_THROWS_AS(CleaningRule(CleaningRule::Action::delete_match, "[unclosed"), ConfigError);
    std::istringstream bad("delete_match\t(oops\n");
    CHECK_THROWS_AS(parse_rules(bad), ConfigError);
    std::istringstream unknown("erase\tabc\n");
    CHECK_THROWS_AS(parse_rules(unknown), ConfigError);
    std::istringstream ok("# comment\n\ndelete_line\t^x\ndelete_match\ty+\n");
    const auto rules = parse_rules(ok);
    REQUIRE(rules.size() == 2);
    CHECK(rules[0].action() == CleaningRule::Action::delete_line);
    CHECK(rules[1].pattern() == "y+");
}

TEST_CASE("rule order matters") {
    const std::vector<CleaningRule> ab = {{CleaningRule::Action::delete_match, "ab"},
                                          {CleaningRule::Action::delete_match, "c"}};
    CHECK(clean_text("aabcb", ab) == "");
}

TEST_CASE("prepare keeps existing clean text") {
    auto r = parse_one(kLine);
    r.false_article.clean_text = "사람이 고른 텍스트";
    prepare(r, default_rules());
    CHECK(r.false_article.clean_text == "사람이 고른 텍스트");
    CHECK(r.full_story.clean_text == "살균 소독제 폐 질환 예방.");
}

TEST_CASE("validate_case findings") {
    auto r = parse_one(kLine);
    prepare(r, default_rules());
    CHECK(validate_case(r).empty());

    auto empty = r;
    empty.false_article.clean_text = "";
    auto f = validate_case(empty);
    REQUIRE(f.size() == 1);
    CHECK(f[0].slot == "false_article");

    auto swapped = r;
    swapped.false_article.role = Role::real_news;
    f = validate_case(swapped);
    REQUIRE(f.size() == 1);
    CHECK(f[0].slot == "false_article");
    CHECK(f[0].message.find("role") != std::string::npos);

    auto unclean = parse_one(kLine);
    CHECK(validate_case(unclean).size() == 3);
}

TEST_CASE("every valid case can be scored") {
    Rng rng(77);
    int validated = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto r = random_record(rng, trial);
        prepare(r, default_rules());
        if (!validate_case(r).empty()) continue;
        ++validated;
        CHECK_NOTHROW(falseness::score_case(r));
    }
    CHECK(validated > 20);
}
