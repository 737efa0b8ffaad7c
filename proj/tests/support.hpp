#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "falsimeter/lingua.hpp"
#include "falsimeter/random.hpp"

namespace testsupport {

namespace fs = std::filesystem;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = fs::temp_directory_path() /
                ("falsimeter-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

inline std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

/// Words drawn from a small alphabet so random sets overlap often.
inline std::string random_word(falsimeter::Rng& rng, std::size_t vocabulary) {
    return "w" + std::to_string(rng.below(vocabulary));
}

inline falsimeter::lingua::NounSet random_noun_set(falsimeter::Rng& rng, std::size_t size, std::size_t vocabulary) {
    falsimeter::lingua::NounSet s;
    s.tag_filter = falsimeter::lingua::default_noun_tags();
    while (s.surfaces.size() < size) s.surfaces.insert(random_word(rng, vocabulary));
    return s;
}

inline falsimeter::lingua::TaggedDocument make_doc(std::vector<std::pair<std::string, std::string>> tokens,
                                                   std::string id = "doc") {
    falsimeter::lingua::TaggedDocument d;
    d.doc_id = std::move(id);
    for (auto& [surface, tag] : tokens) d.tokens.push_back({surface, falsimeter::lingua::PosTag::parse(tag), 0});
    d.sentence_count = d.tokens.empty() ? 0 : 1;
    return d;
}

inline std::size_t count_substr(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + needle.size())) ++n;
    return n;
}

}  // namespace testsupport
