#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "teco/errors.hpp"
#include "teco/unicode.hpp"

namespace teco {

// A Sentence is normalized text held as code points: lowercase, no
// punctuation/symbol/digit characters, single U+0020 between words, no
// leading/trailing space. Empty is valid.
using Sentence = std::u32string;

struct NormalizationConfig {
    bool lowercase = true;
    bool strip_punctuation = true;
    bool strip_digits = true;
    std::size_t min_words = 1;
    std::size_t max_words = SIZE_MAX;
};

struct ParallelCorpus {
    std::vector<std::pair<Sentence, Sentence>> pairs;  // (reference, hypothesis)
    std::size_t dropped = 0;  // pairs where either side normalized to empty
};

inline std::size_t word_count(const Sentence& s) {
    if (s.empty()) return 0;
    std::size_t n = 1;
    for (char32_t c : s)
        if (c == U' ') ++n;
    return n;
}

inline std::vector<Sentence> split_words(const Sentence& s) {
    std::vector<Sentence> words;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == U' ') {
            words.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    if (s.empty()) words.clear();
    return words;
}

inline Sentence join_words(const std::vector<Sentence>& words) {
    Sentence out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) out.push_back(U' ');
        out += words[i];
    }
    return out;
}

// NFC first, then per-character mapping, then whitespace collapse. Stripped
// characters are deleted in place (no space left behind); control and
// private-use characters are always removed.
inline Sentence normalize(std::string_view raw, const NormalizationConfig& cfg) {
    const std::u32string decoded = unicode::nfc(unicode::decode_utf8(raw));
    Sentence out;
    out.reserve(decoded.size());
    bool pending_space = false;
    for (char32_t cp : decoded) {
        if (unicode::is_space(cp)) {
            pending_space = true;
            continue;
        }
        if (cfg.strip_punctuation && unicode::is_punct_or_symbol(cp)) continue;
        if (cfg.strip_digits && unicode::is_digit(cp)) continue;
        if (unicode::is_other(cp) || cp == unicode::kReplacement) continue;
        if (pending_space && !out.empty()) out.push_back(U' ');
        pending_space = false;
        out.push_back(cfg.lowercase ? unicode::to_lower(cp) : cp);
    }
    return out;
}

inline std::vector<Sentence> filter_by_length(const std::vector<Sentence>& in,
                                              const NormalizationConfig& cfg) {
    std::vector<Sentence> out;
    out.reserve(in.size());
    for (const auto& s : in) {
        const std::size_t w = word_count(s);
        if (w >= cfg.min_words && w <= cfg.max_words) out.push_back(s);
    }
    return out;
}

inline std::vector<std::string> read_lines(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

inline std::vector<std::string> read_lines_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrKind::Io, "cannot open " + path);
    return read_lines(in);
}

inline ParallelCorpus load_parallel(const std::vector<std::string>& ref_lines,
                                    const std::vector<std::string>& hyp_lines,
                                    const NormalizationConfig& cfg) {
    if (ref_lines.size() != hyp_lines.size()) {
        throw Error(ErrKind::LineCountMismatch,
                    "ref has " + std::to_string(ref_lines.size()) +
                        " lines, hyp has " + std::to_string(hyp_lines.size()));
    }
    ParallelCorpus corpus;
    corpus.pairs.reserve(ref_lines.size());
    for (std::size_t i = 0; i < ref_lines.size(); ++i) {
        Sentence ref = normalize(ref_lines[i], cfg);
        Sentence hyp = normalize(hyp_lines[i], cfg);
        if (ref.empty() || hyp.empty()) {
            ++corpus.dropped;
            continue;
        }
        corpus.pairs.emplace_back(std::move(ref), std::move(hyp));
    }
    return corpus;
}

}  // namespace teco
