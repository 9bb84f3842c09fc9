// Shared helpers for the unit tests: an independently coded edit-distance
// oracle, random text generators (deliberately built on std::mt19937_64, not
// the library's own generator), and process/temp-file utilities for driving
// the CLI binary.
#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "teco/corpus.hpp"

namespace testutil {

// Independent Levenshtein distance: plain two-row iterative DP, unit costs.
inline std::size_t oracle_distance(const std::u32string& a,
                                   const std::u32string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub_cost = a[i - 1] == b[j - 1] ? 0 : 1;
            cur[j] = std::min({prev[j - 1] + sub_cost, prev[j] + 1, cur[j - 1] + 1});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

inline std::u32string random_word(std::mt19937_64& gen, std::size_t min_len,
                                  std::size_t max_len,
                                  const std::u32string& alphabet) {
    std::uniform_int_distribution<std::size_t> len_dist(min_len, max_len);
    std::uniform_int_distribution<std::size_t> chr(0, alphabet.size() - 1);
    std::u32string w;
    const std::size_t len = len_dist(gen);
    for (std::size_t i = 0; i < len; ++i) w += alphabet[chr(gen)];
    return w;
}

inline std::u32string random_sentence(std::mt19937_64& gen,
                                      std::size_t min_words,
                                      std::size_t max_words,
                                      const std::u32string& alphabet) {
    std::uniform_int_distribution<std::size_t> wc(min_words, max_words);
    const std::size_t n = wc(gen);
    std::u32string s;
    for (std::size_t i = 0; i < n; ++i) {
        if (i) s += U' ';
        s += random_word(gen, 1, 8, alphabet);
    }
    return s;
}

// Scratch directory unique to this test-process invocation.
inline std::filesystem::path temp_dir(const std::string& tag) {
    static std::uint64_t counter = 0;
    const auto dir = std::filesystem::temp_directory_path() /
                     ("teco_test_" + tag + "_" + std::to_string(::getpid()) +
                      "_" + std::to_string(counter++));
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr combined
};

#ifndef TECO_CLI_PATH
#define TECO_CLI_PATH ""
#endif

inline CliResult run_cli(const std::string& args,
                         const std::filesystem::path& cwd) {
    const auto out_path = cwd / "cli_output.txt";
    const std::string cmd = "cd '" + cwd.string() + "' && '" + TECO_CLI_PATH +
                            "' " + args + " > cli_output.txt 2>&1";
    const int status = std::system(cmd.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.output = read_file(out_path);
    std::filesystem::remove(out_path);
    return result;
}

}  // namespace testutil
