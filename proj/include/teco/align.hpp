#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "teco/corpus.hpp"

namespace teco {

// Sentinel used as insertion context at sentence edges and, after space
// mapping, at word edges. '#' is punctuation, so normalized text can never
// contain it and the value is unambiguous inside a model.
inline constexpr char32_t kBoundary = U'#';

enum class EditKind { Delete, Insert, Substitute };

struct EditOp {
    EditKind kind;
    char32_t c = 0;  // Delete/Substitute: reference char; Insert: inserted char
    char32_t x = 0;  // Substitute: replacement char; Insert: left context
    char32_t y = 0;  // Insert: right context
    std::size_t position = 0;  // index into the reference
};

struct EditScript {
    std::vector<EditOp> ops;
    std::size_t distance = 0;
};

struct AlignStats {
    std::size_t distance = 0;
    std::size_t subs = 0;
    std::size_t dels = 0;
    std::size_t ins = 0;
};

namespace detail {

// Unit-cost Levenshtein table, row-major (n+1) x (m+1).
template <typename Seq>
void fill_edit_dp(const Seq& ref, const Seq& hyp, std::vector<int32_t>& dp) {
    const std::size_t n = ref.size(), m = hyp.size(), w = m + 1;
    dp.resize((n + 1) * w);
    for (std::size_t j = 0; j <= m; ++j) dp[j] = static_cast<int32_t>(j);
    for (std::size_t i = 1; i <= n; ++i) {
        int32_t* row = dp.data() + i * w;
        const int32_t* prev = row - w;
        row[0] = static_cast<int32_t>(i);
        for (std::size_t j = 1; j <= m; ++j) {
            const int32_t sub = prev[j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
            const int32_t del = prev[j] + 1;
            const int32_t ins = row[j - 1] + 1;
            int32_t best = sub < del ? sub : del;
            if (ins < best) best = ins;
            row[j] = best;
        }
    }
}

}  // namespace detail

// Minimal character-level edit alignment.
//
// Ties between equal-cost scripts are broken by walking the table back from
// (n, m) and preferring Match > Substitute > Delete > Insert at every cell.
// Preferring Match on the way back pushes the actual edits toward the
// smallest reference positions, so of the equal-cost scripts the one whose
// first differing op sits leftmost in the reference wins ("hello"->"helo"
// deletes the first 'l').
inline EditScript align_chars(const Sentence& ref, const Sentence& hyp) {
    thread_local std::vector<int32_t> dp;
    detail::fill_edit_dp(ref, hyp, dp);

    const std::size_t n = ref.size(), m = hyp.size(), w = m + 1;
    EditScript script;
    script.distance = static_cast<std::size_t>(dp[n * w + m]);
    script.ops.reserve(script.distance);

    std::size_t i = n, j = m;
    while (i > 0 || j > 0) {
        const int32_t here = dp[i * w + j];
        if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] &&
            dp[(i - 1) * w + (j - 1)] == here) {
            --i, --j;
            continue;
        }
        if (i > 0 && j > 0 && dp[(i - 1) * w + (j - 1)] + 1 == here) {
            script.ops.push_back({EditKind::Substitute, ref[i - 1], hyp[j - 1],
                                  0, i - 1});
            --i, --j;
            continue;
        }
        if (i > 0 && dp[(i - 1) * w + j] + 1 == here) {
            script.ops.push_back({EditKind::Delete, ref[i - 1], 0, 0, i - 1});
            --i;
            continue;
        }
        const char32_t left = i > 0 ? ref[i - 1] : kBoundary;
        const char32_t right = i < n ? ref[i] : kBoundary;
        script.ops.push_back({EditKind::Insert, hyp[j - 1], left, right, i});
        --j;
    }
    std::reverse(script.ops.begin(), script.ops.end());
    return script;
}

// Replays a script over the reference. Used to validate alignments.
inline Sentence apply_script(const Sentence& ref, const EditScript& script) {
    Sentence out;
    out.reserve(ref.size());
    std::size_t cursor = 0;
    for (const EditOp& op : script.ops) {
        out.append(ref, cursor, op.position - cursor);
        cursor = op.position;
        switch (op.kind) {
            case EditKind::Delete:
                ++cursor;
                break;
            case EditKind::Substitute:
                out.push_back(op.x);
                ++cursor;
                break;
            case EditKind::Insert:
                out.push_back(op.c);
                break;
        }
    }
    out.append(ref, cursor, ref.size() - cursor);
    return out;
}

// Distance plus per-kind counts for arbitrary token sequences, same
// tie-breaking as align_chars. Drives WER (words) and CER (characters).
template <typename Seq>
AlignStats align_stats(const Seq& ref, const Seq& hyp) {
    thread_local std::vector<int32_t> dp;
    detail::fill_edit_dp(ref, hyp, dp);

    const std::size_t n = ref.size(), m = hyp.size(), w = m + 1;
    AlignStats stats;
    stats.distance = static_cast<std::size_t>(dp[n * w + m]);

    std::size_t i = n, j = m;
    while (i > 0 || j > 0) {
        const int32_t here = dp[i * w + j];
        if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] &&
            dp[(i - 1) * w + (j - 1)] == here) {
            --i, --j;
        } else if (i > 0 && j > 0 && dp[(i - 1) * w + (j - 1)] + 1 == here) {
            ++stats.subs;
            --i, --j;
        } else if (i > 0 && dp[(i - 1) * w + j] + 1 == here) {
            ++stats.dels;
            --i;
        } else {
            ++stats.ins;
            --j;
        }
    }
    return stats;
}

// Raw alignment tallies feeding the error model. Space-touching edits are
// excluded from the three op counters (the corruption protocol never edits
// spaces) and tracked in dropped_space_ops instead; spaces still count in
// char_freq, and a space as insertion *context* maps to the word-boundary
// sentinel.
struct ErrorCounts {
    std::map<char32_t, std::uint64_t> del_counts;
    std::map<std::pair<char32_t, char32_t>, std::uint64_t> sub_counts;
    std::map<std::array<char32_t, 3>, std::uint64_t> ins_counts;  // (c, x, y)
    std::map<char32_t, std::uint64_t> char_freq;
    std::uint64_t dropped_space_ops = 0;

    void merge(const ErrorCounts& other) {
        for (const auto& [k, v] : other.del_counts) del_counts[k] += v;
        for (const auto& [k, v] : other.sub_counts) sub_counts[k] += v;
        for (const auto& [k, v] : other.ins_counts) ins_counts[k] += v;
        for (const auto& [k, v] : other.char_freq) char_freq[k] += v;
        dropped_space_ops += other.dropped_space_ops;
    }
};

inline void accumulate_pair(ErrorCounts& counts, const EditScript& script,
                            const Sentence& ref) {
    for (char32_t c : ref) ++counts.char_freq[c];
    for (const EditOp& op : script.ops) {
        switch (op.kind) {
            case EditKind::Delete:
                if (op.c == U' ') {
                    ++counts.dropped_space_ops;
                } else {
                    ++counts.del_counts[op.c];
                }
                break;
            case EditKind::Substitute:
                if (op.c == U' ' || op.x == U' ') {
                    ++counts.dropped_space_ops;
                } else {
                    ++counts.sub_counts[{op.c, op.x}];
                }
                break;
            case EditKind::Insert: {
                if (op.c == U' ') {
                    ++counts.dropped_space_ops;
                    break;
                }
                const char32_t x = op.x == U' ' ? kBoundary : op.x;
                const char32_t y = op.y == U' ' ? kBoundary : op.y;
                ++counts.ins_counts[{op.c, x, y}];
                break;
            }
        }
    }
}

inline ErrorCounts accumulate_counts(
    const std::vector<std::pair<EditScript, Sentence>>& scripts) {
    ErrorCounts counts;
    for (const auto& [script, ref] : scripts) accumulate_pair(counts, script, ref);
    return counts;
}

// Align + accumulate over a parallel corpus.
inline ErrorCounts extract_counts(const ParallelCorpus& corpus) {
    ErrorCounts counts;
    for (const auto& [ref, hyp] : corpus.pairs)
        accumulate_pair(counts, align_chars(ref, hyp), ref);
    return counts;
}

}  // namespace teco
