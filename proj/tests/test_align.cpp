#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "teco/align.hpp"
#include "tests/helpers.hpp"

using namespace teco;

TEST_CASE("identity alignment is empty") {
    const EditScript s = align_chars(U"cat", U"cat");
    CHECK(s.distance == 0);
    CHECK(s.ops.empty());
    CHECK(align_chars(U"", U"").distance == 0);
}

TEST_CASE("single substitution carries both characters") {
    const EditScript s = align_chars(U"cat", U"cut");
    REQUIRE(s.ops.size() == 1);
    CHECK(s.distance == 1);
    CHECK(s.ops[0].kind == EditKind::Substitute);
    CHECK(s.ops[0].c == U'a');
    CHECK(s.ops[0].x == U'u');
    CHECK(s.ops[0].position == 1);
}

TEST_CASE("deletion tie resolves to the leftmost reference position") {
    const EditScript s = align_chars(U"hello", U"helo");
    REQUIRE(s.ops.size() == 1);
    CHECK(s.distance == 1);
    CHECK(s.ops[0].kind == EditKind::Delete);
    CHECK(s.ops[0].c == U'l');
    CHECK(s.ops[0].position == 2);
}

TEST_CASE("substitution tie resolves to the second of two equal chars") {
    const EditScript s = align_chars(U"aa", U"ab");
    REQUIRE(s.ops.size() == 1);
    CHECK(s.ops[0].kind == EditKind::Substitute);
    CHECK(s.ops[0].c == U'a');
    CHECK(s.ops[0].x == U'b');
    CHECK(s.ops[0].position == 1);
}

TEST_CASE("insertion records surrounding reference context") {
    const EditScript s = align_chars(U"ab", U"axb");
    REQUIRE(s.ops.size() == 1);
    CHECK(s.ops[0].kind == EditKind::Insert);
    CHECK(s.ops[0].c == U'x');
    CHECK(s.ops[0].x == U'a');
    CHECK(s.ops[0].y == U'b');
    CHECK(s.ops[0].position == 1);
}

TEST_CASE("insertion at sentence edges uses the boundary sentinel") {
    const EditScript front = align_chars(U"ab", U"xab");
    REQUIRE(front.ops.size() == 1);
    CHECK(front.ops[0].x == kBoundary);
    CHECK(front.ops[0].y == U'a');
    CHECK(front.ops[0].position == 0);

    const EditScript back = align_chars(U"ab", U"abx");
    REQUIRE(back.ops.size() == 1);
    CHECK(back.ops[0].x == U'b');
    CHECK(back.ops[0].y == kBoundary);
    CHECK(back.ops[0].position == 2);

    const EditScript lone = align_chars(U"", U"x");
    REQUIRE(lone.ops.size() == 1);
    CHECK(lone.ops[0].x == kBoundary);
    CHECK(lone.ops[0].y == kBoundary);
}

TEST_CASE("exhaustive small strings match an independent oracle and replay") {
    const std::u32string alphabet = U"abc";
    std::vector<Sentence> strs{U""};
    std::vector<Sentence> layer{U""};
    for (int len = 1; len <= 4; ++len) {
        std::vector<Sentence> next;
        for (const Sentence& s : layer)
            for (char32_t c : alphabet) next.push_back(s + c);
        strs.insert(strs.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    for (const Sentence& ref : strs) {
        for (const Sentence& hyp : strs) {
            const EditScript s = align_chars(ref, hyp);
            REQUIRE(s.distance == testutil::oracle_distance(ref, hyp));
            REQUIRE(s.ops.size() == s.distance);
            REQUIRE(apply_script(ref, s) == hyp);
            for (const EditOp& op : s.ops)
                if (op.kind == EditKind::Substitute) REQUIRE(op.c != op.x);
        }
    }
}

TEST_CASE("random longer pairs match the oracle") {
    std::mt19937_64 gen(123);
    for (int trial = 0; trial < 2000; ++trial) {
        const Sentence ref = testutil::random_word(gen, 0, 12, U"abcd");
        const Sentence hyp = testutil::random_word(gen, 0, 12, U"abcd");
        const EditScript s = align_chars(ref, hyp);
        REQUIRE(s.distance == testutil::oracle_distance(ref, hyp));
        REQUIRE(apply_script(ref, s) == hyp);
    }
}

TEST_CASE("align_stats agrees with align_chars on characters") {
    std::mt19937_64 gen(321);
    for (int trial = 0; trial < 500; ++trial) {
        const Sentence ref = testutil::random_sentence(gen, 1, 4, U"ab");
        const Sentence hyp = testutil::random_sentence(gen, 1, 4, U"ab");
        const AlignStats st = align_stats(ref, hyp);
        const EditScript s = align_chars(ref, hyp);
        REQUIRE(st.distance == s.distance);
        std::size_t subs = 0, dels = 0, ins = 0;
        for (const EditOp& op : s.ops) {
            if (op.kind == EditKind::Substitute) ++subs;
            if (op.kind == EditKind::Delete) ++dels;
            if (op.kind == EditKind::Insert) ++ins;
        }
        REQUIRE(st.subs == subs);
        REQUIRE(st.dels == dels);
        REQUIRE(st.ins == ins);
    }
}

TEST_CASE("align_stats works at word level") {
    const auto ref = split_words(U"the cat sat");
    const auto hyp = split_words(U"the cut sat here");
    const AlignStats st = align_stats(ref, hyp);
    CHECK(st.distance == 2);
    CHECK(st.subs == 1);
    CHECK(st.ins == 1);
    CHECK(st.dels == 0);
}

TEST_CASE("accumulate records the hand-aligned example counts") {
    ErrorCounts counts;
    accumulate_pair(counts, align_chars(U"aa", U"ab"), U"aa");
    CHECK(counts.sub_counts.at({U'a', U'b'}) == 1);
    CHECK(counts.char_freq.at(U'a') == 2);
    CHECK(counts.del_counts.empty());
    CHECK(counts.ins_counts.empty());

    ErrorCounts counts2;
    accumulate_pair(counts2, align_chars(U"ab", U"axb"), U"ab");
    CHECK(counts2.ins_counts.at({U'x', U'a', U'b'}) == 1);

    CHECK(accumulate_counts({}).del_counts.empty());
    CHECK(accumulate_counts({}).char_freq.empty());
}

TEST_CASE("char_freq counts every reference character including spaces") {
    ErrorCounts counts;
    accumulate_pair(counts, align_chars(U"a b", U"a b"), U"a b");
    CHECK(counts.char_freq.at(U' ') == 1);
    CHECK(counts.char_freq.at(U'a') == 1);
    CHECK(counts.char_freq.at(U'b') == 1);
}

TEST_CASE("space-touching edits are dropped not counted") {
    // Deleting the space: "a b" -> "ab".
    ErrorCounts del_space;
    accumulate_pair(del_space, align_chars(U"a b", U"ab"), U"a b");
    CHECK(del_space.dropped_space_ops == 1);
    CHECK(del_space.del_counts.empty());

    // Inserting a space: "ab" -> "a b".
    ErrorCounts ins_space;
    accumulate_pair(ins_space, align_chars(U"ab", U"a b"), U"ab");
    CHECK(ins_space.dropped_space_ops == 1);
    CHECK(ins_space.ins_counts.empty());

    // Substituting into a space is likewise dropped.
    ErrorCounts sub_space;
    accumulate_pair(sub_space, align_chars(U"axb", U"a b"), U"axb");
    CHECK(sub_space.dropped_space_ops == 1);
    CHECK(sub_space.sub_counts.empty());
}

TEST_CASE("space as insertion context maps to the boundary sentinel") {
    // "a bc" -> "a xbc": 'x' inserted with left context space, right 'b'.
    ErrorCounts counts;
    accumulate_pair(counts, align_chars(U"a bc", U"a xbc"), U"a bc");
    REQUIRE(counts.ins_counts.size() == 1);
    CHECK(counts.ins_counts.begin()->first == std::array<char32_t, 3>{U'x', kBoundary, U'b'});
}

TEST_CASE("count conservation across random corpora") {
    std::mt19937_64 gen(99);
    std::uint64_t total_ops = 0, total_distance = 0;
    ErrorCounts counts;
    for (int i = 0; i < 300; ++i) {
        const Sentence ref = testutil::random_sentence(gen, 1, 5, U"abc");
        const Sentence hyp = testutil::random_sentence(gen, 1, 5, U"abc");
        const EditScript s = align_chars(ref, hyp);
        total_distance += s.distance;
        accumulate_pair(counts, s, ref);
    }
    for (const auto& [k, v] : counts.del_counts) total_ops += v;
    for (const auto& [k, v] : counts.sub_counts) total_ops += v;
    for (const auto& [k, v] : counts.ins_counts) total_ops += v;
    CHECK(total_ops + counts.dropped_space_ops == total_distance);

    // A character cannot be edited more often than it occurs.
    for (const auto& [c, freq] : counts.char_freq) {
        std::uint64_t edited = 0;
        auto it = counts.del_counts.find(c);
        if (it != counts.del_counts.end()) edited += it->second;
        for (const auto& [pair, v] : counts.sub_counts)
            if (pair.first == c) edited += v;
        CHECK(edited <= freq);
    }
}

TEST_CASE("merge is associative accumulation") {
    ErrorCounts a, b;
    accumulate_pair(a, align_chars(U"aa", U"ab"), U"aa");
    accumulate_pair(b, align_chars(U"aa", U"ab"), U"aa");
    a.merge(b);
    CHECK(a.sub_counts.at({U'a', U'b'}) == 2);
    CHECK(a.char_freq.at(U'a') == 4);
}

TEST_CASE("extract_counts runs align over a parallel corpus") {
    ParallelCorpus corpus;
    corpus.pairs.push_back({U"aa", U"ab"});
    corpus.pairs.push_back({U"ab", U"axb"});
    const ErrorCounts counts = extract_counts(corpus);
    CHECK(counts.sub_counts.at({U'a', U'b'}) == 1);
    CHECK(counts.ins_counts.at({U'x', U'a', U'b'}) == 1);
    CHECK(counts.char_freq.at(U'a') == 3);
    CHECK(counts.char_freq.at(U'b') == 1);
}
