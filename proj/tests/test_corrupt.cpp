#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "teco/align.hpp"
#include "teco/corrupt.hpp"
#include "teco/errormodel.hpp"
#include "tests/helpers.hpp"

using namespace teco;

namespace {

ErrorModel model_from_counts(const ErrorCounts& counts, double alpha = 0.0) {
    return estimate(counts, alpha);
}

// Every word's character edit distance to its clean counterpart.
std::vector<std::size_t> per_word_distances(const SyntheticPair& pair) {
    const auto clean = split_words(pair.clean);
    const auto noisy = split_words(pair.noisy);
    REQUIRE(clean.size() == noisy.size());
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < clean.size(); ++i)
        out.push_back(testutil::oracle_distance(clean[i], noisy[i]));
    return out;
}

}  // namespace

TEST_CASE("zero model leaves text untouched") {
    const ErrorModel zero;
    CorruptionConfig cfg;
    cfg.seed = 1;
    const auto pair = corrupt_sentence(U"hello wide world", zero, cfg, 0);
    CHECK(pair.clean == U"hello wide world");
    CHECK(pair.noisy == U"hello wide world");
}

TEST_CASE("certain deletion removes exactly the first character per word") {
    ErrorCounts counts;
    for (char32_t c : std::u32string(U"abcdef"))
        counts.char_freq[c] = 1, counts.del_counts[c] = 1;  // p_del = 1
    const ErrorModel m = model_from_counts(counts);
    CorruptionConfig cfg;
    cfg.seed = 9;
    const auto pair = corrupt_sentence(U"abc def fa", m, cfg, 0);
    CHECK(pair.noisy == U"bc ef a");
}

TEST_CASE("deletion never empties a word") {
    ErrorCounts counts;
    counts.char_freq[U'a'] = 1;
    counts.del_counts[U'a'] = 1;  // p_del('a') = 1
    const ErrorModel m = model_from_counts(counts);
    CorruptionConfig cfg;
    cfg.seed = 3;
    // Single-char words survive; the word count invariant outranks the edit.
    const auto pair = corrupt_sentence(U"a a a", m, cfg, 0);
    CHECK(pair.noisy == U"a a a");
    // Two-char words still lose the first char.
    const auto pair2 = corrupt_sentence(U"aa", m, cfg, 0);
    CHECK(pair2.noisy == U"a");
}

TEST_CASE("substitution empirical rate matches first-trigger analysis") {
    ErrorCounts counts;
    counts.char_freq[U'a'] = 2;
    counts.sub_counts[{U'a', U'b'}] = 1;  // p_sub(a->b) = 0.5
    const ErrorModel m = model_from_counts(counts);
    CorruptionConfig cfg;
    cfg.seed = 17;
    const CorruptionSampler sampler(m);

    std::uint64_t words = 0, edited = 0;
    const Sentence sentence = U"aa aa";
    for (std::size_t rep = 0; rep < 100000; ++rep) {
        const auto pair = sampler.corrupt(sentence, cfg, rep);
        const auto dists = per_word_distances(pair);
        for (const std::size_t d : dists) {
            ++words;
            if (d > 0) ++edited;
            CHECK(d <= 1);
        }
    }
    // P(word edited) = 1 - 0.5^2 = 0.75; 3 sigma ~ 0.0041 at n = 2e5.
    const double rate = static_cast<double>(edited) / static_cast<double>(words);
    CHECK(std::abs(rate - 0.75) < 0.0041 * std::sqrt(2.0));
}

TEST_CASE("insertions fire only when the edit scan leaves the word clean") {
    ErrorCounts counts;
    counts.char_freq[U'a'] = 1;
    counts.char_freq[U'b'] = 1;
    counts.char_freq[U'x'] = 1;
    counts.ins_counts[{U'x', U'a', U'b'}] = 1;  // p_ins = 1 between a and b
    const ErrorModel m = model_from_counts(counts);
    CorruptionConfig cfg;
    cfg.seed = 5;
    const auto pair = corrupt_sentence(U"ab ab", m, cfg, 0);
    CHECK(pair.noisy == U"axb axb");

    // With a certain deletion in the same model, deletion wins and the
    // insertion pass never runs.
    counts.del_counts[U'a'] = 1;
    const ErrorModel m2 = model_from_counts(counts);
    const auto pair2 = corrupt_sentence(U"ab ab", m2, cfg, 0);
    CHECK(pair2.noisy == U"b b");
}

TEST_CASE("insertion context at word edges uses the boundary sentinel") {
    ErrorCounts counts;
    counts.char_freq[U'a'] = 1;
    counts.char_freq[U'x'] = 1;
    counts.ins_counts[{U'x', kBoundary, U'a'}] = 1;  // insert before word-initial a
    const ErrorModel m = model_from_counts(counts);
    CorruptionConfig cfg;
    cfg.seed = 2;
    const auto pair = corrupt_sentence(U"a a", m, cfg, 0);
    CHECK(pair.noisy == U"xa xa");

    ErrorCounts tail;
    tail.char_freq[U'a'] = 1;
    tail.char_freq[U'x'] = 1;
    tail.ins_counts[{U'x', U'a', kBoundary}] = 1;  // insert after word-final a
    const auto pair2 = corrupt_sentence(U"a a", model_from_counts(tail), cfg, 0);
    CHECK(pair2.noisy == U"ax ax");
}

TEST_CASE("word count and edit cap hold on random models and corpora") {
    std::mt19937_64 gen(77);
    for (int trial = 0; trial < 20; ++trial) {
        // Build a random small model over {a,b,c,d}.
        ErrorCounts counts;
        std::uniform_int_distribution<int> ct(0, 3);
        for (char32_t c : std::u32string(U"abcd")) {
            counts.char_freq[c] = 100;
            counts.del_counts[c] = ct(gen);
            for (char32_t x : std::u32string(U"abcd"))
                if (c != x) counts.sub_counts[{c, x}] = ct(gen);
            counts.ins_counts[{c, c, kBoundary}] = ct(gen);
        }
        const ErrorModel m = model_from_counts(counts, 0.01);
        CorruptionConfig cfg;
        cfg.seed = trial;
        const CorruptionSampler sampler(m);
        for (int s = 0; s < 50; ++s) {
            const Sentence clean = testutil::random_sentence(gen, 1, 8, U"abcd");
            const auto pair = sampler.corrupt(clean, cfg, s);
            CHECK(pair.clean == clean);
            REQUIRE(word_count(pair.noisy) == word_count(clean));
            for (const std::size_t d : per_word_distances(pair)) CHECK(d <= 1);
        }
    }
}

TEST_CASE("spaces are never edited") {
    ErrorCounts counts;
    for (char32_t c : std::u32string(U"ab")) {
        counts.char_freq[c] = 1;
        counts.del_counts[c] = 1;
    }
    const ErrorModel m = model_from_counts(counts);
    CorruptionConfig cfg;
    cfg.seed = 4;
    const auto pair = corrupt_sentence(U"ab ab ab", m, cfg, 0);
    CHECK(std::count(pair.noisy.begin(), pair.noisy.end(), U' ') == 2);
}

TEST_CASE("random baseline rate zero is identity") {
    CorruptionConfig cfg;
    cfg.mode = CorruptMode::RandomBaseline;
    cfg.random_rate = 0.0;
    cfg.inventory = {U'a', U'b'};
    const auto pair = corrupt_random(U"ab ab", cfg, 0);
    CHECK(pair.noisy == U"ab ab");
}

TEST_CASE("random baseline rate one edits every word exactly once") {
    CorruptionConfig cfg;
    cfg.mode = CorruptMode::RandomBaseline;
    cfg.random_rate = 1.0;
    cfg.inventory = {U'a', U'b', U'c'};
    cfg.seed = 11;
    for (int s = 0; s < 500; ++s) {
        const auto pair = corrupt_random(U"ab ab ab", cfg, s);
        for (const std::size_t d : per_word_distances(pair)) CHECK(d == 1);
    }
}

TEST_CASE("random baseline edit kinds are uniform at rate one") {
    CorruptionConfig cfg;
    cfg.mode = CorruptMode::RandomBaseline;
    cfg.random_rate = 1.0;
    cfg.inventory = {U'a', U'b', U'c', U'd'};
    cfg.seed = 23;
    std::uint64_t dels = 0, subs = 0, ins = 0, n = 0;
    for (std::size_t s = 0; s < 25000; ++s) {
        const auto pair = corrupt_random(U"abcd abcd abcd abcd", cfg, s);
        const auto clean = split_words(pair.clean);
        const auto noisy = split_words(pair.noisy);
        for (std::size_t i = 0; i < clean.size(); ++i) {
            ++n;
            if (noisy[i].size() < clean[i].size())
                ++dels;
            else if (noisy[i].size() > clean[i].size())
                ++ins;
            else
                ++subs;
        }
    }
    const double third = 1.0 / 3.0;
    const double sigma3 = 3.0 * std::sqrt(third * (1 - third) / static_cast<double>(n));
    CHECK(std::abs(static_cast<double>(dels) / n - third) < sigma3);
    CHECK(std::abs(static_cast<double>(subs) / n - third) < sigma3);
    CHECK(std::abs(static_cast<double>(ins) / n - third) < sigma3);
}

TEST_CASE("random baseline substitution never keeps the original char") {
    CorruptionConfig cfg;
    cfg.mode = CorruptMode::RandomBaseline;
    cfg.random_rate = 1.0;
    cfg.inventory = {U'a', U'b'};
    cfg.seed = 31;
    for (int s = 0; s < 2000; ++s) {
        const auto pair = corrupt_random(U"aaaa", cfg, s);
        if (pair.noisy.size() == pair.clean.size())  // substitution happened
            CHECK(pair.noisy.find(U'b') != Sentence::npos);
    }
}

TEST_CASE("random baseline never deletes from single-char words") {
    CorruptionConfig cfg;
    cfg.mode = CorruptMode::RandomBaseline;
    cfg.random_rate = 1.0;
    cfg.inventory = {U'a', U'b'};
    cfg.seed = 77;
    for (int s = 0; s < 1000; ++s) {
        const auto pair = corrupt_random(U"a b a", cfg, s);
        REQUIRE(word_count(pair.noisy) == 3);
        for (const auto& w : split_words(pair.noisy)) CHECK(!w.empty());
    }
}

TEST_CASE("generate_dataset is deterministic and thread-count independent") {
    ErrorCounts counts;
    counts.char_freq[U'a'] = 4;
    counts.char_freq[U'b'] = 4;
    counts.sub_counts[{U'a', U'b'}] = 1;
    counts.del_counts[U'b'] = 1;
    const ErrorModel m = model_from_counts(counts);
    std::mt19937_64 gen(8);
    std::vector<Sentence> raw;
    for (int i = 0; i < 200; ++i)
        raw.push_back(testutil::random_sentence(gen, 1, 6, U"ab"));

    CorruptionConfig cfg;
    cfg.seed = 17;
    const auto once = generate_dataset(raw, m, cfg, 1);
    const auto twice = generate_dataset(raw, m, cfg, 1);
    const auto threaded = generate_dataset(raw, m, cfg, 4);
    REQUIRE(once.size() == raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        CHECK(once[i].noisy == twice[i].noisy);
        CHECK(once[i].noisy == threaded[i].noisy);
    }

    CorruptionConfig other;
    other.seed = 18;
    const auto different = generate_dataset(raw, m, other, 1);
    bool any_diff = false;
    for (std::size_t i = 0; i < raw.size(); ++i)
        if (once[i].noisy != different[i].noisy) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("generate_dataset on empty input returns empty") {
    const ErrorModel zero;
    CorruptionConfig cfg;
    CHECK(generate_dataset({}, zero, cfg, 1).empty());
}

TEST_CASE("corpus_inventory collects sorted distinct non-space chars") {
    const auto inv = corpus_inventory({U"ba c", U"ab"});
    REQUIRE(inv.size() == 3);
    CHECK(inv[0] == U'a');
    CHECK(inv[1] == U'b');
    CHECK(inv[2] == U'c');
}

TEST_CASE("sentence index changes the draw even at the same position") {
    ErrorCounts counts;
    counts.char_freq[U'a'] = 2;
    counts.sub_counts[{U'a', U'b'}] = 1;  // 0.5
    const ErrorModel m = model_from_counts(counts);
    const CorruptionSampler sampler(m);
    CorruptionConfig cfg;
    cfg.seed = 1;
    bool any_diff = false;
    for (std::size_t s = 0; s + 1 < 50; ++s)
        if (sampler.corrupt(U"aaaa", cfg, s).noisy !=
            sampler.corrupt(U"aaaa", cfg, s + 1).noisy)
            any_diff = true;
    CHECK(any_diff);
}
