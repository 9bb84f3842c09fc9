#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "teco/bpe.hpp"
#include "tests/helpers.hpp"

using namespace teco;

namespace {

std::vector<std::pair<std::u32string, std::u32string>> merge_pairs(
    const BpeModel& m) {
    return m.merges;
}

Sentence tokens_of(const BpeModel& m, const Sentence& text, double dropout = 0.0,
                   rng::Stream* stream = nullptr) {
    // Render an encoding as "tok|tok|..." over piece texts for easy asserts.
    Sentence out;
    for (const Element& e : encode(m, text, dropout, stream)) {
        if (!out.empty()) out += U'|';
        if (e.is_literal())
            out += e.literal;
        else if (e.id == kMarkerId)
            out += U'$';
        else
            out += m.vocab.at(e.id);
    }
    return out;
}

}  // namespace

TEST_CASE("length limit two admits only the first merge") {
    // Base {a, b} + marker = 3; V = 5 leaves room for two products, but the
    // second candidate pair ("ab","ab") has merged length 4 > 2.
    const BpeModel m = train_bpe({U"abab abab"}, 5, 2);
    REQUIRE(merge_pairs(m) ==
            std::vector<std::pair<std::u32string, std::u32string>>{{U"a", U"b"}});
    bool has_ab = false;
    for (const auto& piece : m.vocab) has_ab = has_ab || piece == U"ab";
    CHECK(has_ab);
}

TEST_CASE("length limit four admits the second merge") {
    const BpeModel m = train_bpe({U"abab abab"}, 5, 4);
    REQUIRE(merge_pairs(m) ==
            std::vector<std::pair<std::u32string, std::u32string>>{
                {U"a", U"b"}, {U"ab", U"ab"}});
    bool has_abab = false;
    for (const auto& piece : m.vocab) has_abab = has_abab || piece == U"abab";
    CHECK(has_abab);
}

TEST_CASE("length limit one means no merges at all") {
    const BpeModel m = train_bpe({U"abab abab"}, 100, 1);
    CHECK(m.merges.empty());
    CHECK(m.vocab.size() == 3);  // marker + a + b
}

TEST_CASE("vocab budget includes base inventory and the marker") {
    // V = 3 is exactly marker + {a, b}: legal, but zero merges fit.
    const BpeModel m = train_bpe({U"abab abab"}, 3, 16);
    CHECK(m.merges.empty());
    // V below the floor is an error.
    CHECK_THROWS_MATCHES(train_bpe({U"abab abab"}, 2, 16), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.kind() == ErrKind::VocabTooSmall;
                         }));
}

TEST_CASE("training stops when the budget fills") {
    // Base {a,b,c,d} + marker = 5; V = 6 leaves exactly one product slot.
    const BpeModel m = train_bpe({U"abab abab cdcd cdcd"}, 6, 16);
    CHECK(m.vocab.size() == 6);
    CHECK(m.merges.size() == 1);
}

TEST_CASE("equal-frequency ties pick the lexicographically smallest pair") {
    // (c,d) and (a,b) both occur twice; (a,b) sorts first.
    const BpeModel m = train_bpe({U"cd ab cd ab"}, 6, 2);
    REQUIRE(!m.merges.empty());
    CHECK(m.merges[0] == std::pair<std::u32string, std::u32string>{U"a", U"b"});
}

TEST_CASE("merges apply greedily by frequency") {
    // "aab": (a,a) x2 words, (a,b) x2 -> tie, (a,a) first; then (aa,b).
    const BpeModel m = train_bpe({U"aab aab"}, 6, 8);
    REQUIRE(m.merges.size() == 2);
    CHECK(m.merges[0] == std::pair<std::u32string, std::u32string>{U"a", U"a"});
    CHECK(m.merges[1] == std::pair<std::u32string, std::u32string>{U"aa", U"b"});
    CHECK(tokens_of(m, U"aab") == U"aab|$");
}

TEST_CASE("single-word model encodes the whole word as one token") {
    const BpeModel m = train_bpe({U"abab"}, 10, 4);
    CHECK(tokens_of(m, U"abab") == U"abab|$");
}

TEST_CASE("dropout one gives pure character segmentation") {
    const BpeModel m = train_bpe({U"abab abab"}, 10, 8);
    rng::Stream stream(1, 0);
    CHECK(tokens_of(m, U"abab", 1.0, &stream) == U"a|b|a|b|$");
}

TEST_CASE("unseen characters pass through as literals and round-trip") {
    const BpeModel m = train_bpe({U"abab abab"}, 10, 8);
    const Sentence text = U"azb";
    const TokenSeq seq = encode(m, text);
    bool saw_literal = false;
    for (const Element& e : seq) saw_literal = saw_literal || e.is_literal();
    CHECK(saw_literal);
    CHECK(decode(m, seq) == text);
    // A literal interrupts merges: 'z' splits "ab" halves apart.
    CHECK(tokens_of(m, U"azb") == U"a|z|b|$");
}

TEST_CASE("encode decode round trip on plain text") {
    const BpeModel m = train_bpe({U"hello world hello"}, 40, 8);
    CHECK(decode(m, encode(m, U"hello world")) == U"hello world");
    CHECK(decode(m, encode(m, U"")) == U"");
}

TEST_CASE("random sentences round-trip under all dropout levels") {
    std::mt19937_64 gen(42);
    std::vector<Sentence> corpus;
    for (int i = 0; i < 50; ++i)
        corpus.push_back(testutil::random_sentence(gen, 1, 8, U"abcde"));
    const BpeModel m = train_bpe(corpus, 60, 8);
    rng::Stream stream(7, 0);
    for (int i = 0; i < 1000; ++i) {
        // Use a wider alphabet than training so unseen chars appear.
        const Sentence text = testutil::random_sentence(gen, 1, 6, U"abcdefg");
        for (const double dropout : {0.0, 0.1, 1.0}) {
            const TokenSeq seq = encode(m, text, dropout, &stream);
            REQUIRE(decode(m, seq) == text);
        }
    }
}

TEST_CASE("token lengths and vocab size respect the limits") {
    std::mt19937_64 gen(4);
    std::vector<Sentence> corpus;
    for (int i = 0; i < 200; ++i)
        corpus.push_back(testutil::random_sentence(gen, 2, 9, U"abcdef"));
    for (const std::size_t v : {8, 20, 100}) {
        for (const std::size_t l : {1, 2, 4, 16}) {
            const BpeModel m = train_bpe(corpus, v, l);
            CHECK(m.vocab.size() <= v);
            for (std::size_t id = 1; id < m.vocab.size(); ++id)
                CHECK(m.vocab[id].size() <= l);
            CHECK(m.vocab[kMarkerId].empty());  // marker is length 0
        }
    }
}

TEST_CASE("dropout encoding is reproducible per seed") {
    const BpeModel m = train_bpe({U"abab abab abab"}, 12, 8);
    const Sentence text = U"abab abab abab abab";
    rng::Stream s1(99, 0), s2(99, 0), s3(100, 0);
    const Sentence a = tokens_of(m, text, 0.5, &s1);
    const Sentence b = tokens_of(m, text, 0.5, &s2);
    CHECK(a == b);
    bool any_diff = false;
    for (int i = 0; i < 50 && !any_diff; ++i)
        any_diff = tokens_of(m, text, 0.5, &s3) != a;
    CHECK(any_diff);
}

TEST_CASE("zero dropout never consumes random draws") {
    const BpeModel m = train_bpe({U"abab abab"}, 10, 8);
    rng::Stream s(5, 0), ref(5, 0);
    (void)encode(m, U"abab abab", 0.0, &s);
    CHECK(s.uniform() == ref.uniform());  // stream untouched
}

TEST_CASE("decode rejects out-of-range token ids") {
    const BpeModel m = train_bpe({U"ab"}, 5, 4);
    TokenSeq seq{Element::token(static_cast<std::uint32_t>(m.vocab.size()))};
    CHECK_THROWS_MATCHES(decode(m, seq), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.kind() == ErrKind::UnknownTokenId;
                         }));
}

TEST_CASE("stats match the char-level and whole-word examples") {
    const BpeModel chars = train_bpe({U"ab ab"}, 100, 1);
    const TokenStats s1 = tokenization_stats(chars, {U"ab ab"});
    CHECK(s1.fertility == 2.0);
    CHECK(s1.coverage == 0.0);

    const BpeModel whole = train_bpe({U"ab ab"}, 100, 2);
    const TokenStats s2 = tokenization_stats(whole, {U"ab ab"});
    CHECK(s2.fertility == 1.0);
    CHECK(s2.coverage == 1.0);
    CHECK(s2.mean_token_len == 2.0);
}

TEST_CASE("stats on a hand-built three-word corpus") {
    // Model merges only "ab"; corpus words: "ab" (1 token), "abc" (2), "c" (1).
    const BpeModel m = train_bpe({U"ab ab"}, 4, 2);
    const TokenStats st = tokenization_stats(m, {U"ab abc c"});
    CHECK(st.words == 3);
    CHECK(st.tokens == 4);
    CHECK(st.fertility == Catch::Approx(4.0 / 3.0));
    CHECK(st.coverage == Catch::Approx(2.0 / 3.0));
    // chars 6 over 4 tokens.
    CHECK(st.mean_token_len == 1.5);
}

TEST_CASE("serialization round-trips and replay reproduces the vocab") {
    std::mt19937_64 gen(31);
    std::vector<Sentence> corpus;
    for (int i = 0; i < 100; ++i)
        corpus.push_back(testutil::random_sentence(gen, 1, 7, U"abcd"));
    const BpeModel m = train_bpe(corpus, 40, 6);
    const std::string doc = serialize(m);
    const BpeModel back = deserialize_bpe(doc);
    CHECK(back.vocab == m.vocab);
    CHECK(back.merges == m.merges);
    CHECK(back.fingerprint == m.fingerprint);
    CHECK(serialize(back) == doc);
}

TEST_CASE("identical corpora give byte-identical models") {
    std::vector<Sentence> corpus = {U"the cat", U"the hat", U"a cat"};
    const std::string a = serialize(train_bpe(corpus, 20, 8));
    const std::string b = serialize(train_bpe(corpus, 20, 8));
    CHECK(a == b);
}

TEST_CASE("deserialize rejects corrupted models") {
    CHECK_THROWS_AS(deserialize_bpe("{"), Error);
    const BpeModel m = train_bpe({U"abab"}, 10, 4);
    Json doc = parse_json(serialize(m), "bpe");
    doc["version"] = 9;
    CHECK_THROWS_MATCHES(deserialize_bpe(doc.dump()), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.kind() == ErrKind::SchemaVersionMismatch;
                         }));
    Json doc2 = parse_json(serialize(m), "bpe");
    doc2["merges"].push_back(Json::array({"q", "z"}));  // unknown pieces
    CHECK_THROWS_AS(deserialize_bpe(doc2.dump()), Error);
}

TEST_CASE("encoding ids stay within the model and markers close words") {
    const BpeModel m = train_bpe({U"ab cd"}, 10, 4);
    const TokenSeq seq = encode(m, U"ab cd");
    std::size_t markers = 0;
    for (const Element& e : seq) {
        if (!e.is_literal()) {
            CHECK(e.id < m.vocab.size());
            if (e.id == kMarkerId) ++markers;
        }
    }
    CHECK(markers == 2);
    CHECK(seq.back().id == kMarkerId);
}
