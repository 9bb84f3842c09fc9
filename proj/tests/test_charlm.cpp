#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "teco/charlm.hpp"
#include "tests/helpers.hpp"

using namespace teco;

namespace {

double alphabet_sum(const CharLm& lm, const std::u32string& ctx) {
    double s = 0.0;
    for (char32_t w : lm.alphabet) s += lm.prob(w, ctx);
    return s;
}

}  // namespace

TEST_CASE("order-two probabilities on a one-word corpus") {
    // Corpus {"ab"}: alphabet {a, b, eos}, every context seen once.
    // Level 0: total 3, T 3 -> P0(w) = (c + 3/3)/6. Level "a": total 1, T 1.
    const CharLm lm = train_ngram({U"ab"}, 2);
    REQUIRE(lm.alphabet.size() == 3);

    // P(b|a) = (1 + 1*(1/3)) / (1 + 1) = 2/3.
    CHECK(lm.prob(U'b', U"a") == Catch::Approx(2.0 / 3.0).epsilon(1e-12));
    // Unseen-in-context alphabet chars split the held-out mass evenly.
    CHECK(lm.prob(U'a', U"a") == Catch::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(lm.prob(kEos, U"a") == Catch::Approx(1.0 / 6.0).epsilon(1e-12));
    // Begin-of-sentence context behaves like any other.
    CHECK(lm.prob(U'a', std::u32string(1, kBos)) ==
          Catch::Approx(2.0 / 3.0).epsilon(1e-12));
    // Out-of-alphabet char: base 1/4, then (0 + 3/4)/6 = 1/8, then 1/16.
    CHECK(lm.prob(U'z', U"a") == Catch::Approx(1.0 / 16.0).epsilon(1e-12));
}

TEST_CASE("unigram model smooths raw frequencies") {
    // Corpus {"aab"}: events a,a,b,eos. Total 4, T 3, |A| = 3.
    const CharLm lm = train_ngram({U"aab"}, 1);
    CHECK(lm.prob(U'a', U"") == Catch::Approx(3.0 / 7.0).epsilon(1e-12));
    CHECK(lm.prob(U'b', U"") == Catch::Approx(2.0 / 7.0).epsilon(1e-12));
    CHECK(lm.prob(kEos, U"") == Catch::Approx(2.0 / 7.0).epsilon(1e-12));
    CHECK(alphabet_sum(lm, U"") == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("seen continuations beat unseen ones") {
    const CharLm lm = train_ngram({U"ab", U"ab", U"ab"}, 2);
    CHECK(lm.prob(U'b', U"a") > lm.prob(U'a', U"a"));
    CHECK(lm.prob(U'b', U"a") > lm.prob(kEos, U"a"));
}

TEST_CASE("context longer than the order is truncated") {
    const CharLm lm = train_ngram({U"ab"}, 2);
    CHECK(lm.prob(U'b', U"xxxa") == lm.prob(U'b', U"a"));
}

TEST_CASE("an entirely unseen context backs off to the shorter ones") {
    const CharLm lm = train_ngram({U"abc abc"}, 3);
    for (char32_t w : lm.alphabet)
        CHECK(lm.prob(w, U"zz") == lm.prob(w, U""));
}

TEST_CASE("probabilities over the alphabet sum to one for any context") {
    std::mt19937_64 gen(11);
    std::vector<Sentence> corpus;
    for (int i = 0; i < 40; ++i)
        corpus.push_back(testutil::random_sentence(gen, 1, 6, U"abcd"));
    const CharLm lm = train_ngram(corpus, 4);

    const std::u32string pool = U"abcdxyz";  // includes unseen chars
    std::uniform_int_distribution<std::size_t> len(0, 3);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int i = 0; i < 100; ++i) {
        std::u32string ctx;
        const std::size_t n = len(gen);
        for (std::size_t j = 0; j < n; ++j) ctx += pool[pick(gen)];
        CHECK(alphabet_sum(lm, ctx) == Catch::Approx(1.0).margin(1e-9));
    }
    // Including the begin-of-sentence padding context.
    CHECK(alphabet_sum(lm, std::u32string(3, kBos)) ==
          Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("sentence log probability is the sum of its steps") {
    const CharLm lm = train_ngram({U"ab"}, 2);
    // log P(a|bos) + log P(b|a) + log P(eos|b), each 2/3.
    CHECK(lm.log_prob(U"ab") ==
          Catch::Approx(3.0 * std::log(2.0 / 3.0)).epsilon(1e-12));
    // Empty sentence: just the end marker after padding, (0 + 1/3)/2.
    CHECK(lm.log_prob(U"") == Catch::Approx(std::log(1.0 / 6.0)).epsilon(1e-12));
}

TEST_CASE("sentences are isolated by padding") {
    // If sentence boundaries leaked, 'c' would follow 'b'.
    const CharLm lm = train_ngram({U"ab", U"cd"}, 2);
    CHECK(lm.prob(kEos, U"b") > lm.prob(U'c', U"b"));
}

TEST_CASE("in-domain text scores above scrambled text") {
    std::vector<Sentence> corpus;
    for (int i = 0; i < 50; ++i) corpus.push_back(U"the cat sat on the mat");
    corpus.push_back(U"a dog ran");
    const CharLm lm = train_ngram(corpus, 5);
    CHECK(lm.log_prob(U"the cat") > lm.log_prob(U"hte act"));
    CHECK(lm.log_prob(U"the cat sat") > lm.log_prob(U"tam eht tas"));
}

TEST_CASE("log probability is finite on adversarial input") {
    const CharLm lm = train_ngram({U"ab"}, 3);
    CHECK(std::isfinite(lm.log_prob(U"")));
    CHECK(std::isfinite(lm.log_prob(U"zzzzzz")));
    CHECK(std::isfinite(lm.log_prob(U"\U0001F600\U0001F600")));
    Sentence lng(2000, U'q');
    CHECK(std::isfinite(lm.log_prob(lng)));
    CHECK(lm.log_prob(lng) < lm.log_prob(U"ab"));
}

TEST_CASE("training rejects bad arguments") {
    CHECK_THROWS_MATCHES(train_ngram({U"ab"}, 0), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.kind() == ErrKind::Usage;
                         }));
    CHECK_THROWS_MATCHES(train_ngram({}, 2), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.kind() == ErrKind::EmptyCorpus;
                         }));
}

TEST_CASE("serialization round-trips the model exactly") {
    std::mt19937_64 gen(23);
    std::vector<Sentence> corpus;
    for (int i = 0; i < 30; ++i)
        corpus.push_back(testutil::random_sentence(gen, 1, 5, U"abc"));
    const CharLm lm = train_ngram(corpus, 3);
    const std::string doc = serialize(lm);
    const CharLm back = deserialize_lm(doc);
    CHECK(back == lm);
    CHECK(serialize(back) == doc);
    // Behavior match on a few queries.
    CHECK(back.log_prob(U"abc ab") == lm.log_prob(U"abc ab"));
}

TEST_CASE("deserialization rejects malformed documents") {
    CHECK_THROWS_AS(deserialize_lm("{"), Error);

    const CharLm lm = train_ngram({U"ab"}, 2);
    Json doc = parse_json(serialize(lm), "lm");
    doc["version"] = 9;
    CHECK_THROWS_MATCHES(deserialize_lm(doc.dump()), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.kind() == ErrKind::SchemaVersionMismatch;
                         }));

    Json doc2 = parse_json(serialize(lm), "lm");
    doc2["order"] = 0;
    CHECK_THROWS_MATCHES(deserialize_lm(doc2.dump()), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.kind() == ErrKind::MalformedDocument;
                         }));

    Json doc3 = parse_json(serialize(lm), "lm");
    doc3["levels"].erase(1);  // level count no longer matches the order
    CHECK_THROWS_AS(deserialize_lm(doc3.dump()), Error);
}
