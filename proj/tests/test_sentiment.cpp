#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "persim/error.hpp"
#include "persim/sentiment.hpp"

#include "persona_fixtures.hpp"
#include "test_util.hpp"

using namespace persim;

namespace {

// Tiny lexicon with one positive entry, one negative entry, one negator, and
// one intensifier; every expected score below is hand-computed from it.
SentimentLexicon tiny_lexicon() {
    return SentimentLexicon::from_csv_text("love,0.5,0.6\nawful,-0.8,0.9\nsuperb,0.9,0.8\n",
                                           "not\n", "very,1.3\nextremely,1.5\n");
}

} // namespace

TEST_CASE("tokenize lowercases, splits on non-letters, and keeps inner apostrophes") {
    CHECK(tokenize("Hello, World!") == std::vector<std::string>{"hello", "world"});
    CHECK(tokenize("don't stop") == std::vector<std::string>{"don't", "stop"});
    CHECK(tokenize("'quoted'") == std::vector<std::string>{"quoted"});
    CHECK(tokenize("rock-and-roll") == std::vector<std::string>{"rock", "and", "roll"});
    CHECK(tokenize("  ") == std::vector<std::string>{});
    CHECK(tokenize("x1y2") == std::vector<std::string>{"x", "y"}); // digits split words
    // Non-ASCII bytes count as letters, so UTF-8 words survive whole.
    CHECK(tokenize("café au lait") == std::vector<std::string>{"café", "au", "lait"});
}

TEST_CASE("sentiment is the mean of the matched tokens") {
    const SentimentLexicon lex = tiny_lexicon();
    const SentimentScore single = analyze_sentiment("I love this town", lex);
    CHECK(single.polarity == doctest::Approx(0.5));
    CHECK(single.subjectivity == doctest::Approx(0.6));

    // Two matches: (0.5 + -0.8) / 2 and (0.6 + 0.9) / 2.
    const SentimentScore both = analyze_sentiment("love the park, awful traffic", lex);
    CHECK(both.polarity == doctest::Approx(-0.15));
    CHECK(both.subjectivity == doctest::Approx(0.75));
}

TEST_CASE("unmatched text scores exactly (0, 0)") {
    const SentimentScore score = analyze_sentiment("the quick brown fox", tiny_lexicon());
    CHECK(score.polarity == 0.0);
    CHECK(score.subjectivity == 0.0);
}

TEST_CASE("a negator within two tokens flips polarity") {
    const SentimentLexicon lex = tiny_lexicon();
    CHECK(analyze_sentiment("not love", lex).polarity == doctest::Approx(-0.5));
    CHECK(analyze_sentiment("not really love", lex).polarity == doctest::Approx(-0.5));
    // Three tokens back is out of the negation window.
    CHECK(analyze_sentiment("not a big warm love", lex).polarity == doctest::Approx(0.5));
    // Negation works on negative words too.
    CHECK(analyze_sentiment("not awful", lex).polarity == doctest::Approx(0.8));
    // Subjectivity is unaffected by negation.
    CHECK(analyze_sentiment("not love", lex).subjectivity == doctest::Approx(0.6));
}

TEST_CASE("an intensifier immediately before a match scales it, then clamps") {
    const SentimentLexicon lex = tiny_lexicon();
    CHECK(analyze_sentiment("very love", lex).polarity == doctest::Approx(0.65));
    // 0.9 * 1.5 = 1.35 clamps to 1.0.
    CHECK(analyze_sentiment("extremely superb", lex).polarity == doctest::Approx(1.0));
    // Intensifier one token further back does not apply.
    CHECK(analyze_sentiment("very old love", lex).polarity == doctest::Approx(0.5));
    // Intensifier then negator: scaled to 0.65, flipped to -0.65.
    CHECK(analyze_sentiment("not very love", lex).polarity == doctest::Approx(-0.65));
}

TEST_CASE("an empty lexicon is a configuration error") {
    SentimentLexicon empty;
    CHECK_THROWS_AS((void)analyze_sentiment("anything", empty), ConfigError);
}

TEST_CASE("lexicon CSV parsing validates bounds and skips comments") {
    const SentimentLexicon lex = SentimentLexicon::from_csv_text(
        "# comment line\ngood,0.7,0.5\n\nbad,-0.7,0.5\n", "# negators\nnever\n", "so,1.2\n");
    CHECK(lex.entries.size() == 2);
    CHECK(lex.entries.at("good").polarity == doctest::Approx(0.7));
    CHECK(lex.negators.count("never") == 1);
    CHECK(lex.intensifiers.at("so") == doctest::Approx(1.2));

    CHECK_THROWS_AS((void)SentimentLexicon::from_csv_text("word,1.5,0.5\n", "", ""), DataError);
    CHECK_THROWS_AS((void)SentimentLexicon::from_csv_text("word,0.5,1.5\n", "", ""), DataError);
    CHECK_THROWS_AS((void)SentimentLexicon::from_csv_text("word,0.5\n", "", ""), DataError);
    CHECK_THROWS_AS((void)SentimentLexicon::from_csv_text("good,0.5,0.5\n", "", "so,-1\n"),
                    DataError);
}

TEST_CASE("the builtin lexicon is sane") {
    const SentimentLexicon &lex = SentimentLexicon::builtin();
    CHECK(lex.entries.size() >= 250);
    CHECK_FALSE(lex.negators.empty());
    CHECK_FALSE(lex.intensifiers.empty());
    for (const auto &[token, entry] : lex.entries) {
        CAPTURE(token);
        CHECK(entry.polarity >= -1.0);
        CHECK(entry.polarity <= 1.0);
        CHECK(entry.subjectivity >= 0.0);
        CHECK(entry.subjectivity <= 1.0);
        // Entries must be single lowercase tokens or the matcher cannot hit them.
        CHECK(tokenize(token) == std::vector<std::string>{token});
    }
    CHECK(analyze_sentiment("I love this wonderful town", lex).polarity > 0.3);
    CHECK(analyze_sentiment("a terrible, miserable failure", lex).polarity < -0.3);

    // The lexicon deliberately avoids the vocabulary of the demographic
    // catalogs so purely categorical personas score near zero.
    const SentimentScore tabular =
        analyze_sentiment(persona_text(Persona{testfix::make_objective()}), lex);
    CHECK(tabular.polarity == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(tabular.subjectivity == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("word frequencies count, order, and truncate deterministically") {
    const std::vector<std::string> texts = {"a a b", "b c a", "d"};
    const std::set<std::string> no_stopwords;
    const auto counts = word_frequencies(texts, no_stopwords, 10);
    REQUIRE(counts.size() == 4);
    CHECK(counts[0].token == "a");
    CHECK(counts[0].count == 3);
    CHECK(counts[1].token == "b");
    CHECK(counts[1].count == 2);
    CHECK(counts[2].token == "c"); // ties break lexicographically
    CHECK(counts[3].token == "d");

    const auto top2 = word_frequencies(texts, no_stopwords, 2);
    REQUIRE(top2.size() == 2);
    CHECK(top2[0].token == "a");
    CHECK(top2[1].token == "b");

    const auto filtered = word_frequencies(texts, std::set<std::string>{"a"}, 10);
    CHECK(filtered[0].token == "b");

    CHECK_THROWS_AS((void)word_frequencies(texts, no_stopwords, 0), ConfigError);
}

TEST_CASE("word frequencies conserve the non-stopword token count") {
    const std::vector<std::string> texts = {"alpha beta gamma alpha", "beta beta gamma"};
    const auto counts = word_frequencies(texts, std::set<std::string>{}, 100);
    std::size_t total = 0;
    for (const auto &entry : counts) {
        total += entry.count;
    }
    CHECK(total == 7);

    // Counting is order-free: permuting the texts changes nothing.
    const std::vector<std::string> permuted = {"beta beta gamma", "alpha beta gamma alpha"};
    const auto counts2 = word_frequencies(permuted, std::set<std::string>{}, 100);
    REQUIRE(counts2.size() == counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        CHECK(counts[i].token == counts2[i].token);
        CHECK(counts[i].count == counts2[i].count);
    }
}

TEST_CASE("builtin stopwords cover common function words only") {
    const auto &stopwords = builtin_stopwords();
    CHECK(stopwords.size() >= 100);
    CHECK(stopwords.count("the") == 1);
    CHECK(stopwords.count("and") == 1);
    CHECK(stopwords.count("wonderful") == 0);
}

TEST_CASE("persona_text flattens each tier to the text its sentiment is scored on") {
    CHECK(persona_text(Persona{testfix::make_meta()}) == "34 Male White Florida");
    const std::string tabular = persona_text(Persona{testfix::make_objective()});
    CHECK(tabular.find("Irish") != std::string::npos);
    CHECK(tabular.find("ANCESTRY") == std::string::npos); // values only, keys omitted
    const auto descriptive = testfix::make_descriptive();
    CHECK(persona_text(Persona{descriptive}) == descriptive.narrative);
}

TEST_CASE("sentiment_by_tier averages per persona within each tier") {
    const SentimentLexicon lex = tiny_lexicon();
    const MetaPersona meta = testfix::make_meta();
    std::vector<Persona> personas;
    personas.push_back(Persona{DescriptivePersona{"love the coast", meta}});      // 0.5
    personas.push_back(Persona{DescriptivePersona{"awful commute", meta}});       // -0.8
    personas.push_back(Persona{DescriptivePersona{"nothing to report", meta}});   // 0.0
    personas.push_back(Persona{meta});                                            // META bucket

    const auto tiers = sentiment_by_tier(personas, lex);
    REQUIRE(tiers.size() == 2); // META and DESCRIPTIVE only; empty tiers omitted
    CHECK(tiers[0].tier == PersonaTier::Meta);
    CHECK(tiers[0].count == 1);
    CHECK(tiers[0].mean_polarity == doctest::Approx(0.0));
    CHECK(tiers[1].tier == PersonaTier::Descriptive);
    CHECK(tiers[1].count == 3);
    CHECK(tiers[1].mean_polarity == doctest::Approx((0.5 - 0.8 + 0.0) / 3.0));
    CHECK(tiers[1].mean_subjectivity == doctest::Approx((0.6 + 0.9 + 0.0) / 3.0));

    CHECK_THROWS_AS((void)sentiment_by_tier(std::vector<Persona>{}, lex), DataError);
}

TEST_CASE("lexicon files load from disk") {
    testutil::TempDir tmp;
    testutil::write_text(tmp / "entries.csv", "calm,0.4,0.3\n");
    testutil::write_text(tmp / "negators.txt", "not\n");
    testutil::write_text(tmp / "intensifiers.csv", "deeply,1.4\n");
    const SentimentLexicon lex =
        SentimentLexicon::load(tmp / "entries.csv", tmp / "negators.txt", tmp / "intensifiers.csv");
    CHECK(lex.entries.at("calm").polarity == doctest::Approx(0.4));
    CHECK(analyze_sentiment("deeply calm", lex).polarity == doctest::Approx(0.56));
    CHECK_THROWS_AS((void)SentimentLexicon::load(tmp / "missing.csv", tmp / "negators.txt",
                                                 tmp / "intensifiers.csv"),
                    DataError);
}
