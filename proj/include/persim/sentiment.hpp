#pragma once

// Lexicon-based sentiment scoring and word-frequency extraction over persona
// text.  The scoring is intentionally simple and fully documented: average
// the matched tokens' lexicon values, let a negator within two tokens flip a
// match's polarity, let an intensifier immediately before scale it.  The
// built-in lexicon is small and ships with the library; external lexicon
// files in the same format are accepted.

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "persim/persona.hpp"

namespace persim {

struct LexiconEntry {
    double polarity = 0.0;     // [-1, 1]
    double subjectivity = 0.0; // [0, 1]
};

struct SentimentLexicon {
    std::map<std::string, LexiconEntry> entries;
    std::set<std::string> negators;
    std::map<std::string, double> intensifiers; // token -> polarity multiplier, > 0

    // The lexicon shipped with the library (~300 sentiment-bearing words).
    static const SentimentLexicon &builtin();

    // Parse `token,polarity,subjectivity` lines; '#' starts a comment.
    static SentimentLexicon from_csv_text(const std::string &entries_csv,
                                          const std::string &negator_lines,
                                          const std::string &intensifier_lines);
    static SentimentLexicon load(const std::filesystem::path &entries_path,
                                 const std::filesystem::path &negators_path,
                                 const std::filesystem::path &intensifiers_path);
};

// Lowercased word tokens: maximal runs of letters, apostrophes kept inside a
// token ("don't" stays one token).  Bytes outside ASCII are treated as
// letters, so UTF-8 words survive intact.
std::vector<std::string> tokenize(const std::string &text);

struct SentimentScore {
    double polarity = 0.0;
    double subjectivity = 0.0;
};

// Mean over matched tokens; (0, 0) when nothing matches.
SentimentScore analyze_sentiment(const std::string &text, const SentimentLexicon &lexicon);

struct WordCount {
    std::string token;
    std::size_t count = 0;
};

// Token counts over all texts, stopwords removed, ordered by descending
// count with lexicographic tie-breaks, truncated to top_n.
std::vector<WordCount> word_frequencies(std::span<const std::string> texts,
                                        const std::set<std::string> &stopwords,
                                        std::size_t top_n);

// The stopword list shipped with the library (common English function words).
const std::set<std::string> &builtin_stopwords();

// The text a persona is scored on: tabular tiers concatenate field values,
// the descriptive tier uses its narrative, meta personas their four fields.
std::string persona_text(const Persona &persona);

struct TierSentiment {
    PersonaTier tier = PersonaTier::Meta;
    double mean_polarity = 0.0;
    double mean_subjectivity = 0.0;
    std::size_t count = 0;
};

// Mean per-persona sentiment per tier, ordered by tier; tiers with no
// personas are omitted.  Throws DataError when `personas` is empty.
std::vector<TierSentiment> sentiment_by_tier(std::span<const Persona> personas,
                                             const SentimentLexicon &lexicon);

} // namespace persim
