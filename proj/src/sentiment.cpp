#include "persim/sentiment.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>
#include <unordered_map>

#include "persim/error.hpp"
#include "persim/jsonl.hpp"

namespace persim {

namespace {

bool is_word_char(unsigned char c) {
    // Non-ASCII bytes count as letters so UTF-8 sequences stay in one token.
    return std::isalpha(c) != 0 || c >= 0x80;
}

std::string lower(std::string text) {
    std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return text;
}

double parse_number(const std::string &text, const std::string &context) {
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        return value;
    } catch (const std::exception &) {
        throw DataError(context + ": '" + text + "' is not a number");
    }
}

// Split "a,b,c" and trim each piece.
std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(line);
    while (std::getline(in, part, ',')) {
        const auto begin = part.find_first_not_of(" \t\r");
        const auto end = part.find_last_not_of(" \t\r");
        parts.push_back(begin == std::string::npos ? "" : part.substr(begin, end - begin + 1));
    }
    return parts;
}

bool is_blank_or_comment(const std::string &line) {
    const auto begin = line.find_first_not_of(" \t\r");
    return begin == std::string::npos || line[begin] == '#';
}

} // namespace

SentimentLexicon SentimentLexicon::from_csv_text(const std::string &entries_csv,
                                                 const std::string &negator_lines,
                                                 const std::string &intensifier_lines) {
    SentimentLexicon lexicon;
    {
        std::istringstream in(entries_csv);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (is_blank_or_comment(line)) {
                continue;
            }
            const auto parts = split_csv_line(line);
            const std::string context = "lexicon line " + std::to_string(line_no);
            if (parts.size() != 3 || parts[0].empty()) {
                throw DataError(context + ": expected 'token,polarity,subjectivity'");
            }
            const double polarity = parse_number(parts[1], context);
            const double subjectivity = parse_number(parts[2], context);
            if (polarity < -1.0 || polarity > 1.0) {
                throw DataError(context + ": polarity " + parts[1] + " outside [-1, 1]");
            }
            if (subjectivity < 0.0 || subjectivity > 1.0) {
                throw DataError(context + ": subjectivity " + parts[2] + " outside [0, 1]");
            }
            lexicon.entries[lower(parts[0])] = LexiconEntry{polarity, subjectivity};
        }
    }
    {
        std::istringstream in(negator_lines);
        std::string line;
        while (std::getline(in, line)) {
            if (is_blank_or_comment(line)) {
                continue;
            }
            lexicon.negators.insert(lower(split_csv_line(line)[0]));
        }
    }
    {
        std::istringstream in(intensifier_lines);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (is_blank_or_comment(line)) {
                continue;
            }
            const auto parts = split_csv_line(line);
            const std::string context = "intensifier line " + std::to_string(line_no);
            if (parts.size() != 2 || parts[0].empty()) {
                throw DataError(context + ": expected 'token,multiplier'");
            }
            const double multiplier = parse_number(parts[1], context);
            if (multiplier <= 0.0) {
                throw DataError(context + ": multiplier must be positive");
            }
            lexicon.intensifiers[lower(parts[0])] = multiplier;
        }
    }
    return lexicon;
}

SentimentLexicon SentimentLexicon::load(const std::filesystem::path &entries_path,
                                        const std::filesystem::path &negators_path,
                                        const std::filesystem::path &intensifiers_path) {
    return from_csv_text(read_text_file(entries_path), read_text_file(negators_path),
                         read_text_file(intensifiers_path));
}

std::vector<std::string> tokenize(const std::string &text) {
    std::vector<std::string> tokens;
    std::string current;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const auto c = static_cast<unsigned char>(text[i]);
        if (is_word_char(c)) {
            current += static_cast<char>(std::tolower(c));
        } else if (c == '\'' && !current.empty() && i + 1 < text.size() &&
                   is_word_char(static_cast<unsigned char>(text[i + 1]))) {
            current += '\''; // apostrophe inside a word, as in "don't"
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        tokens.push_back(std::move(current));
    }
    return tokens;
}

SentimentScore analyze_sentiment(const std::string &text, const SentimentLexicon &lexicon) {
    if (lexicon.entries.empty()) {
        throw ConfigError("sentiment lexicon has no entries");
    }
    const auto tokens = tokenize(text);
    double polarity_total = 0.0;
    double subjectivity_total = 0.0;
    std::size_t matches = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto entry = lexicon.entries.find(tokens[i]);
        if (entry == lexicon.entries.end()) {
            continue;
        }
        double polarity = entry->second.polarity;
        if (i >= 1) {
            const auto intensifier = lexicon.intensifiers.find(tokens[i - 1]);
            if (intensifier != lexicon.intensifiers.end()) {
                polarity *= intensifier->second;
            }
        }
        for (std::size_t back = 1; back <= 2 && back <= i; ++back) {
            if (lexicon.negators.count(tokens[i - back]) != 0) {
                polarity = -polarity;
                break;
            }
        }
        polarity_total += std::clamp(polarity, -1.0, 1.0);
        subjectivity_total += entry->second.subjectivity;
        ++matches;
    }
    if (matches == 0) {
        return SentimentScore{0.0, 0.0};
    }
    return SentimentScore{polarity_total / static_cast<double>(matches),
                          subjectivity_total / static_cast<double>(matches)};
}

std::vector<WordCount> word_frequencies(std::span<const std::string> texts,
                                        const std::set<std::string> &stopwords,
                                        std::size_t top_n) {
    if (top_n == 0) {
        throw ConfigError("word_frequencies needs top_n >= 1");
    }
    std::unordered_map<std::string, std::size_t> counts;
    for (const auto &text : texts) {
        for (auto &token : tokenize(text)) {
            if (stopwords.count(token) == 0) {
                ++counts[token];
            }
        }
    }
    std::vector<WordCount> table;
    table.reserve(counts.size());
    for (auto &[token, count] : counts) {
        table.push_back(WordCount{token, count});
    }
    std::sort(table.begin(), table.end(), [](const WordCount &a, const WordCount &b) {
        if (a.count != b.count) {
            return a.count > b.count;
        }
        return a.token < b.token;
    });
    if (table.size() > top_n) {
        table.resize(top_n);
    }
    return table;
}

std::string persona_text(const Persona &persona) {
    if (const auto *meta = std::get_if<MetaPersona>(&persona)) {
        return std::to_string(meta->age) + " " + meta->sex + " " + meta->race + " " + meta->state;
    }
    if (const auto *tabular = std::get_if<TabularPersona>(&persona)) {
        std::string text;
        for (const auto &[key, value] : tabular->fields) {
            if (!text.empty()) {
                text += ' ';
            }
            text += value;
        }
        return text;
    }
    return std::get<DescriptivePersona>(persona).narrative;
}

std::vector<TierSentiment> sentiment_by_tier(std::span<const Persona> personas,
                                             const SentimentLexicon &lexicon) {
    if (personas.empty()) {
        throw DataError("sentiment_by_tier needs at least one persona");
    }
    struct Sums {
        double polarity = 0.0;
        double subjectivity = 0.0;
        std::size_t count = 0;
    };
    std::array<Sums, kTierCount> sums{};
    for (const auto &persona : personas) {
        const auto score = analyze_sentiment(persona_text(persona), lexicon);
        auto &bucket = sums[static_cast<std::size_t>(persona_tier(persona))];
        bucket.polarity += score.polarity;
        bucket.subjectivity += score.subjectivity;
        ++bucket.count;
    }
    std::vector<TierSentiment> result;
    for (std::size_t t = 0; t < kTierCount; ++t) {
        if (sums[t].count == 0) {
            continue;
        }
        result.push_back(TierSentiment{static_cast<PersonaTier>(t),
                                       sums[t].polarity / static_cast<double>(sums[t].count),
                                       sums[t].subjectivity / static_cast<double>(sums[t].count),
                                       sums[t].count});
    }
    return result;
}

} // namespace persim
