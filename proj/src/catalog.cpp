#include "persim/catalog.hpp"

#include <algorithm>
#include <regex>
#include <sstream>

#include "persim/error.hpp"
#include "persim/prompt_texts.hpp"

namespace persim {

namespace {

std::string trim(const std::string &s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

// "British",  ->  British   (comma and surrounding noise stripped)
std::string unquote_entry(const std::string &line) {
    const auto open = line.find('"');
    const auto close = line.rfind('"');
    if (open == std::string::npos || close <= open) {
        throw DataError("catalog: expected quoted entry, got '" + line + "'");
    }
    return line.substr(open + 1, close - open - 1);
}

std::vector<std::string> split_inline_list(const std::string &inner) {
    std::vector<std::string> values;
    std::string item;
    std::istringstream in(inner);
    while (std::getline(in, item, ',')) {
        values.push_back(trim(item));
    }
    return values;
}

} // namespace

ValueCatalog ValueCatalog::parse_block(const std::string &block_text) {
    ValueCatalog catalog;
    std::istringstream in(block_text);
    std::string line;
    const std::regex field_start(R"(^([A-Z_]+):\s*\[(.*)$)");
    const std::regex income_range(R"(Range \$([\d,]+)-\$([\d,]+) annually)");

    auto parse_income = [&](const std::string &inner) {
        std::smatch m;
        if (!std::regex_search(inner, m, income_range)) {
            throw DataError("catalog: cannot parse INCOME range '" + inner + "'");
        }
        auto strip_commas = [](std::string s) {
            s.erase(std::remove(s.begin(), s.end(), ','), s.end());
            return std::stoll(s);
        };
        catalog.income_min_ = strip_commas(m[1].str());
        catalog.income_max_ = strip_commas(m[2].str());
    };

    while (std::getline(in, line)) {
        std::smatch m;
        const std::string stripped = trim(line);
        if (!std::regex_match(stripped, m, field_start)) {
            continue;
        }
        const std::string field = m[1].str();
        std::string rest = m[2].str();

        if (!rest.empty() && trim(rest).back() == ']') {
            // Single-line list, e.g. EDUCATION or the INCOME range.
            std::string inner = trim(rest);
            inner = inner.substr(0, inner.rfind(']'));
            if (field == "INCOME") {
                parse_income(inner);
            } else {
                catalog.list_order_.push_back(field);
                catalog.lists_.emplace_back(field, split_inline_list(inner));
            }
            continue;
        }

        if (field == "OCCUPATION_CATEGORY") {
            // Nested: "industry": [ "occupation", ... ],
            std::string nested_line;
            std::string current_industry;
            std::vector<std::string> current;
            while (std::getline(in, nested_line)) {
                const std::string t = trim(nested_line);
                if (t == "]" && current_industry.empty()) {
                    break;
                }
                if (t == "]," || t == "]") {
                    catalog.occupations_.emplace_back(current_industry, current);
                    current_industry.clear();
                    current.clear();
                    continue;
                }
                if (t.size() >= 2 && t.back() == '[') {
                    current_industry = unquote_entry(t);
                    continue;
                }
                if (!t.empty()) {
                    current.push_back(unquote_entry(t));
                }
            }
            continue;
        }

        // Plain multi-line quoted list (ANCESTRY, INDUSTRY_CATEGORY).
        std::vector<std::string> values;
        std::string list_line;
        while (std::getline(in, list_line)) {
            const std::string t = trim(list_line);
            if (t == "]") {
                break;
            }
            if (!t.empty()) {
                values.push_back(unquote_entry(t));
            }
        }
        catalog.list_order_.push_back(field);
        catalog.lists_.emplace_back(field, std::move(values));
    }

    if (catalog.lists_.empty() || catalog.occupations_.empty() || catalog.income_max_ == 0) {
        throw DataError("catalog: block did not contain the expected field lists");
    }
    return catalog;
}

const ValueCatalog &ValueCatalog::builtin() {
    // The subjective-tier template carries the full block (objective lists
    // plus IDEOLOGY and POLITICAL_VIEWS).
    static const ValueCatalog catalog = [] {
        const std::string text = kSubjectiveGenerationTemplate;
        const std::string begin_marker = "### VALUE RANGES AND CATEGORIES ###";
        const std::string end_marker = "### RESPONSE FORMAT ###";
        const auto begin = text.find(begin_marker);
        const auto end = text.find(end_marker);
        if (begin == std::string::npos || end == std::string::npos) {
            throw DataError("generation template is missing the value ranges block");
        }
        return parse_block(text.substr(begin, end - begin));
    }();
    return catalog;
}

bool ValueCatalog::has_list(const std::string &field) const {
    for (const auto &[name, values] : lists_) {
        if (name == field) {
            return true;
        }
    }
    return false;
}

const std::vector<std::string> &ValueCatalog::values(const std::string &field) const {
    for (const auto &[name, values] : lists_) {
        if (name == field) {
            return values;
        }
    }
    throw DataError("catalog has no list for field " + field);
}

const std::vector<std::string> *ValueCatalog::occupations_for(const std::string &industry) const {
    for (const auto &[name, values] : occupations_) {
        if (name == industry) {
            return &values;
        }
    }
    return nullptr;
}

bool ValueCatalog::occupation_exists(const std::string &occupation) const {
    for (const auto &[name, values] : occupations_) {
        for (const auto &value : values) {
            if (value == occupation) {
                return true;
            }
        }
    }
    return false;
}

const std::vector<std::string> &us_state_names() {
    static const std::vector<std::string> names = {
        "Alabama",       "Alaska",         "Arizona",    "Arkansas",      "California",
        "Colorado",      "Connecticut",    "Delaware",   "Florida",       "Georgia",
        "Hawaii",        "Idaho",          "Illinois",   "Indiana",       "Iowa",
        "Kansas",        "Kentucky",       "Louisiana",  "Maine",         "Maryland",
        "Massachusetts", "Michigan",       "Minnesota",  "Mississippi",   "Missouri",
        "Montana",       "Nebraska",       "Nevada",     "New Hampshire", "New Jersey",
        "New Mexico",    "New York",       "North Carolina", "North Dakota", "Ohio",
        "Oklahoma",      "Oregon",         "Pennsylvania",   "Rhode Island", "South Carolina",
        "South Dakota",  "Tennessee",      "Texas",      "Utah",          "Vermont",
        "Virginia",      "Washington",     "West Virginia",  "Wisconsin",  "Wyoming",
        "District of Columbia"};
    return names;
}

} // namespace persim
