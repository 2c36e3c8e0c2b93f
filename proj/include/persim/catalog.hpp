#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace persim {

// Allowed values for the catalog-constrained persona attributes. The builtin
// instance is parsed out of the VALUE RANGES AND CATEGORIES block embedded in
// the generation prompt templates, so validation and prompts always agree.
class ValueCatalog {
  public:
    // Parses a "### VALUE RANGES AND CATEGORIES ###" block.
    static ValueCatalog parse_block(const std::string &block_text);
    static const ValueCatalog &builtin();

    bool has_list(const std::string &field) const;
    const std::vector<std::string> &values(const std::string &field) const;
    const std::vector<std::string> &list_field_names() const { return list_order_; }

    // Occupations are nested one level under their industry.
    const std::vector<std::pair<std::string, std::vector<std::string>>> &occupations() const {
        return occupations_;
    }
    const std::vector<std::string> *occupations_for(const std::string &industry) const;
    bool occupation_exists(const std::string &occupation) const;

    std::int64_t income_min() const { return income_min_; }
    std::int64_t income_max() const { return income_max_; }

  private:
    std::vector<std::string> list_order_;
    std::vector<std::pair<std::string, std::vector<std::string>>> lists_;
    std::vector<std::pair<std::string, std::vector<std::string>>> occupations_;
    std::int64_t income_min_ = 0;
    std::int64_t income_max_ = 0;
};

// The 50 US state names plus the federal district, for PLACE_OF_BIRTH checks.
const std::vector<std::string> &us_state_names();

} // namespace persim
