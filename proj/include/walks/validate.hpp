#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace walks {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    std::string level;  // quick | full
    std::uint64_t seed = 0;
    std::vector<CriterionResult> criteria;
    bool all_pass = false;
};

/// Runs the acceptance suite.  quick shrinks sample counts to stay within a
/// few minutes; full runs the documented scales.  Deterministic for a fixed
/// seed (criterion 12 verifies this by running the quick suite twice).
ValidationReport run_validation(const std::string& level, std::uint64_t seed);

std::string report_to_text(const ValidationReport& r);
nlohmann::json report_to_json(const ValidationReport& r);

}  // namespace walks
