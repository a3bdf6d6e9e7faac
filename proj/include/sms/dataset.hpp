#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "sms/core.hpp"

namespace sms {

// Column layout inferred from a CIBH-format header. Fixed columns are
// case_id, group, a, x1..x4, lower, upper, y; the conviction/other feature
// split is declared by the contiguous z_* and v_* column-name groups.
struct DatasetSchema {
    std::vector<std::string> z_columns;  // full header names, in file order
    std::vector<std::string> v_columns;

    int m1() const { return static_cast<int>(z_columns.size()); }
    int m2() const { return static_cast<int>(v_columns.size()); }
};

struct RowError {
    std::size_t line = 0;  // 1-based file line
    std::string column;
    std::string message;
};

struct Dataset {
    DatasetSchema schema;
    std::vector<CaseRecord> records;       // valid rows, in file order
    std::vector<std::size_t> record_lines; // file line of each record
    std::vector<RowError> errors;          // malformed rows (skipped)
};

// Single-pass, order-preserving CSV ingestion. In strict mode the first
// malformed row aborts the load (DataError); otherwise bad rows are collected
// in `errors` and skipped.
Dataset load_dataset(const std::string& path, bool strict);

// The four features whose combinations the guideline restricts.
inline constexpr std::array<const char*, 4> kExclusiveFeatures = {
    "voluntary_surrender",
    "confession",
    "plea_guilt_accept_punishment",
    "voluntary_plea_in_court",
};

struct ExclusivityReport {
    bool checked = false;  // false when the four columns are not all present
    std::string notice;
    struct Flag {
        std::size_t line = 0;
        std::string case_id;
        std::array<int, 4> tuple{};
    };
    std::vector<Flag> flagged;
};

// Flags rows whose (surrender, confession, plea-accept, plea-in-court) tuple
// is neither one of the six allowed combinations nor all-zero.
ExclusivityReport validate_exclusivity(const Dataset& data);

}  // namespace sms
