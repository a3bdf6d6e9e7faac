#include "sms/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include "sms/errors.hpp"

namespace sms {

namespace {

std::vector<std::string> split_csv_line(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();  // CRLF input
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

bool parse_double(const std::string& s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

bool starts_with(const std::string& s, const char* prefix) {
    return s.rfind(prefix, 0) == 0;
}

struct ColumnMap {
    std::size_t case_id, group, a, lower, upper, y;
    std::array<std::size_t, 4> x;
    std::vector<std::size_t> z, v;
    std::size_t width;
};

ColumnMap resolve_header(const std::vector<std::string>& header, DatasetSchema& schema) {
    const auto find = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw DataError("dataset header: missing required column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    ColumnMap cols;
    cols.width = header.size();
    cols.case_id = find("case_id");
    cols.group = find("group");
    cols.a = find("a");
    for (int i = 0; i < 4; ++i) cols.x[static_cast<std::size_t>(i)] = find("x" + std::to_string(i + 1));
    cols.lower = find("lower");
    cols.upper = find("upper");
    cols.y = find("y");

    for (std::size_t i = 0; i < header.size(); ++i) {
        if (starts_with(header[i], "z_")) {
            cols.z.push_back(i);
            schema.z_columns.push_back(header[i]);
        } else if (starts_with(header[i], "v_")) {
            cols.v.push_back(i);
            schema.v_columns.push_back(header[i]);
        }
    }
    const auto contiguous = [](const std::vector<std::size_t>& idx) {
        for (std::size_t i = 1; i < idx.size(); ++i)
            if (idx[i] != idx[i - 1] + 1) return false;
        return true;
    };
    if (!contiguous(cols.z))
        throw DataError("dataset header: z_* columns must form one contiguous group");
    if (!contiguous(cols.v))
        throw DataError("dataset header: v_* columns must form one contiguous group");

    std::set<std::string> seen(header.begin(), header.end());
    if (seen.size() != header.size())
        throw DataError("dataset header: duplicate column names");
    return cols;
}

}  // namespace

Dataset load_dataset(const std::string& path, bool strict) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset file '" + path + "'");

    Dataset data;
    std::string line;
    if (!std::getline(in, line)) throw DataError("dataset '" + path + "' is empty");
    const ColumnMap cols = resolve_header(split_csv_line(line), data.schema);

    const auto fail = [&](std::size_t lineno, const std::string& column,
                          const std::string& message) {
        if (strict)
            throw DataError("line " + std::to_string(lineno) + ", column '" + column + "': " +
                            message);
        data.errors.push_back({lineno, column, message});
    };

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != cols.width) {
            fail(lineno, "", "expected " + std::to_string(cols.width) + " fields, got " +
                                 std::to_string(fields.size()));
            continue;
        }

        CaseRecord rec;
        rec.case_id = fields[cols.case_id];
        rec.group = injury_group_from_string(fields[cols.group]);
        bool ok = true;
        const auto numeric = [&](std::size_t col, const std::string& name, double& out) {
            if (!parse_double(fields[col], out)) {
                fail(lineno, name, "not a number: '" + fields[col] + "'");
                ok = false;
                return false;
            }
            return true;
        };

        numeric(cols.a, "a", rec.a);
        for (std::size_t i = 0; i < 4; ++i) {
            if (numeric(cols.x[i], "x" + std::to_string(i + 1), rec.x[i]) &&
                (rec.x[i] < 0.0 || rec.x[i] != std::floor(rec.x[i]))) {
                fail(lineno, "x" + std::to_string(i + 1),
                     "must be a non-negative integer, got " + fields[cols.x[i]]);
                ok = false;
            }
        }
        rec.z.resize(cols.z.size());
        for (std::size_t i = 0; i < cols.z.size(); ++i) {
            if (numeric(cols.z[i], data.schema.z_columns[i], rec.z[i]) && rec.z[i] != 0.0 &&
                rec.z[i] != 1.0) {
                fail(lineno, data.schema.z_columns[i], "must be 0 or 1, got " + fields[cols.z[i]]);
                ok = false;
            }
        }
        rec.v.resize(cols.v.size());
        for (std::size_t i = 0; i < cols.v.size(); ++i) {
            if (numeric(cols.v[i], data.schema.v_columns[i], rec.v[i]) && rec.v[i] != 0.0 &&
                rec.v[i] != 1.0) {
                fail(lineno, data.schema.v_columns[i], "must be 0 or 1, got " + fields[cols.v[i]]);
                ok = false;
            }
        }
        numeric(cols.lower, "lower", rec.lower);
        numeric(cols.upper, "upper", rec.upper);
        if (ok && !(rec.lower > 0.0 && rec.lower < rec.upper)) {
            fail(lineno, "lower", "bounds must satisfy 0 < lower < upper, got [" +
                                      fields[cols.lower] + ", " + fields[cols.upper] + "]");
            ok = false;
        }
        if (!fields[cols.y].empty()) {
            double y;
            if (numeric(cols.y, "y", y)) {
                if (ok && !(y >= rec.lower && y <= rec.upper)) {
                    fail(lineno, "y", "y=" + fields[cols.y] + " outside [" + fields[cols.lower] +
                                          ", " + fields[cols.upper] + "]");
                    ok = false;
                } else {
                    rec.y = y;
                }
            }
        }
        if (!ok) continue;

        if (const auto violation = rec.check()) {
            fail(lineno, "", *violation);
            continue;
        }
        data.records.push_back(std::move(rec));
        data.record_lines.push_back(lineno);
    }
    return data;
}

ExclusivityReport validate_exclusivity(const Dataset& data) {
    ExclusivityReport report;

    // locate the four features among the z_/v_ columns by suffix
    struct Slot {
        bool in_z = false;
        std::size_t index = 0;
        bool found = false;
    };
    std::array<Slot, 4> slots;
    for (std::size_t f = 0; f < kExclusiveFeatures.size(); ++f) {
        const std::string z_name = std::string("z_") + kExclusiveFeatures[f];
        const std::string v_name = std::string("v_") + kExclusiveFeatures[f];
        for (std::size_t i = 0; i < data.schema.z_columns.size(); ++i)
            if (data.schema.z_columns[i] == z_name) slots[f] = {true, i, true};
        for (std::size_t i = 0; i < data.schema.v_columns.size(); ++i)
            if (data.schema.v_columns[i] == v_name) slots[f] = {false, i, true};
    }
    for (std::size_t f = 0; f < slots.size(); ++f) {
        if (!slots[f].found) {
            report.checked = false;
            report.notice = std::string("exclusivity check skipped: column for '") +
                            kExclusiveFeatures[f] + "' not declared";
            return report;
        }
    }
    report.checked = true;

    // six combinations permitted by the guideline, plus none-of-the-four
    static const std::set<std::array<int, 4>> allowed = {
        {1, 0, 0, 0}, {1, 0, 1, 0}, {0, 1, 0, 0}, {0, 1, 1, 0},
        {0, 0, 1, 0}, {0, 0, 0, 1}, {0, 0, 0, 0},
    };
    for (std::size_t r = 0; r < data.records.size(); ++r) {
        const CaseRecord& rec = data.records[r];
        std::array<int, 4> tuple{};
        for (std::size_t f = 0; f < 4; ++f) {
            const double val = slots[f].in_z ? rec.z[slots[f].index] : rec.v[slots[f].index];
            tuple[f] = static_cast<int>(val);
        }
        if (!allowed.count(tuple))
            report.flagged.push_back({data.record_lines[r], rec.case_id, tuple});
    }
    return report;
}

}  // namespace sms
