#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace sigma2 {

// One cell of a report table.
using CsvValue = std::variant<std::int64_t, double, std::string>;

// Format a double with 17 significant digits, enough to round-trip the bit
// pattern through text.
std::string format_double(double v);
std::string format_value(const CsvValue& v);

// Table of per-run scalars.  Serialization is deterministic: insertion order
// everywhere, fixed float formatting, no timestamps.  The CSV layout is a
// header row, data rows, then one trailing "# summary: k=v ..." comment.
class ExperimentReport {
public:
    ExperimentReport() = default;
    explicit ExperimentReport(std::vector<std::string> columns)
        : columns_(std::move(columns)) {}

    void set_columns(std::vector<std::string> columns) { columns_ = std::move(columns); }
    void add_row(std::vector<CsvValue> row);
    void add_summary(const std::string& key, CsvValue value);

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<CsvValue>>& rows() const { return rows_; }
    const std::vector<std::pair<std::string, CsvValue>>& summary() const { return summary_; }

    // Linear lookup; reports are small.
    const CsvValue* find_summary(const std::string& key) const;

    void write_csv(std::ostream& os) const;
    std::string to_csv() const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<CsvValue>> rows_;
    std::vector<std::pair<std::string, CsvValue>> summary_;
};

} // namespace sigma2
