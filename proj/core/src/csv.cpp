#include "sigma2/csv.hpp"

#include "sigma2/errors.hpp"

#include <cstdio>
#include <sstream>

namespace sigma2 {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_value(const CsvValue& v) {
    if (std::holds_alternative<std::int64_t>(v))
        return std::to_string(std::get<std::int64_t>(v));
    if (std::holds_alternative<double>(v))
        return format_double(std::get<double>(v));
    return std::get<std::string>(v);
}

void ExperimentReport::add_row(std::vector<CsvValue> row) {
    if (!columns_.empty() && row.size() != columns_.size())
        throw ParameterError("report row width does not match header");
    rows_.push_back(std::move(row));
}

void ExperimentReport::add_summary(const std::string& key, CsvValue value) {
    summary_.emplace_back(key, std::move(value));
}

const CsvValue* ExperimentReport::find_summary(const std::string& key) const {
    for (const auto& [k, v] : summary_)
        if (k == key) return &v;
    return nullptr;
}

void ExperimentReport::write_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) os << ',';
        os << columns_[i];
    }
    os << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << format_value(row[i]);
        }
        os << '\n';
    }
    if (!summary_.empty()) {
        os << "# summary:";
        for (const auto& [k, v] : summary_)
            os << ' ' << k << '=' << format_value(v);
        os << '\n';
    }
}

std::string ExperimentReport::to_csv() const {
    std::ostringstream ss;
    write_csv(ss);
    return ss.str();
}

} // namespace sigma2
