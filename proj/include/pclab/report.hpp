#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "pclab/constants.hpp"

namespace pclab::report {

enum class Format { csv, json, table };

Format parse_format(const std::string& s);

/// A report cell. Empty cells render as "" in CSV and null in JSON.
using Cell = std::variant<std::monostate, double, std::int64_t, std::string, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// Locale-independent, 9 significant digits, '.' decimal separator.
std::string format_double(double x);

/// CSV (header + rows), JSON (array of objects keyed by column) or an
/// aligned text table. Output always ends with a newline.
std::string render(const Table& t, Format f);

/// Columns: space,n,value,stderr,n_samples,lower_bound,upper_bound,limit_value,limit_gap
Table lambda_table(const std::vector<constants::LambdaReport>& rows);

} // namespace pclab::report
