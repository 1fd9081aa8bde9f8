#include "pclab/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace pclab::report {

Format parse_format(const std::string& s)
{
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    if (s == "table") return Format::table;
    throw std::invalid_argument("unknown format '" + s + "' (expected csv, json or table)");
}

std::string format_double(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    if (x == 0.0)
        x = 0.0;   // drop the sign of -0
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

std::string cell_text(const Cell& c)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>)
                return "";
            else if constexpr (std::is_same_v<T, double>)
                return format_double(v);
            else if constexpr (std::is_same_v<T, std::int64_t>)
                return std::to_string(v);
            else if constexpr (std::is_same_v<T, bool>)
                return v ? "true" : "false";
            else
                return v;
        },
        c);
}

nlohmann::json cell_json(const Cell& c)
{
    return std::visit(
        [](const auto& v) -> nlohmann::json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>)
                return nullptr;
            else if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(v))
                    return format_double(v);
                // Round to the same 9 digits the text formats show.
                const std::string text = format_double(v);
                double rounded = v;
                std::from_chars(text.data(), text.data() + text.size(), rounded);
                return rounded;
            } else
                return v;
        },
        c);
}

} // namespace

std::string render(const Table& t, Format f)
{
    std::ostringstream os;
    switch (f) {
    case Format::csv: {
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            os << (i ? "," : "") << csv_escape(t.columns[i]);
        os << '\n';
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                os << (i ? "," : "") << csv_escape(cell_text(row[i]));
            os << '\n';
        }
        break;
    }
    case Format::json: {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& row : t.rows) {
            nlohmann::ordered_json obj = nlohmann::ordered_json::object();
            for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i)
                obj[t.columns[i]] = cell_json(row[i]);
            arr.push_back(std::move(obj));
        }
        os << arr.dump(2) << '\n';
        break;
    }
    case Format::table: {
        std::vector<std::size_t> width(t.columns.size());
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            width[i] = t.columns[i].size();
        for (const auto& row : t.rows)
            for (std::size_t i = 0; i < row.size() && i < width.size(); ++i)
                width[i] = std::max(width[i], cell_text(row[i]).size());
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                os << (i ? "  " : "") << cells[i];
                if (i + 1 < cells.size())
                    os << std::string(width[i] - cells[i].size(), ' ');
            }
            os << '\n';
        };
        line(t.columns);
        for (const auto& row : t.rows) {
            std::vector<std::string> cells;
            for (const auto& c : row)
                cells.push_back(cell_text(c));
            line(cells);
        }
        break;
    }
    }
    return os.str();
}

Table lambda_table(const std::vector<constants::LambdaReport>& rows)
{
    Table t;
    t.columns = {"space", "n", "value", "stderr", "n_samples", "lower_bound", "upper_bound", "limit_value",
                 "limit_gap"};
    auto opt = [](const auto& o) -> Cell {
        if (!o)
            return std::monostate{};
        using T = std::decay_t<decltype(*o)>;
        if constexpr (std::is_floating_point_v<T>)
            return static_cast<double>(*o);
        else
            return static_cast<std::int64_t>(*o);
    };
    for (const auto& r : rows) {
        t.rows.push_back({std::string(constants::to_string(r.space)), static_cast<std::int64_t>(r.n), r.value,
                          opt(r.stderr_), opt(r.n_samples), opt(r.lower_bound), opt(r.upper_bound),
                          opt(r.limit_value), opt(r.limit_gap)});
    }
    return t;
}

} // namespace pclab::report
