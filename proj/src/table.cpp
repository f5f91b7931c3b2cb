#include "tabnum/table.hpp"

#include <set>

namespace tabnum {

std::string unit_name(Unit u) {
    switch (u) {
        case Unit::Currency: return "currency";
        case Unit::Percent: return "percent";
        case Unit::Count: return "count";
        case Unit::Ratio: return "ratio";
        case Unit::None: return "none";
    }
    return "none";
}

Unit unit_from_name(const std::string& name) {
    if (name == "currency") return Unit::Currency;
    if (name == "percent") return Unit::Percent;
    if (name == "count") return Unit::Count;
    if (name == "ratio") return Unit::Ratio;
    if (name == "none" || name.empty()) return Unit::None;
    throw std::invalid_argument("unknown unit: " + name);
}

Cell parse_cell(const std::string& raw) {
    Cell c;
    c.raw_text = raw;
    if (auto parsed = parse_numeric_text(raw)) {
        // require the whole cell text to be the number plus decorations
        size_t rest = parsed->consumed;
        while (rest < raw.size() && std::isspace(static_cast<unsigned char>(raw[rest]))) ++rest;
        if (rest == raw.size()) {
            c.numeric_value = parsed->value;
            c.scale = parsed->scale;
            if (parsed->percent) c.unit = Unit::Percent;
            else if (parsed->currency) c.unit = Unit::Currency;
        }
    }
    return c;
}

void Table::validate() const {
    if (cells.size() != row_headers.size())
        throw std::invalid_argument("table '" + source_id + "': row count mismatch");
    for (const auto& row : cells)
        if (row.size() != col_headers.size())
            throw std::invalid_argument("table '" + source_id + "': column count mismatch");
    std::set<std::string> rows(row_headers.begin(), row_headers.end());
    if (rows.size() != row_headers.size())
        throw std::invalid_argument("table '" + source_id + "': duplicate row headers");
    std::set<std::string> cols(col_headers.begin(), col_headers.end());
    if (cols.size() != col_headers.size())
        throw std::invalid_argument("table '" + source_id + "': duplicate column headers");
}

std::optional<size_t> Table::row_index(const std::string& row) const {
    for (size_t i = 0; i < row_headers.size(); ++i)
        if (row_headers[i] == row) return i;
    return std::nullopt;
}

std::optional<size_t> Table::col_index(const std::string& col) const {
    for (size_t i = 0; i < col_headers.size(); ++i)
        if (col_headers[i] == col) return i;
    return std::nullopt;
}

const Cell& Table::lookup(const std::string& row, const std::string& col) const {
    auto r = row_index(row);
    if (!r) throw UnknownHeader("unknown row header: " + row);
    auto c = col_index(col);
    if (!c) throw UnknownHeader("unknown column header: " + col);
    return cells[*r][*c];
}

std::string linearize_table(const Table& t) {
    std::string out;
    for (size_t r = 0; r < t.rows(); ++r) {
        if (r) out += '\n';
        out += t.row_headers[r];
        out += " |";
        for (size_t c = 0; c < t.cols(); ++c) {
            out += c ? " ; " : " ";
            out += t.col_headers[c];
            out += ": ";
            out += t.cells[r][c].raw_text;
        }
    }
    return out;
}

}  // namespace tabnum
