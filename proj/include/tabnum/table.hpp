#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tabnum/numeric.hpp"

namespace tabnum {

enum class Unit { None, Currency, Percent, Count, Ratio };

std::string unit_name(Unit u);
Unit unit_from_name(const std::string& name);

struct Cell {
    std::string raw_text;
    std::optional<double> numeric_value;
    Unit unit = Unit::None;
    int scale = 0;  // power-of-ten multiplier applied to raw_text
};

// Parses raw cell text into a Cell: commas, currency symbols, parenthesized
// negatives, '%', and trailing scale words ("million", "k", ...).
Cell parse_cell(const std::string& raw);

struct UnknownHeader : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Table {
    std::string source_id;
    std::vector<std::string> row_headers;
    std::vector<std::string> col_headers;
    std::vector<std::vector<Cell>> cells;  // [row][col]

    // Throws std::invalid_argument on dimension mismatch or duplicate headers.
    void validate() const;

    size_t rows() const { return row_headers.size(); }
    size_t cols() const { return col_headers.size(); }

    const Cell& lookup(const std::string& row, const std::string& col) const;
    std::optional<size_t> row_index(const std::string& row) const;
    std::optional<size_t> col_index(const std::string& col) const;
};

struct Context {
    std::vector<std::string> pre_text;
    std::vector<std::string> post_text;
};

// One line per row: "<row> | <col1>: <raw1> ; <col2>: <raw2>". Empty table
// yields the empty string.
std::string linearize_table(const Table& t);

}  // namespace tabnum
