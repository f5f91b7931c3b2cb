#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tabnum/table.hpp"

namespace tabnum {

enum class Op {
    Add,
    Subtract,
    Multiply,
    Divide,
    Exp,
    Greater,
    TableSum,
    TableAverage,
    TableMax,
    TableMin,
};

const char* op_name(Op op);
bool is_table_op(Op op);

struct Operand {
    enum class Kind { Literal, Constant, StepRef, RowName, None };

    Kind kind = Kind::None;
    double value = 0.0;        // Literal
    bool source_decimal = false;  // Literal carried a '.' (or exponent) in source
    std::string name;          // Constant ("const_100") or RowName
    size_t index = 0;          // StepRef

    static Operand literal(double v, bool decimal);
    static Operand constant(std::string name);
    static Operand step_ref(size_t i);
    static Operand row_name(std::string name);
    static Operand none();

    bool operator==(const Operand&) const = default;
};

struct Step {
    Op op = Op::Add;
    Operand arg1;
    Operand arg2;

    bool operator==(const Step&) const = default;
};

struct Program {
    std::vector<Step> steps;

    bool operator==(const Program&) const = default;
};

struct ExecValue {
    bool is_boolean = false;
    double number = 0.0;
    bool truth = false;

    static ExecValue num(double v) { return {false, v, false}; }
    static ExecValue boolean(bool b) { return {true, 0.0, b}; }

    bool operator==(const ExecValue&) const = default;
};

// Executed values rendered for matching: numbers truncated toward zero at
// four fractional digits with trailing zeros trimmed, booleans as yes/no.
std::string render_exec_value(const ExecValue& v);

struct ParseError : std::runtime_error {
    size_t position;
    std::string reason;
    ParseError(size_t pos, std::string r);
};

struct ForwardReferenceError : ParseError {
    ForwardReferenceError(size_t pos, std::string r) : ParseError(pos, std::move(r)) {}
};

enum class ExecErrorKind { DivByZero, NonFiniteResult, BooleanOperand, UnknownRow, MissingTable };

struct ExecError : std::runtime_error {
    ExecErrorKind kind;
    ExecError(ExecErrorKind k, const std::string& msg);
};

// Supported const_* names and their values.
std::optional<double> constant_value(const std::string& name);

// Grammar: program := step ("," step)*
//          step    := op "(" arg "," arg ")"
//          arg     := signed decimal | "const_" token | "#" digits
//                   | quoted-or-bare row name | "none"
// sub/mul/div are accepted as aliases and canonicalized.
Program parse_program(const std::string& text);

// Canonical text form; parse_program(serialize(p)) == p.
std::string serialize(const Program& p);
std::string serialize(const Step& s);

// Evaluates steps in order and returns the last step's value. The table is
// required iff the program uses table_* ops or row-name operands.
ExecValue execute(const Program& p, const Table* t = nullptr);

// Per-step values, in order. Same error behavior as execute.
std::vector<ExecValue> execute_trace(const Program& p, const Table* t = nullptr);

// Canonical rendering of a literal: integers print without a decimal point
// unless the source carried one, otherwise shortest round-trip decimal.
std::string format_literal(double value, bool source_decimal);

}  // namespace tabnum
