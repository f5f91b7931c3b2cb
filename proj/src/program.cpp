#include "tabnum/program.hpp"

#include <cctype>
#include <cmath>
#include <map>

#include "tabnum/textutil.hpp"

namespace tabnum {

const char* op_name(Op op) {
    switch (op) {
        case Op::Add: return "add";
        case Op::Subtract: return "subtract";
        case Op::Multiply: return "multiply";
        case Op::Divide: return "divide";
        case Op::Exp: return "exp";
        case Op::Greater: return "greater";
        case Op::TableSum: return "table_sum";
        case Op::TableAverage: return "table_average";
        case Op::TableMax: return "table_max";
        case Op::TableMin: return "table_min";
    }
    return "?";
}

bool is_table_op(Op op) {
    return op == Op::TableSum || op == Op::TableAverage || op == Op::TableMax ||
           op == Op::TableMin;
}

Operand Operand::literal(double v, bool decimal) {
    Operand o;
    o.kind = Kind::Literal;
    o.value = v;
    o.source_decimal = decimal;
    return o;
}
Operand Operand::constant(std::string name) {
    Operand o;
    o.kind = Kind::Constant;
    o.name = std::move(name);
    return o;
}
Operand Operand::step_ref(size_t i) {
    Operand o;
    o.kind = Kind::StepRef;
    o.index = i;
    return o;
}
Operand Operand::row_name(std::string name) {
    Operand o;
    o.kind = Kind::RowName;
    o.name = std::move(name);
    return o;
}
Operand Operand::none() { return Operand{}; }

ParseError::ParseError(size_t pos, std::string r)
    : std::runtime_error("parse error at " + std::to_string(pos) + ": " + r),
      position(pos),
      reason(std::move(r)) {}

ExecError::ExecError(ExecErrorKind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}

std::optional<double> constant_value(const std::string& name) {
    static const std::map<std::string, double> constants = {
        {"const_1", 1.0},          {"const_2", 2.0},
        {"const_10", 10.0},        {"const_100", 100.0},
        {"const_1000", 1000.0},    {"const_1000000", 1e6},
        {"const_1000000000", 1e9}, {"const_m1", -1.0},
    };
    auto it = constants.find(name);
    if (it == constants.end()) return std::nullopt;
    return it->second;
}

namespace {

std::optional<Op> op_from_token(std::string tok) {
    tok = to_lower(tok);
    if (tok == "add") return Op::Add;
    if (tok == "subtract" || tok == "sub") return Op::Subtract;
    if (tok == "multiply" || tok == "mul") return Op::Multiply;
    if (tok == "divide" || tok == "div") return Op::Divide;
    if (tok == "exp") return Op::Exp;
    if (tok == "greater") return Op::Greater;
    if (tok == "table_sum") return Op::TableSum;
    if (tok == "table_average") return Op::TableAverage;
    if (tok == "table_max") return Op::TableMax;
    if (tok == "table_min") return Op::TableMin;
    return std::nullopt;
}

struct Parser {
    const std::string& text;
    size_t i = 0;

    explicit Parser(const std::string& t) : text(t) {}

    void skip_ws() {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    }

    bool eof() {
        skip_ws();
        return i >= text.size();
    }

    char peek() { return i < text.size() ? text[i] : '\0'; }

    void expect(char c) {
        skip_ws();
        if (i >= text.size() || text[i] != c)
            throw ParseError(i, std::string("expected '") + c + "'");
        ++i;
    }

    Operand parse_arg(size_t step_index) {
        skip_ws();
        size_t start = i;
        if (i >= text.size()) throw ParseError(i, "expected argument");
        char c = text[i];

        if (c == '#') {
            ++i;
            size_t d0 = i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            if (i == d0) throw ParseError(start, "expected digits after '#'");
            size_t ref = std::stoull(text.substr(d0, i - d0));
            if (ref >= step_index)
                throw ForwardReferenceError(start, "#" + std::to_string(ref) +
                                                       " is not a backward reference");
            return Operand::step_ref(ref);
        }

        if (c == '"') {
            ++i;
            size_t q0 = i;
            while (i < text.size() && text[i] != '"') ++i;
            if (i >= text.size()) throw ParseError(start, "unterminated quoted name");
            std::string name = text.substr(q0, i - q0);
            ++i;
            return Operand::row_name(std::move(name));
        }

        // bare token: runs up to ',' or ')'
        size_t end = i;
        while (end < text.size() && text[end] != ',' && text[end] != ')' && text[end] != '(') ++end;
        std::string tok = text.substr(i, end - i);
        while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.pop_back();
        if (tok.empty()) throw ParseError(start, "empty argument");
        i = start + tok.size();

        std::string lowered = to_lower(tok);
        if (lowered == "none") return Operand::none();
        if (lowered.rfind("const_", 0) == 0) {
            if (!constant_value(lowered))
                throw ParseError(start, "unknown constant: " + tok);
            return Operand::constant(lowered);
        }
        if (auto v = parse_plain_decimal(tok)) {
            bool decimal = tok.find('.') != std::string::npos ||
                           tok.find('e') != std::string::npos ||
                           tok.find('E') != std::string::npos;
            return Operand::literal(*v, decimal);
        }
        return Operand::row_name(std::move(tok));
    }

    Step parse_step(size_t step_index) {
        skip_ws();
        size_t start = i;
        while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
            ++i;
        if (i == start) throw ParseError(start, "expected operator name");
        std::string tok = text.substr(start, i - start);
        auto op = op_from_token(tok);
        if (!op) throw ParseError(start, "unknown operator: " + tok);

        expect('(');
        Operand a1 = parse_arg(step_index);
        expect(',');
        Operand a2 = parse_arg(step_index);
        expect(')');

        Step s{*op, std::move(a1), std::move(a2)};
        if (is_table_op(s.op)) {
            if (s.arg1.kind != Operand::Kind::RowName || s.arg2.kind != Operand::Kind::None)
                throw ParseError(start, std::string(op_name(s.op)) +
                                            " requires a row name and 'none'");
        } else {
            for (const Operand* a : {&s.arg1, &s.arg2})
                if (a->kind == Operand::Kind::RowName || a->kind == Operand::Kind::None)
                    throw ParseError(start, std::string(op_name(s.op)) +
                                                " does not take row-name or none operands");
        }
        return s;
    }
};

}  // namespace

Program parse_program(const std::string& text) {
    Parser p(text);
    Program prog;
    if (p.eof()) throw ParseError(0, "empty program");
    for (;;) {
        prog.steps.push_back(p.parse_step(prog.steps.size()));
        p.skip_ws();
        if (p.i < text.size() && text[p.i] == ',') {
            ++p.i;
            continue;
        }
        break;
    }
    if (!p.eof()) throw ParseError(p.i, "trailing input after program");
    return prog;
}

std::string format_literal(double value, bool source_decimal) {
    double integral;
    bool is_int = std::isfinite(value) && std::modf(value, &integral) == 0.0 &&
                  std::fabs(value) < 1e15;
    if (is_int) {
        char buf[32];
        snprintf(buf, sizeof(buf), "%.0f", value);
        std::string s(buf);
        if (source_decimal) s += ".0";
        return s;
    }
    return format_shortest(value);
}

namespace {

std::string serialize_operand(const Operand& a) {
    switch (a.kind) {
        case Operand::Kind::Literal: return format_literal(a.value, a.source_decimal);
        case Operand::Kind::Constant: return a.name;
        case Operand::Kind::StepRef: return "#" + std::to_string(a.index);
        case Operand::Kind::RowName: {
            bool needs_quotes = a.name.find(',') != std::string::npos ||
                                a.name.find('(') != std::string::npos ||
                                a.name.find(')') != std::string::npos;
            return needs_quotes ? "\"" + a.name + "\"" : a.name;
        }
        case Operand::Kind::None: return "none";
    }
    return "none";
}

}  // namespace

std::string serialize(const Step& s) {
    return std::string(op_name(s.op)) + "(" + serialize_operand(s.arg1) + ", " +
           serialize_operand(s.arg2) + ")";
}

std::string serialize(const Program& p) {
    std::string out;
    for (size_t i = 0; i < p.steps.size(); ++i) {
        if (i) out += ", ";
        out += serialize(p.steps[i]);
    }
    return out;
}

namespace {

double operand_value(const Operand& a, const std::vector<ExecValue>& trace) {
    switch (a.kind) {
        case Operand::Kind::Literal:
            return a.value;
        case Operand::Kind::Constant: {
            auto v = constant_value(a.name);
            if (!v) throw ExecError(ExecErrorKind::NonFiniteResult, "unknown constant " + a.name);
            return *v;
        }
        case Operand::Kind::StepRef: {
            const ExecValue& v = trace.at(a.index);
            if (v.is_boolean)
                throw ExecError(ExecErrorKind::BooleanOperand,
                                "boolean result of step " + std::to_string(a.index) +
                                    " used as arithmetic operand");
            return v.number;
        }
        case Operand::Kind::RowName:
        case Operand::Kind::None:
            throw ExecError(ExecErrorKind::NonFiniteResult, "operand has no scalar value");
    }
    throw ExecError(ExecErrorKind::NonFiniteResult, "bad operand");
}

ExecValue exec_table_op(const Step& s, const Table* t) {
    if (!t) throw ExecError(ExecErrorKind::MissingTable, "program requires a table");
    auto r = t->row_index(s.arg1.name);
    if (!r) throw ExecError(ExecErrorKind::UnknownRow, "unknown row: " + s.arg1.name);
    std::vector<double> vals;
    for (const Cell& c : t->cells[*r])
        if (c.numeric_value) vals.push_back(*c.numeric_value);
    switch (s.op) {
        case Op::TableSum: {
            double acc = 0;
            for (double v : vals) acc += v;
            return ExecValue::num(acc);
        }
        case Op::TableAverage: {
            if (vals.empty()) throw ExecError(ExecErrorKind::DivByZero, "average of empty row");
            double acc = 0;
            for (double v : vals) acc += v;
            return ExecValue::num(acc / double(vals.size()));
        }
        case Op::TableMax: {
            if (vals.empty())
                throw ExecError(ExecErrorKind::NonFiniteResult, "max of empty row");
            double m = vals[0];
            for (double v : vals) m = std::max(m, v);
            return ExecValue::num(m);
        }
        case Op::TableMin: {
            if (vals.empty())
                throw ExecError(ExecErrorKind::NonFiniteResult, "min of empty row");
            double m = vals[0];
            for (double v : vals) m = std::min(m, v);
            return ExecValue::num(m);
        }
        default:
            throw ExecError(ExecErrorKind::NonFiniteResult, "not a table op");
    }
}

}  // namespace

std::vector<ExecValue> execute_trace(const Program& p, const Table* t) {
    if (p.steps.empty())
        throw ExecError(ExecErrorKind::NonFiniteResult, "empty program");
    std::vector<ExecValue> trace;
    trace.reserve(p.steps.size());
    for (const Step& s : p.steps) {
        ExecValue v;
        if (is_table_op(s.op)) {
            v = exec_table_op(s, t);
        } else {
            double a = operand_value(s.arg1, trace);
            double b = operand_value(s.arg2, trace);
            switch (s.op) {
                case Op::Add: v = ExecValue::num(a + b); break;
                case Op::Subtract: v = ExecValue::num(a - b); break;
                case Op::Multiply: v = ExecValue::num(a * b); break;
                case Op::Divide:
                    if (b == 0.0) throw ExecError(ExecErrorKind::DivByZero, "division by zero");
                    v = ExecValue::num(a / b);
                    break;
                case Op::Exp: v = ExecValue::num(std::pow(a, b)); break;
                case Op::Greater: v = ExecValue::boolean(a > b); break;
                default: break;
            }
        }
        if (!v.is_boolean && !std::isfinite(v.number))
            throw ExecError(ExecErrorKind::NonFiniteResult, "non-finite intermediate value");
        trace.push_back(v);
    }
    return trace;
}

ExecValue execute(const Program& p, const Table* t) { return execute_trace(p, t).back(); }

std::string render_exec_value(const ExecValue& v) {
    if (v.is_boolean) return v.truth ? "yes" : "no";
    // round at 10 digits to absorb float noise, then truncate to 4
    char buf[512];
    snprintf(buf, sizeof(buf), "%.10f", v.number);
    std::string s(buf);
    size_t dot = s.find('.');
    if (dot != std::string::npos) {
        s = s.substr(0, std::min(s.size(), dot + 5));  // keep at most 4 fractional digits
        while (!s.empty() && s.back() == '0') s.pop_back();
        if (!s.empty() && s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

}  // namespace tabnum
