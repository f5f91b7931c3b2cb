#include "tabnum/datagen.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "tabnum/textutil.hpp"

namespace tabnum {

const char* const kParaphraseSystemInstruction =
    "Rewrite the user's question for fluency and lexical variation. Perform "
    "surface-form rewriting only: keep every header phrase and key term "
    "verbatim and leave the meaning unchanged. Respond with the rewritten "
    "question only.";

void GenConfig::validate() const {
    if (len_min < 1 || len_min > len_max)
        throw std::invalid_argument("length bounds must satisfy 1 <= len_min <= len_max");
    double total = 0.0;
    for (const auto& [op, w] : operator_weights) {
        if (w < 0.0) throw std::invalid_argument("operator weights must be non-negative");
        if (is_table_op(op)) throw std::invalid_argument("generator operators are scalar only");
        total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("operator weights must not all be zero");
    if (jargon_fraction < 0.0 || jargon_fraction > 1.0)
        throw std::invalid_argument("jargon_fraction must be in [0, 1]");
    if (magnitude_cap <= 0.0) throw std::invalid_argument("magnitude_cap must be positive");
}

// ---------------------------------------------------------------------------
// Jargon template expressions
// ---------------------------------------------------------------------------

namespace {

struct JNode {
    std::string ident;  // leaf: slot name or const_*
    Op op = Op::Add;
    std::unique_ptr<JNode> lhs, rhs;

    bool is_leaf() const { return !lhs; }
};

struct JTokenizer {
    std::string_view text;
    size_t i = 0;

    void skip_ws() {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    }

    // returns "" at end; single-char token for operators/brackets
    std::string next() {
        skip_ws();
        if (i >= text.size()) return "";
        char c = text[i];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = i;
            while (i < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
                ++i;
            return std::string(text.substr(start, i - start));
        }
        if (text.compare(i, 2, "\xc3\x97") == 0) {  // UTF-8 multiplication sign
            i += 2;
            return "*";
        }
        if (c == '*' || c == '+' || c == '-' || c == '/' || c == '[' || c == ']' || c == '(' ||
            c == ')') {
            ++i;
            return std::string(1, c);
        }
        throw std::invalid_argument("bad character in sketch template: " + std::string(text));
    }

    std::string peek() {
        size_t save = i;
        std::string t = next();
        i = save;
        return t;
    }
};

std::unique_ptr<JNode> parse_jexpr(JTokenizer& tz);

std::unique_ptr<JNode> parse_jterm(JTokenizer& tz) {
    std::string t = tz.next();
    if (t == "[" || t == "(") {
        auto inner = parse_jexpr(tz);
        std::string close = tz.next();
        if (close != (t == "[" ? "]" : ")"))
            throw std::invalid_argument("unbalanced brackets in sketch template");
        return inner;
    }
    if (t.empty() || !(std::isalpha(static_cast<unsigned char>(t[0])) || t[0] == '_'))
        throw std::invalid_argument("expected concept token in sketch template, got '" + t + "'");
    auto node = std::make_unique<JNode>();
    node->ident = t;
    return node;
}

std::unique_ptr<JNode> parse_jexpr(JTokenizer& tz) {
    auto node = parse_jterm(tz);
    for (;;) {
        std::string t = tz.peek();
        Op op;
        if (t == "+") op = Op::Add;
        else if (t == "-") op = Op::Subtract;
        else if (t == "*") op = Op::Multiply;
        else if (t == "/") op = Op::Divide;
        else break;
        tz.next();
        auto parent = std::make_unique<JNode>();
        parent->op = op;
        parent->lhs = std::move(node);
        parent->rhs = parse_jterm(tz);
        node = std::move(parent);
    }
    return node;
}

std::unique_ptr<JNode> parse_jargon_template(const std::string& templ) {
    JTokenizer tz{templ};
    auto node = parse_jexpr(tz);
    if (!tz.next().empty())
        throw std::invalid_argument("trailing input in sketch template: " + templ);
    return node;
}

void collect_leaves(const JNode& n, std::vector<const JNode*>& out) {
    if (n.is_leaf()) {
        out.push_back(&n);
        return;
    }
    collect_leaves(*n.lhs, out);
    collect_leaves(*n.rhs, out);
}

void check_chain_shape(const JNode& n) {
    if (n.is_leaf()) return;
    if (!n.lhs->is_leaf() && !n.rhs->is_leaf())
        throw std::invalid_argument("sketch template is not a linear operation chain");
    check_chain_shape(*n.lhs);
    check_chain_shape(*n.rhs);
}

}  // namespace

std::vector<JargonEntry> load_jargon_book(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open jargon book: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    std::vector<JargonEntry> book;
    for (const auto& item : j) {
        JargonEntry e;
        e.key = item.at("key").get<std::string>();
        e.sketch_template = item.at("sketch_template").get<std::string>();
        for (const auto& s : item.at("slots"))
            e.slots.push_back({s.at("name").get<std::string>(),
                               s.at("row_header").get<std::string>()});

        auto ast = parse_jargon_template(e.sketch_template);
        check_chain_shape(*ast);
        std::vector<const JNode*> leaves;
        collect_leaves(*ast, leaves);
        for (const JNode* leaf : leaves) {
            if (constant_value(leaf->ident)) continue;
            bool bound = std::any_of(e.slots.begin(), e.slots.end(),
                                     [&](const JargonSlot& s) { return s.name == leaf->ident; });
            if (!bound)
                throw std::invalid_argument("jargon '" + e.key + "': slot '" + leaf->ident +
                                            "' has no binding");
        }
        book.push_back(std::move(e));
    }
    return book;
}

// ---------------------------------------------------------------------------
// Program sampling
// ---------------------------------------------------------------------------

namespace {

struct NumericCell {
    CellRef ref;
    double value;
    Unit unit;
    int scale;
};

std::vector<NumericCell> numeric_cells(const Table& t) {
    std::vector<NumericCell> out;
    for (size_t r = 0; r < t.rows(); ++r)
        for (size_t c = 0; c < t.cols(); ++c) {
            const Cell& cell = t.cells[r][c];
            if (cell.numeric_value)
                out.push_back({{r, c}, *cell.numeric_value, cell.unit, cell.scale});
        }
    return out;
}

bool pair_allowed(Op op, const NumericCell& a, const NumericCell& b) {
    switch (op) {
        case Op::Add:
        case Op::Subtract:
            return a.unit == b.unit && a.scale == b.scale;
        case Op::Multiply:
            return !(a.unit == Unit::Percent && b.unit == Unit::Percent);
        case Op::Divide:
            return b.value != 0.0;
        case Op::Greater:
            return a.unit == b.unit;
        default:
            return true;
    }
}

Operand cell_literal(const NumericCell& c) {
    double integral;
    bool is_int = std::modf(c.value, &integral) == 0.0;
    return Operand::literal(c.value, !is_int);
}

Op sample_op(const GenConfig& cfg, SplitMix64& rng) {
    double total = 0.0;
    for (const auto& [op, w] : cfg.operator_weights) total += w;
    double x = rng.unit() * total;
    for (const auto& [op, w] : cfg.operator_weights) {
        x -= w;
        if (x < 0.0) return op;
    }
    return cfg.operator_weights.rbegin()->first;
}

std::optional<SampledProgram> try_percent_change(const Table& t, SplitMix64& rng) {
    // rows with >= 2 numeric cells of equal unit and scale, nonzero base
    std::vector<std::pair<size_t, std::vector<size_t>>> rows;
    for (size_t r = 0; r < t.rows(); ++r) {
        std::vector<size_t> cols;
        for (size_t c = 0; c < t.cols(); ++c)
            if (t.cells[r][c].numeric_value) cols.push_back(c);
        if (cols.size() < 2) continue;
        // keep columns sharing the dominant (unit, scale) of the row
        std::vector<size_t> kept;
        for (size_t c : cols) {
            const Cell& cell = t.cells[r][c];
            const Cell& first = t.cells[r][cols[0]];
            if (cell.unit == first.unit && cell.scale == first.scale) kept.push_back(c);
        }
        if (kept.size() >= 2) rows.push_back({r, std::move(kept)});
    }
    if (rows.empty()) return std::nullopt;

    const auto& [row, cols] = rows[rng.below(rows.size())];
    for (int attempt = 0; attempt < 20; ++attempt) {
        size_t i = rng.below(cols.size());
        size_t j = rng.below(cols.size());
        if (i == j) continue;
        size_t cb = cols[std::min(i, j)], ca = cols[std::max(i, j)];  // earlier -> later
        double va = *t.cells[row][ca].numeric_value;
        double vb = *t.cells[row][cb].numeric_value;
        if (vb == 0.0) continue;

        NumericCell ncA{{row, ca}, va, t.cells[row][ca].unit, t.cells[row][ca].scale};
        NumericCell ncB{{row, cb}, vb, t.cells[row][cb].unit, t.cells[row][cb].scale};
        SampledProgram sp;
        sp.pattern = "percent_change";
        sp.program.steps = {
            {Op::Subtract, cell_literal(ncA), cell_literal(ncB)},
            {Op::Divide, Operand::step_ref(0), cell_literal(ncB)},
            {Op::Multiply, Operand::step_ref(1), Operand::constant("const_100")},
        };
        sp.sources = {
            {CellRef{row, ca}, CellRef{row, cb}},
            {std::nullopt, CellRef{row, cb}},
            {std::nullopt, std::nullopt},
        };
        return sp;
    }
    return std::nullopt;
}

const char* pattern_for_single(Op op) {
    switch (op) {
        case Op::Add: return "sum";
        case Op::Subtract: return "difference";
        case Op::Multiply: return "product";
        case Op::Divide: return "ratio";
        case Op::Greater: return "comparison";
        case Op::Exp: return "power";
        default: return "chain";
    }
}

}  // namespace

SampledProgram sample_program(const Table& t, const GenConfig& cfg, SplitMix64& rng) {
    auto cells = numeric_cells(t);
    if (cells.size() < 2) throw NoEligibleCells("table '" + t.source_id + "' has fewer than 2 numeric cells");

    int len = cfg.len_min + int(rng.below(uint64_t(cfg.len_max - cfg.len_min + 1)));

    // the dedicated percent-change pattern; random chains rarely produce it
    if (len == 3 && rng.unit() < 0.5) {
        if (auto sp = try_percent_change(t, rng)) return *sp;
    }

    std::vector<Op> ops;
    for (int i = 0; i < len; ++i) {
        Op op = sample_op(cfg, rng);
        // boolean results may only terminate a program
        for (int retry = 0; retry < 20 && op == Op::Greater && i != len - 1; ++retry)
            op = sample_op(cfg, rng);
        if (op == Op::Greater && i != len - 1) op = Op::Add;
        ops.push_back(op);
    }

    SampledProgram sp;
    sp.pattern = len == 1 ? pattern_for_single(ops[0]) : "chain";

    // first step: two cell literals (exp takes a cell base and const_2)
    if (ops[0] == Op::Exp) {
        const NumericCell& base = cells[rng.below(cells.size())];
        sp.program.steps.push_back({Op::Exp, cell_literal(base), Operand::constant("const_2")});
        sp.sources.push_back({base.ref, std::nullopt});
    } else {
        bool found = false;
        for (int attempt = 0; attempt < 60 && !found; ++attempt) {
            size_t i = rng.below(cells.size());
            size_t j = rng.below(cells.size());
            if (i == j) continue;
            if (!pair_allowed(ops[0], cells[i], cells[j])) continue;
            sp.program.steps.push_back({ops[0], cell_literal(cells[i]), cell_literal(cells[j])});
            sp.sources.push_back({cells[i].ref, cells[j].ref});
            found = true;
        }
        if (!found)
            throw NoEligibleCells("no operand pair satisfies the unit constraints for " +
                                  std::string(op_name(ops[0])));
    }

    for (int i = 1; i < len; ++i) {
        Op op = ops[i];
        Operand ref = Operand::step_ref(size_t(i - 1));
        if (op == Op::Exp) {
            sp.program.steps.push_back({op, ref, Operand::constant("const_2")});
            sp.sources.push_back({std::nullopt, std::nullopt});
            continue;
        }

        bool ref_first = op == Op::Greater ? true : (rng.next() & 1) != 0;
        Operand other;
        std::optional<CellRef> other_src;
        if (op != Op::Greater && rng.unit() < 0.15) {
            static const char* const kChainConstants[] = {"const_2", "const_10", "const_100",
                                                          "const_1000"};
            other = Operand::constant(kChainConstants[rng.below(4)]);
        } else {
            const NumericCell* pick = nullptr;
            for (int attempt = 0; attempt < 20 && !pick; ++attempt) {
                const NumericCell& cand = cells[rng.below(cells.size())];
                if (op == Op::Divide && ref_first && cand.value == 0.0) continue;
                pick = &cand;
            }
            if (!pick) throw NoEligibleCells("no usable cell operand for chain step");
            other = cell_literal(*pick);
            other_src = pick->ref;
        }

        Step s;
        s.op = op;
        if (ref_first) {
            s.arg1 = ref;
            s.arg2 = other;
            sp.sources.push_back({std::nullopt, other_src});
        } else {
            s.arg1 = other;
            s.arg2 = ref;
            sp.sources.push_back({other_src, std::nullopt});
        }
        sp.program.steps.push_back(std::move(s));
    }

    return sp;
}

std::optional<ExecValue> validate_and_execute(const Program& p, const Table& t,
                                              const GenConfig& cfg) {
    try {
        auto trace = execute_trace(p, &t);
        for (const ExecValue& v : trace) {
            if (v.is_boolean) continue;
            if (!std::isfinite(v.number) || std::fabs(v.number) > cfg.magnitude_cap)
                return std::nullopt;
        }
        return trace.back();
    } catch (const ExecError&) {
        return std::nullopt;
    }
}

// ---------------------------------------------------------------------------
// Sketch and question derivation
// ---------------------------------------------------------------------------

namespace {

int sketch_precedence(Op op) {
    switch (op) {
        case Op::Greater: return 0;
        case Op::Add:
        case Op::Subtract: return 1;
        case Op::Multiply:
        case Op::Divide: return 2;
        case Op::Exp: return 3;
        default: return 1;
    }
}

const char* sketch_symbol(Op op) {
    switch (op) {
        case Op::Add: return "+";
        case Op::Subtract: return "-";
        case Op::Multiply: return "\xc3\x97";  // ×
        case Op::Divide: return "/";
        case Op::Exp: return "^";
        case Op::Greater: return ">";
        default: return "?";
    }
}

std::string constant_display(const std::string& name) {
    auto v = constant_value(name);
    return v ? format_literal(*v, false) : name;
}

}  // namespace

std::string derive_sketch(const SampledProgram& sp, const Table& t, const JargonEntry* jargon) {
    if (jargon) {
        std::vector<PhraseReplacement> repl;
        for (const auto& slot : jargon->slots) repl.push_back({slot.name, slot.row_header});
        return replace_phrases(jargon->sketch_template, std::move(repl), false).text;
    }

    std::string expr;
    int top_prec = 0;
    for (size_t i = 0; i < sp.program.steps.size(); ++i) {
        const Step& s = sp.program.steps[i];
        auto operand_text = [&](const Operand& a, size_t arg_idx) -> std::string {
            switch (a.kind) {
                case Operand::Kind::Literal: {
                    if (i >= sp.sources.size() || !sp.sources[i][arg_idx])
                        throw ProvenanceLost("literal operand has no source cell");
                    const CellRef& ref = *sp.sources[i][arg_idx];
                    return t.row_headers.at(ref.row);
                }
                case Operand::Kind::Constant:
                    return constant_display(a.name);
                case Operand::Kind::StepRef: {
                    if (sketch_precedence(s.op) > top_prec) return "(" + expr + ")";
                    return expr;
                }
                default:
                    throw ProvenanceLost("unexpected operand kind in generated program");
            }
        };
        std::string lhs = operand_text(s.arg1, 0);
        std::string rhs = operand_text(s.arg2, 1);
        std::string next = lhs + " " + sketch_symbol(s.op) + " " + rhs;
        expr = std::move(next);
        top_prec = sketch_precedence(s.op);
    }
    return expr;
}

namespace {

std::string entity_of(const Table& t) {
    size_t dash = t.source_id.find('-');
    return dash == std::string::npos ? t.source_id : t.source_id.substr(0, dash);
}

std::string cell_phrase(const Table& t, const CellRef& ref) {
    return t.row_headers.at(ref.row) + " in " + t.col_headers.at(ref.col);
}

std::string operand_phrase(const SampledProgram& sp, const Table& t, size_t step, size_t arg) {
    const Operand& a = arg == 0 ? sp.program.steps[step].arg1 : sp.program.steps[step].arg2;
    if (a.kind == Operand::Kind::Constant) return constant_display(a.name);
    if (a.kind == Operand::Kind::Literal) {
        if (!sp.sources[step][arg]) throw ProvenanceLost("literal operand has no source cell");
        return cell_phrase(t, *sp.sources[step][arg]);
    }
    return "the result";
}

}  // namespace

std::string derive_template_question(const SampledProgram& sp, const Table& t,
                                     const JargonEntry* jargon, SplitMix64& rng) {
    (void)rng;  // phrasing is fixed per pattern; kept for future template variety
    if (jargon) {
        std::string period;
        for (size_t i = 0; i < sp.sources.size() && period.empty(); ++i)
            for (size_t a = 0; a < 2 && period.empty(); ++a)
                if (sp.sources[i][a]) period = t.col_headers.at(sp.sources[i][a]->col);
        std::string q = "What is " + entity_of(t) + "'s";
        if (!period.empty()) q += " " + period;
        return q + " " + jargon->key + "?";
    }

    const auto& steps = sp.program.steps;
    if (sp.pattern == "percent_change") {
        const CellRef& later = *sp.sources[0][0];
        const CellRef& earlier = *sp.sources[0][1];
        return "What is the percentage change in " + t.row_headers.at(later.row) + " from " +
               t.col_headers.at(earlier.col) + " to " + t.col_headers.at(later.col) + "?";
    }

    if (steps.size() == 1) {
        std::string a = operand_phrase(sp, t, 0, 0);
        std::string b = operand_phrase(sp, t, 0, 1);
        switch (steps[0].op) {
            case Op::Add:
                return "What is the combined amount of " + a + " and " + b + "?";
            case Op::Subtract:
                return "What is the difference between " + a + " and " + b + "?";
            case Op::Multiply:
                return "What is the product of " + a + " and " + b + "?";
            case Op::Divide:
                return "What is the ratio of " + a + " to " + b + "?";
            case Op::Greater:
                return "Is " + a + " greater than " + b + "?";
            case Op::Exp:
                return "What is " + a + " raised to the power of " + b + "?";
            default:
                break;
        }
    }

    // generic linear chain
    std::string q = "Start with " + operand_phrase(sp, t, 0, 0);
    switch (steps[0].op) {
        case Op::Add: q += ", add "; break;
        case Op::Subtract: q += ", subtract "; break;
        case Op::Multiply: q += ", multiply by "; break;
        case Op::Divide: q += ", divide by "; break;
        case Op::Exp: q += ", raise to the power of "; break;
        default: q += ", combine with "; break;
    }
    q += operand_phrase(sp, t, 0, 1);

    bool ends_with_greater = false;
    std::string greater_operand;
    for (size_t i = 1; i < steps.size(); ++i) {
        const Step& s = steps[i];
        bool ref_first = s.arg1.kind == Operand::Kind::StepRef;
        std::string other = operand_phrase(sp, t, i, ref_first ? 1 : 0);
        if (s.op == Op::Greater) {
            ends_with_greater = true;
            greater_operand = other;
            break;
        }
        switch (s.op) {
            case Op::Add: q += ", then add " + other; break;
            case Op::Subtract:
                q += ref_first ? ", then subtract " + other
                               : ", then subtract the running result from " + other;
                break;
            case Op::Multiply: q += ", then multiply by " + other; break;
            case Op::Divide:
                q += ref_first ? ", then divide by " + other
                               : ", then divide " + other + " by the running result";
                break;
            case Op::Exp: q += ", then raise the running result to the power of 2"; break;
            default: break;
        }
    }
    if (ends_with_greater) return q + ". Is the result greater than " + greater_operand + "?";
    return q + ". What is the result?";
}

// ---------------------------------------------------------------------------
// Corpus generation
// ---------------------------------------------------------------------------

namespace {

struct JargonInstantiation {
    SampledProgram sp;
    const JargonEntry* entry;
    size_t table_index;
};

std::optional<SampledProgram> instantiate_jargon(const JargonEntry& entry, const Table& t,
                                                 SplitMix64& rng) {
    auto ast = parse_jargon_template(entry.sketch_template);
    std::vector<const JNode*> leaves;
    collect_leaves(*ast, leaves);

    // occurrences per slot name, in leaf order
    std::map<std::string, size_t> occurrences;
    for (const JNode* leaf : leaves)
        if (!constant_value(leaf->ident)) ++occurrences[leaf->ident];

    // assign distinct numeric columns per slot occurrence
    std::map<std::string, std::vector<CellRef>> assignments;
    for (const auto& [name, count] : occurrences) {
        auto slot = std::find_if(entry.slots.begin(), entry.slots.end(),
                                 [&](const JargonSlot& s) { return s.name == name; });
        if (slot == entry.slots.end()) return std::nullopt;
        auto row = t.row_index(slot->row_header);
        if (!row) return std::nullopt;
        std::vector<size_t> cols;
        for (size_t c = 0; c < t.cols(); ++c)
            if (t.cells[*row][c].numeric_value) cols.push_back(c);
        if (cols.size() < count) return std::nullopt;
        // deterministic partial shuffle
        for (size_t k = 0; k < count; ++k) {
            size_t j = k + rng.below(cols.size() - k);
            std::swap(cols[k], cols[j]);
        }
        std::vector<CellRef> refs;
        for (size_t k = 0; k < count; ++k) refs.push_back({*row, cols[k]});
        std::sort(refs.begin(), refs.end(),
                  [](const CellRef& a, const CellRef& b) { return a.col < b.col; });
        assignments[name] = std::move(refs);
    }

    std::map<std::string, size_t> next_occurrence;
    SampledProgram sp;
    sp.pattern = "jargon";

    // emit the chain bottom-up, leaves left to right
    std::function<Operand(const JNode&, std::optional<CellRef>&)> emit =
        [&](const JNode& n, std::optional<CellRef>& src) -> Operand {
        if (n.is_leaf()) {
            if (constant_value(n.ident)) return Operand::constant(n.ident);
            const auto& refs = assignments.at(n.ident);
            const CellRef& ref = refs.at(next_occurrence[n.ident]++);
            src = ref;
            double v = *t.cells[ref.row][ref.col].numeric_value;
            double integral;
            return Operand::literal(v, std::modf(v, &integral) != 0.0);
        }
        std::optional<CellRef> src1, src2;
        Operand a1 = emit(*n.lhs, src1);
        Operand a2 = emit(*n.rhs, src2);
        sp.program.steps.push_back({n.op, std::move(a1), std::move(a2)});
        sp.sources.push_back({src1, src2});
        src.reset();
        return Operand::step_ref(sp.program.steps.size() - 1);
    };
    std::optional<CellRef> top_src;
    emit(*ast, top_src);
    if (sp.program.steps.empty()) return std::nullopt;  // bare-leaf template
    return sp;
}

Context make_context(const Table& t) {
    Context ctx;
    ctx.pre_text.push_back("The following table reports " + entity_of(t) +
                           " figures across " + join(t.col_headers, ", ") + ".");
    ctx.post_text.push_back("All values are as reported.");
    return ctx;
}

std::optional<ReasoningExample> run_attempt(
    const std::vector<std::pair<Table, Context>>& tables, const GenConfig& cfg,
    const std::vector<JargonEntry>& jargon_book, uint64_t attempt, bool* exec_discard) {
    *exec_discard = false;
    uint64_t attempt_seed = mix_seed(cfg.seed, attempt);
    SplitMix64 rng(attempt_seed);

    size_t table_idx = rng.below(tables.size());
    bool want_jargon = !jargon_book.empty() && rng.unit() < cfg.jargon_fraction;

    SampledProgram sp;
    const JargonEntry* jargon = nullptr;
    const Table* table = nullptr;
    const Context* base_ctx = nullptr;

    if (want_jargon) {
        const JargonEntry& entry = jargon_book[rng.below(jargon_book.size())];
        // scan tables cyclically from the sampled index for one that fits
        for (size_t k = 0; k < tables.size(); ++k) {
            size_t idx = (table_idx + k) % tables.size();
            if (auto inst = instantiate_jargon(entry, tables[idx].first, rng)) {
                sp = std::move(*inst);
                jargon = &entry;
                table = &tables[idx].first;
                base_ctx = &tables[idx].second;
                break;
            }
        }
        if (!table) return std::nullopt;
    } else {
        table = &tables[table_idx].first;
        base_ctx = &tables[table_idx].second;
        try {
            sp = sample_program(*table, cfg, rng);
        } catch (const NoEligibleCells&) {
            return std::nullopt;
        }
    }

    auto answer = validate_and_execute(sp.program, *table, cfg);
    if (!answer) {
        *exec_discard = true;
        return std::nullopt;
    }

    ReasoningExample ex;
    ex.table = *table;
    ex.context = base_ctx->pre_text.empty() && base_ctx->post_text.empty() ? make_context(*table)
                                                                           : *base_ctx;
    ex.program = sp.program;
    ex.answer = *answer;
    ex.sketch = derive_sketch(sp, *table, jargon);
    ex.template_question = derive_template_question(sp, *table, jargon, rng);
    ex.question = ex.template_question;
    ex.pattern = sp.pattern;
    if (jargon) ex.jargon_key = jargon->key;
    ex.gen_seed = attempt_seed;
    return ex;
}

}  // namespace

std::vector<ReasoningExample> generate_corpus(
    const std::vector<std::pair<Table, Context>>& tables, const GenConfig& cfg,
    const std::vector<JargonEntry>& jargon_book, GenStats* stats, unsigned threads) {
    cfg.validate();
    if (cfg.count == 0) return {};
    if (tables.empty()) throw InsufficientTables("no input tables");
    for (const auto& [t, ctx] : tables) t.validate();

    GenStats local;
    GenStats& st = stats ? *stats : local;
    st = GenStats{};

    const uint64_t budget = uint64_t(cfg.count) * 100;
    std::vector<ReasoningExample> out;
    out.reserve(cfg.count);

    if (threads < 1) threads = 1;
    const uint64_t chunk = threads == 1 ? 512 : uint64_t(threads) * 128;

    for (uint64_t base = 0; base < budget && out.size() < cfg.count; base += chunk) {
        uint64_t end = std::min(budget, base + chunk);
        std::vector<std::optional<ReasoningExample>> results(end - base);
        std::vector<char> exec_discards(end - base, 0);

        auto work = [&](uint64_t from, uint64_t to) {
            for (uint64_t a = from; a < to; ++a) {
                bool ed = false;
                results[a - base] = run_attempt(tables, cfg, jargon_book, a, &ed);
                exec_discards[a - base] = ed ? 1 : 0;
            }
        };
        if (threads == 1) {
            work(base, end);
        } else {
            std::vector<std::thread> pool;
            uint64_t n = end - base;
            uint64_t per = (n + threads - 1) / threads;
            for (unsigned t = 0; t < threads; ++t) {
                uint64_t from = base + std::min<uint64_t>(n, uint64_t(t) * per);
                uint64_t to = base + std::min<uint64_t>(n, uint64_t(t + 1) * per);
                if (from < to) pool.emplace_back(work, from, to);
            }
            for (auto& th : pool) th.join();
        }

        // consume in attempt order so output is independent of thread count
        for (uint64_t a = base; a < end && out.size() < cfg.count; ++a) {
            ++st.attempts;
            auto& res = results[a - base];
            if (!res) {
                if (exec_discards[a - base]) ++st.discarded_execution;
                else ++st.discarded_sampling;
                continue;
            }
            char idbuf[32];
            snprintf(idbuf, sizeof(idbuf), "ex-%08llu", (unsigned long long)a);
            res->id = idbuf;
            out.push_back(std::move(*res));
            ++st.emitted;
        }
    }

    if (out.size() < cfg.count)
        throw InsufficientTables("attempt budget exhausted: emitted " +
                                 std::to_string(out.size()) + " of " +
                                 std::to_string(cfg.count));
    return out;
}

// ---------------------------------------------------------------------------
// Paraphrasing
// ---------------------------------------------------------------------------

namespace {

class OfflineParaphraseClient final : public ParaphraseClient {
  public:
    std::string rewrite(const std::string&, const std::string& question) override {
        uint64_t h = fnv1a64(question);
        switch (h % 4) {
            case 0:
                return question;
            case 1:
                if (question.rfind("What is ", 0) == 0)
                    return "What would be " + question.substr(8);
                return "Here is a question: " + question;
            case 2: {
                std::string q = question;
                if (!q.empty() && q[0] >= 'A' && q[0] <= 'Z' &&
                    (q.rfind("What", 0) == 0 || q.rfind("Is ", 0) == 0 ||
                     q.rfind("Start", 0) == 0))
                    q[0] = char(q[0] - 'A' + 'a');
                return "Please determine the following: " + q;
            }
            default: {
                std::string q = question;
                if (!q.empty() && q.back() == '?') {
                    q.pop_back();
                    return q + ", exactly?";
                }
                return q;
            }
        }
    }
};

class HttpParaphraseClient final : public ParaphraseClient {
  public:
    HttpParaphraseClient(std::string url, std::string credential_env)
        : url_(std::move(url)), credential_env_(std::move(credential_env)) {}

    std::string rewrite(const std::string& system_instruction,
                        const std::string& question) override {
        // split "scheme://host[:port]/path"
        size_t scheme_end = url_.find("://");
        if (scheme_end == std::string::npos)
            throw std::runtime_error("paraphrase endpoint must be an http(s) URL: " + url_);
        size_t path_start = url_.find('/', scheme_end + 3);
        std::string base = path_start == std::string::npos ? url_ : url_.substr(0, path_start);
        std::string path = path_start == std::string::npos ? "/" : url_.substr(path_start);

        httplib::Client cli(base);
        cli.set_connection_timeout(10);
        cli.set_read_timeout(30);

        httplib::Headers headers;
        if (const char* cred = std::getenv(credential_env_.c_str()); cred && *cred)
            headers.emplace("Authorization", std::string("Bearer ") + cred);

        nlohmann::json body = {{"system", system_instruction}, {"question", question}};
        auto res = cli.Post(path, headers, body.dump(), "application/json");
        if (!res)
            throw std::runtime_error("paraphrase endpoint unreachable: " + url_);
        if (res->status != 200)
            throw std::runtime_error("paraphrase endpoint returned status " +
                                     std::to_string(res->status));
        nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
        if (reply.is_discarded() || !reply.contains("rewrite") || !reply["rewrite"].is_string())
            throw std::runtime_error("paraphrase endpoint returned malformed reply");
        return reply["rewrite"].get<std::string>();
    }

  private:
    std::string url_;
    std::string credential_env_;
};

}  // namespace

std::unique_ptr<ParaphraseClient> make_offline_paraphrase_client() {
    return std::make_unique<OfflineParaphraseClient>();
}

std::unique_ptr<ParaphraseClient> make_http_paraphrase_client(const std::string& url,
                                                              const std::string& credential_env) {
    return std::make_unique<HttpParaphraseClient>(url, credential_env);
}

ReasoningExample paraphrase(const ReasoningExample& ex, ParaphraseClient& client) {
    ReasoningExample out = ex;

    std::vector<std::string> required;
    if (ex.jargon_key) required.push_back(*ex.jargon_key);
    for (const auto& h : ex.table.row_headers)
        if (ex.template_question.find(h) != std::string::npos) required.push_back(h);
    for (const auto& h : ex.table.col_headers)
        if (ex.template_question.find(h) != std::string::npos) required.push_back(h);

    std::string rewritten;
    try {
        rewritten = client.rewrite(kParaphraseSystemInstruction, ex.template_question);
    } catch (const std::exception&) {
        out.paraphrase_rejected = true;
        return out;
    }

    for (const auto& s : required) {
        if (rewritten.find(s) == std::string::npos) {
            out.paraphrase_rejected = true;
            return out;
        }
    }
    out.question = rewritten;
    return out;
}

}  // namespace tabnum
