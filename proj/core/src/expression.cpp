#include "cdmn/expression.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

namespace cdmn {

const Variable* VarScope::find(std::string_view name) const {
    auto it = bindings_.find(name);
    return it == bindings_.end() ? nullptr : &it->second;
}

Variable VarScope::introduce(const std::string& key, const std::string& var_name, SortId sort,
                             int line) {
    if (bindings_.count(key)) {
        throw Error(ErrorCode::DuplicateVariable, line, "'" + key + "' is introduced twice in one table");
    }
    Variable v{next_id_++, var_name, sort};
    bindings_.emplace(key, v);
    order_.push_back(v);
    return v;
}

bool is_numeric_sort(const Vocabulary& vocab, SortId s) { return vocab.sort(s).is_numeric(); }

bool sorts_comparable(const Vocabulary& vocab, SortId a, SortId b) {
    if (a == b) return true;
    return is_numeric_sort(vocab, a) && is_numeric_sort(vocab, b);
}

namespace {

// ===========================================================================
// Tokens

struct Token {
    enum class Kind { Word, Number, Op, End };
    Kind kind = Kind::End;
    std::string text;
};

bool is_op_char(char c) {
    return c == '+' || c == '-' || c == '*' || c == '/' || c == '(' || c == ')' || c == ',' ||
           c == '<' || c == '>' || c == '=' || c == '!' || c == '[' || c == ']' || c == '~';
}

// Multi-byte operator spellings, mapped to their ASCII form.
struct Utf8Op {
    std::string_view bytes;
    std::string_view ascii;
};
constexpr Utf8Op kUtf8Ops[] = {
    {"\xE2\x89\xA4", "<="}, {"\xE2\x89\xA5", ">="}, {"\xE2\x89\xA0", "!="},
    {"\xC3\x97", "*"},      {"\xC3\xB7", "/"},      {"\xE2\x88\x92", "-"},
};

std::optional<Utf8Op> utf8_op_at(std::string_view s, std::size_t i) {
    for (const Utf8Op& op : kUtf8Ops) {
        if (s.substr(i, op.bytes.size()) == op.bytes) return op;
    }
    return std::nullopt;
}

std::vector<Token> tokenize(std::string_view s, int line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        if (auto op = utf8_op_at(s, i)) {
            out.push_back({Token::Kind::Op, std::string(op->ascii)});
            i += op->bytes.size();
            continue;
        }
        if (is_op_char(static_cast<char>(c))) {
            std::string two(s.substr(i, 2));
            if (two == "<=" || two == ">=" || two == "!=" || two == "~=" || two == "==" || two == "=<" ||
                two == "=>") {
                if (two == "~=") two = "!=";
                if (two == "==") two = "=";
                if (two == "=<") two = "<=";
                if (two == "=>") two = ">=";
                out.push_back({Token::Kind::Op, two});
                i += 2;
            } else if (two == "<>") {
                out.push_back({Token::Kind::Op, "!="});
                i += 2;
            } else {
                if (c == '!' || c == '~') {
                    throw Error(ErrorCode::MalformedExpression, line,
                                "stray '" + std::string(1, static_cast<char>(c)) + "' in '" +
                                    std::string(s) + "'");
                }
                out.push_back({Token::Kind::Op, std::string(1, static_cast<char>(c))});
                ++i;
            }
            continue;
        }
        std::size_t start = i;
        if (std::isdigit(c)) {
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            if (i + 1 < s.size() && s[i] == '.' && std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
                ++i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            }
            bool word_follows = i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) &&
                                !is_op_char(s[i]) && !utf8_op_at(s, i) && s[i] != '.';
            if (!word_follows) {
                out.push_back({Token::Kind::Number, std::string(s.substr(start, i - start))});
                continue;
            }
        }
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && !is_op_char(s[i]) &&
               !utf8_op_at(s, i)) {
            ++i;
        }
        out.push_back({Token::Kind::Word, std::string(s.substr(start, i - start))});
    }
    out.push_back({Token::Kind::End, ""});
    return out;
}

// ===========================================================================
// Expr construction

ExprPtr number_expr(const Rational& r) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Number;
    e->value = Value(r);
    e->sort = r.is_integer() ? Vocabulary::kInt : Vocabulary::kFloat;
    return e;
}

ExprPtr literal_expr(Value v, SortId sort) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Literal;
    e->value = std::move(v);
    e->sort = sort;
    return e;
}

ExprPtr variable_expr(const Variable& v) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Variable;
    e->var = v;
    e->sort = v.sort;
    return e;
}

ExprPtr apply_expr(const Vocabulary& vocab, SymbolId s, std::vector<ExprPtr> args) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Apply;
    e->symbol = s;
    e->sort = vocab.symbol(s).result_sort;
    e->args = std::move(args);
    return e;
}

ExprPtr arith_expr(const Vocabulary& vocab, ArithOp op, ExprPtr lhs, ExprPtr rhs, int line) {
    if (!is_numeric_sort(vocab, lhs->sort) || !is_numeric_sort(vocab, rhs->sort)) {
        throw Error(ErrorCode::SortMismatch, line,
                    "arithmetic '" + std::string(to_string(op)) + "' on a non-numeric operand");
    }
    bool both_int = vocab.sort(lhs->sort).base == BaseType::Int &&
                    vocab.sort(rhs->sort).base == BaseType::Int;
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Arith;
    e->op = op;
    e->sort = both_int ? Vocabulary::kInt : Vocabulary::kFloat;
    e->args = {std::move(lhs), std::move(rhs)};
    return e;
}

// Canonical text used to deduplicate parses.
std::string key_of(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Number:
        case Expr::Kind::Literal: return e.value.to_string();
        case Expr::Kind::Variable: return "$" + std::to_string(e.var.id);
        case Expr::Kind::Apply: {
            std::string s = "@" + std::to_string(index(e.symbol)) + "(";
            for (const ExprPtr& a : e.args) s += key_of(*a) + ",";
            return s + ")";
        }
        case Expr::Kind::Arith:
            return "(" + key_of(*e.args[0]) + std::string(to_string(e.op)) + key_of(*e.args[1]) + ")";
    }
    return {};
}

std::string join(const std::vector<std::string>& words, std::size_t lo, std::size_t hi) {
    std::string s;
    for (std::size_t i = lo; i < hi; ++i) s += (i == lo ? "" : " ") + words[i];
    return s;
}

// A slot accepts an argument of the same sort, or any numeric argument for a numeric slot.
bool slot_accepts(const Vocabulary& vocab, SortId slot, SortId arg) {
    return sorts_comparable(vocab, slot, arg);
}

// ===========================================================================
// Phrase resolution

class PhraseResolver {
public:
    PhraseResolver(const Vocabulary& vocab, const VarScope& scope, const std::vector<std::string>& words,
                   int line)
        : vocab_(vocab), scope_(scope), words_(words), line_(line) {}

    ExprPtr resolve_all() {
        const auto& found = resolve(0, words_.size());
        if (found.size() == 1) return found.front();
        std::string phrase = join(words_, 0, words_.size());
        if (found.size() > 1) {
            throw Error(ErrorCode::AmbiguousPhrase, line_,
                        "'" + phrase + "' can be read in " + std::to_string(found.size()) + " ways");
        }
        diagnose(phrase);
        return nullptr;  // unreachable
    }

private:
    const std::vector<ExprPtr>& resolve(std::size_t lo, std::size_t hi) {
        auto key = std::make_pair(lo, hi);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        std::vector<ExprPtr> out = resolve_uncached(lo, hi);
        return memo_[key] = std::move(out);
    }

    std::vector<ExprPtr> resolve_uncached(std::size_t lo, std::size_t hi) {
        std::string phrase = join(words_, lo, hi);
        if (const Variable* v = scope_.find(phrase)) return {variable_expr(*v)};
        if (const ElementConstant* c = vocab_.find_element(phrase)) return {literal_expr(c->value, c->sort)};
        if (auto b = parse_boolean_literal(phrase)) return {literal_expr(*b, Vocabulary::kBool)};
        if (auto s = vocab_.find_nullary(phrase)) return {apply_expr(vocab_, *s, {})};
        if (vocab_.find_sort(phrase)) return {};  // unbound sort name
        if (hi - lo == 1) {
            if (auto r = Rational::parse(phrase)) return {number_expr(*r)};
        }
        std::vector<ExprPtr> out;
        std::set<std::string> seen;
        for (std::size_t s = 0; s < vocab_.symbols().size(); ++s) {
            const SymbolDecl& decl = vocab_.symbols()[s];
            if (decl.arity() == 0) continue;
            std::vector<ExprPtr> args;
            match(decl, 0, lo, hi, args, [&] {
                ExprPtr e = apply_expr(vocab_, SymbolId{static_cast<std::uint32_t>(s)}, args);
                if (seen.insert(key_of(*e)).second) out.push_back(e);
            });
        }
        return out;
    }

    void match(const SymbolDecl& decl, std::size_t part, std::size_t wi, std::size_t hi,
               std::vector<ExprPtr>& args, const std::function<void()>& done) {
        if (part == decl.pattern.size()) {
            if (wi == hi) done();
            return;
        }
        if (wi >= hi) return;
        const PatternPart& p = decl.pattern[part];
        if (!p.is_slot) {
            if (words_[wi] == p.word) match(decl, part + 1, wi + 1, hi, args, done);
            return;
        }
        // leave at least one word for each remaining pattern part
        std::size_t remaining = decl.pattern.size() - part - 1;
        for (std::size_t e = wi + 1; e + remaining <= hi; ++e) {
            for (const ExprPtr& arg : resolve(wi, e)) {
                if (!slot_accepts(vocab_, p.sort, arg->sort)) continue;
                args.push_back(arg);
                match(decl, part + 1, e, hi, args, done);
                args.pop_back();
            }
        }
    }

    // Loose match: literal words must agree, slots swallow any non-empty span.
    bool loose_match(const SymbolDecl& decl, std::size_t part, std::size_t wi,
                     std::vector<std::pair<std::size_t, std::size_t>>& spans) {
        if (part == decl.pattern.size()) return wi == words_.size();
        if (wi >= words_.size()) return false;
        const PatternPart& p = decl.pattern[part];
        if (!p.is_slot) return words_[wi] == p.word && loose_match(decl, part + 1, wi + 1, spans);
        for (std::size_t e = wi + 1; e <= words_.size(); ++e) {
            spans.emplace_back(wi, e);
            if (loose_match(decl, part + 1, e, spans)) return true;
            spans.pop_back();
        }
        return false;
    }

    [[noreturn]] void diagnose(const std::string& phrase) {
        if (vocab_.find_sort(phrase)) {
            throw Error(ErrorCode::NonIntroducedVariableUse, line_,
                        "type '" + phrase + "' is used but no preceding column introduces it");
        }
        for (const SymbolDecl& decl : vocab_.symbols()) {
            if (decl.arity() == 0) continue;
            std::vector<std::pair<std::size_t, std::size_t>> spans;
            if (!loose_match(decl, 0, 0, spans)) continue;
            for (std::size_t k = 0; k < spans.size(); ++k) {
                auto [lo, hi] = spans[k];
                const auto& found = resolve(lo, hi);
                std::string arg = join(words_, lo, hi);
                if (found.empty()) {
                    std::vector<std::string> sub(words_.begin() + static_cast<long>(lo),
                                                 words_.begin() + static_cast<long>(hi));
                    if (std::find(sub.begin(), sub.end(), "and") != sub.end()) {
                        throw Error(ErrorCode::ArityMismatch, line_,
                                    "'" + decl.name + "' takes " + std::to_string(decl.arity()) +
                                        " argument(s) but '" + phrase + "' supplies more");
                    }
                    throw Error(ErrorCode::NonIntroducedVariableUse, line_,
                                "'" + arg + "' in '" + phrase +
                                    "' is neither a known name nor introduced by a preceding column");
                }
                bool any_fits = std::any_of(found.begin(), found.end(), [&](const ExprPtr& e) {
                    return slot_accepts(vocab_, decl.arg_sorts[k], e->sort);
                });
                if (!any_fits) {
                    throw Error(ErrorCode::SortMismatch, line_,
                                "'" + arg + "' does not fit argument " + std::to_string(k + 1) + " of '" +
                                    decl.name + "' (expected " + vocab_.sort(decl.arg_sorts[k]).name + ")");
                }
            }
        }
        throw Error(ErrorCode::UnknownName, line_, "unknown name '" + phrase + "'");
    }

    const Vocabulary& vocab_;
    const VarScope& scope_;
    const std::vector<std::string>& words_;
    int line_;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<ExprPtr>> memo_;
};

// ===========================================================================
// Arithmetic parser

class Parser {
public:
    Parser(std::string_view text, const Vocabulary& vocab, const VarScope& scope, int line)
        : text_(text), tokens_(tokenize(text, line)), vocab_(vocab), scope_(scope), line_(line) {}

    ExprPtr parse_full() {
        if (peek().kind == Token::Kind::End) {
            throw Error(ErrorCode::MalformedExpression, line_, "empty expression");
        }
        ExprPtr e = parse_sum();
        if (peek().kind != Token::Kind::End) {
            throw Error(ErrorCode::MalformedExpression, line_,
                        "unexpected '" + peek().text + "' in '" + std::string(text_) + "'");
        }
        return e;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    bool at_op(std::string_view op) const {
        return peek().kind == Token::Kind::Op && peek().text == op;
    }

    ExprPtr parse_sum() {
        ExprPtr lhs = parse_product();
        while (at_op("+") || at_op("-")) {
            ArithOp op = at_op("+") ? ArithOp::Add : ArithOp::Sub;
            ++pos_;
            lhs = arith_expr(vocab_, op, lhs, parse_product(), line_);
        }
        return lhs;
    }

    ExprPtr parse_product() {
        ExprPtr lhs = parse_unary();
        while (at_op("*") || at_op("/")) {
            ArithOp op = at_op("*") ? ArithOp::Mul : ArithOp::Div;
            ++pos_;
            lhs = arith_expr(vocab_, op, lhs, parse_unary(), line_);
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        if (at_op("-")) {
            ++pos_;
            ExprPtr inner = parse_unary();
            if (inner->kind == Expr::Kind::Number) return number_expr(-inner->value.number());
            return arith_expr(vocab_, ArithOp::Sub, number_expr(Rational(0)), inner, line_);
        }
        if (at_op("+")) {
            ++pos_;
            return parse_unary();
        }
        return parse_primary();
    }

    ExprPtr parse_primary() {
        const Token& t = peek();
        if (t.kind == Token::Kind::Number) {
            ++pos_;
            auto r = Rational::parse(t.text);
            if (!r) throw Error(ErrorCode::MalformedExpression, line_, "bad number '" + t.text + "'");
            return number_expr(*r);
        }
        if (at_op("(")) {
            ++pos_;
            ExprPtr e = parse_sum();
            if (!at_op(")")) {
                throw Error(ErrorCode::MalformedExpression, line_,
                            "missing ')' in '" + std::string(text_) + "'");
            }
            ++pos_;
            return e;
        }
        if (t.kind == Token::Kind::Word) {
            std::vector<std::string> words;
            while (peek().kind == Token::Kind::Word) words.push_back(tokens_[pos_++].text);
            PhraseResolver resolver(vocab_, scope_, words, line_);
            return resolver.resolve_all();
        }
        throw Error(ErrorCode::MalformedExpression, line_,
                    (t.kind == Token::Kind::End ? std::string("expression ends early")
                                                : "unexpected '" + t.text + "'") +
                        " in '" + std::string(text_) + "'");
    }

    std::string_view text_;
    std::vector<Token> tokens_;
    const Vocabulary& vocab_;
    const VarScope& scope_;
    int line_;
    std::size_t pos_ = 0;
};

std::string bare_variable_name(const std::string& sort_name) {
    std::string out = "x_";
    for (char c : sort_name) out += (c == ' ' ? '_' : c);
    return out;
}

bool is_identifier(const std::string& s) {
    if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c >= 0x80;
    });
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Splits at commas outside parentheses/brackets.
std::vector<std::string> split_top_level(std::string_view text) {
    std::vector<std::string> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(trim(text.substr(start, i - start)));
            start = i + 1;
        }
    }
    out.push_back(trim(text.substr(start)));
    return out;
}

std::optional<CmpOp> leading_comparison(std::string_view text, std::size_t& len) {
    static const std::pair<std::string_view, CmpOp> ops[] = {
        {"\xE2\x89\xA4", CmpOp::Le}, {"\xE2\x89\xA5", CmpOp::Ge}, {"\xE2\x89\xA0", CmpOp::Ne},
        {"<=", CmpOp::Le},           {">=", CmpOp::Ge},           {"!=", CmpOp::Ne},
        {"~=", CmpOp::Ne},           {"<>", CmpOp::Ne},           {"==", CmpOp::Eq},
        {"=<", CmpOp::Le},           {"<", CmpOp::Lt},            {">", CmpOp::Gt},
        {"=", CmpOp::Eq},
    };
    for (const auto& [spelling, op] : ops) {
        if (text.substr(0, spelling.size()) == spelling) {
            len = spelling.size();
            return op;
        }
    }
    return std::nullopt;
}

// True when `text` opens with a bracket that closes only at its very end.
bool wrapped_in_parens(std::string_view text) {
    if (text.size() < 2 || text.front() != '(' || text.back() != ')') return false;
    int depth = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '(') ++depth;
        if (text[i] == ')') --depth;
        if (depth == 0 && i + 1 < text.size()) return false;
    }
    return true;
}

}  // namespace

// ===========================================================================
// Public API

ExprPtr parse_expression(std::string_view text, const Vocabulary& vocab, const VarScope& scope, int line) {
    return Parser(text, vocab, scope, line).parse_full();
}

HeaderExpr parse_header(std::string_view text, const Vocabulary& vocab, VarScope& scope, ColumnRole role,
                        int line) {
    std::string t = trim(text);
    HeaderExpr h;

    auto check_fresh_name = [&](const std::string& name) {
        if (vocab.find_element(name) || vocab.find_symbol(name) || vocab.find_sort(name) ||
            parse_boolean_literal(name)) {
            throw Error(ErrorCode::DuplicateVariable, line,
                        "variable name '" + name + "' clashes with a declared name");
        }
    };

    // `Type called name`
    std::size_t called = t.rfind(" called ");
    if (called != std::string::npos) {
        std::string sort_name = trim(t.substr(0, called));
        std::string var_name = trim(t.substr(called + 8));
        if (auto sort = vocab.find_sort(sort_name); sort && is_identifier(var_name)) {
            if (role == ColumnRole::Output) {
                throw Error(ErrorCode::VariableInOutput, line,
                            "output column '" + t + "' introduces a variable");
            }
            check_fresh_name(var_name);
            h.kind = HeaderExpr::Kind::CalledVar;
            h.introduced = scope.introduce(var_name, var_name, *sort, line);
            h.expr = variable_expr(*h.introduced);
            return h;
        }
    }

    // bare type
    if (auto sort = vocab.find_sort(t); sort && !scope.find(t)) {
        if (role == ColumnRole::Output) {
            throw Error(ErrorCode::VariableInOutput, line, "output column '" + t + "' introduces a variable");
        }
        h.kind = HeaderExpr::Kind::BareType;
        h.introduced = scope.introduce(t, bare_variable_name(t), *sort, line);
        h.expr = variable_expr(*h.introduced);
        return h;
    }

    h.expr = parse_expression(t, vocab, scope, line);
    switch (h.expr->kind) {
        case Expr::Kind::Variable: h.kind = HeaderExpr::Kind::VariableRef; break;
        case Expr::Kind::Number:
        case Expr::Kind::Literal: h.kind = HeaderExpr::Kind::Constant; break;
        case Expr::Kind::Apply:
            h.kind = h.expr->args.empty() ? HeaderExpr::Kind::Constant
                                          : HeaderExpr::Kind::FunctionApplication;
            break;
        case Expr::Kind::Arith: h.kind = HeaderExpr::Kind::Arithmetic; break;
    }
    return h;
}

CellEntry parse_cell(std::string_view text, const Vocabulary& vocab, const VarScope& scope, int line) {
    std::string t = trim(text);
    CellEntry c;
    if (is_dash_cell(t)) return c;

    std::size_t len = 0;
    if (auto op = leading_comparison(t, len)) {
        c.kind = CellEntry::Kind::Comparison;
        c.op = *op;
        c.items.push_back(parse_expression(std::string_view(t).substr(len), vocab, scope, line));
        return c;
    }

    std::string low = lower(t.substr(0, 4));
    if (low.substr(0, 3) == "not" && t.size() > 3 &&
        (t[3] == '(' || std::isspace(static_cast<unsigned char>(t[3])))) {
        std::string inner = trim(t.substr(3));
        if (wrapped_in_parens(inner)) inner = trim(inner.substr(1, inner.size() - 2));
        c.kind = CellEntry::Kind::Negation;
        for (const std::string& item : split_top_level(inner)) {
            if (item.empty()) throw Error(ErrorCode::EmptyList, line, "empty item in '" + t + "'");
            c.items.push_back(parse_expression(item, vocab, scope, line));
        }
        return c;
    }

    bool bracket_open = t.front() == '[' || t.front() == '(';
    if (bracket_open && t.find("..") != std::string::npos) {
        char close = t.back();
        if (close != ']' && close != ')') {
            throw Error(ErrorCode::MalformedRange, line, "range '" + t + "' is not closed");
        }
        std::string inner = t.substr(1, t.size() - 2);
        std::size_t dots = inner.find("..");
        std::string lo = trim(inner.substr(0, dots));
        std::string hi = trim(inner.substr(dots + 2));
        if (lo.empty() || hi.empty() || hi.find("..") != std::string::npos) {
            throw Error(ErrorCode::MalformedRange, line, "range '" + t + "' needs two bounds");
        }
        c.kind = CellEntry::Kind::Range;
        c.lower_inclusive = t.front() == '[';
        c.upper_inclusive = close == ']';
        c.items.push_back(parse_expression(lo, vocab, scope, line));
        c.items.push_back(parse_expression(hi, vocab, scope, line));
        for (const ExprPtr& b : c.items) {
            if (!is_numeric_sort(vocab, b->sort)) {
                throw Error(ErrorCode::MalformedRange, line, "range '" + t + "' has a non-numeric bound");
            }
        }
        if (c.items[0]->kind == Expr::Kind::Number && c.items[1]->kind == Expr::Kind::Number &&
            c.items[1]->value < c.items[0]->value) {
            throw Error(ErrorCode::MalformedRange, line, "range '" + t + "' has lower bound above upper");
        }
        return c;
    }

    std::vector<std::string> items = split_top_level(t);
    if (items.size() > 1) {
        c.kind = CellEntry::Kind::List;
        for (const std::string& item : items) {
            if (item.empty()) throw Error(ErrorCode::EmptyList, line, "empty item in list '" + t + "'");
            c.items.push_back(parse_expression(item, vocab, scope, line));
        }
        return c;
    }

    c.kind = CellEntry::Kind::Expression;
    c.items.push_back(parse_expression(t, vocab, scope, line));
    return c;
}

Term term_of(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Number:
        case Expr::Kind::Literal: return make_value(e.value, e.sort);
        case Expr::Kind::Variable: return make_variable(e.var);
        case Expr::Kind::Apply: {
            std::vector<Term> args;
            for (const ExprPtr& a : e.args) args.push_back(term_of(*a));
            return make_apply(e.symbol, std::move(args), e.sort);
        }
        case Expr::Kind::Arith: return make_arith(e.op, term_of(*e.args[0]), term_of(*e.args[1]), e.sort);
    }
    return nullptr;
}

Term term_of(const HeaderExpr& header) { return term_of(*header.expr); }

namespace {

Formula equality(const Term& column, const ExprPtr& item, const Vocabulary& vocab, bool negated, int line) {
    if (!sorts_comparable(vocab, column->sort, item->sort)) {
        throw Error(ErrorCode::SortMismatch, line,
                    "cannot compare a " + vocab.sort(column->sort).name + " with a " +
                        vocab.sort(item->sort).name);
    }
    // p(args) = Yes  is the relation atom p(args)
    if (column->kind == TermNode::Kind::Apply && vocab.symbol(column->symbol).is_predicate() &&
        item->kind == Expr::Kind::Literal) {
        Formula atom = make_atom(column->symbol, column->args);
        return item->value.is_yes() != negated ? atom : make_not(atom);
    }
    return make_compare(negated ? CmpOp::Ne : CmpOp::Eq, column, term_of(*item));
}

}  // namespace

Formula formula_of_cell(const CellEntry& entry, const Term& column_term, const Vocabulary& vocab, int line) {
    switch (entry.kind) {
        case CellEntry::Kind::Any: return make_true();
        case CellEntry::Kind::Expression: return equality(column_term, entry.items[0], vocab, false, line);
        case CellEntry::Kind::Comparison: {
            if (entry.op == CmpOp::Eq || entry.op == CmpOp::Ne) {
                return equality(column_term, entry.items[0], vocab, entry.op == CmpOp::Ne, line);
            }
            if (!is_numeric_sort(vocab, column_term->sort) || !is_numeric_sort(vocab, entry.items[0]->sort)) {
                throw Error(ErrorCode::SortMismatch, line,
                            "ordering comparison '" + std::string(to_string(entry.op)) +
                                "' on non-numeric " + vocab.sort(column_term->sort).name);
            }
            return make_compare(entry.op, column_term, term_of(*entry.items[0]));
        }
        case CellEntry::Kind::Negation: {
            if (entry.items.size() == 1) return equality(column_term, entry.items[0], vocab, true, line);
            std::vector<Formula> parts;
            for (const ExprPtr& item : entry.items) parts.push_back(equality(column_term, item, vocab, true, line));
            return make_and(std::move(parts));
        }
        case CellEntry::Kind::List: {
            std::vector<Formula> parts;
            for (const ExprPtr& item : entry.items) parts.push_back(equality(column_term, item, vocab, false, line));
            return make_or(std::move(parts));
        }
        case CellEntry::Kind::Range: {
            if (!is_numeric_sort(vocab, column_term->sort)) {
                throw Error(ErrorCode::SortMismatch, line,
                            "range test on non-numeric " + vocab.sort(column_term->sort).name);
            }
            return make_and({
                make_compare(entry.lower_inclusive ? CmpOp::Ge : CmpOp::Gt, column_term,
                             term_of(*entry.items[0])),
                make_compare(entry.upper_inclusive ? CmpOp::Le : CmpOp::Lt, column_term,
                             term_of(*entry.items[1])),
            });
        }
    }
    return make_true();
}

std::vector<DataColumn> parse_data_header(const RawBlock& block, const Vocabulary& vocab) {
    std::vector<DataColumn> cols;
    VarScope scope;
    const int line = block.header.line;
    for (const std::string& text : block.header.inputs) {
        HeaderExpr h = parse_header(text, vocab, scope, ColumnRole::Input, line);
        if (!h.introduces_variable()) {
            throw Error(ErrorCode::InvalidDataHeader, line,
                        "data input column '" + text + "' must be a type or 'Type called name'");
        }
        cols.push_back(DataColumn{ColumnRole::Input, h, h.introduced->sort, line});
    }
    for (const std::string& text : block.header.outputs) {
        HeaderExpr h = parse_header(text, vocab, scope, ColumnRole::Output, line);
        bool plain_application =
            h.expr->kind == Expr::Kind::Apply &&
            std::all_of(h.expr->args.begin(), h.expr->args.end(),
                        [](const ExprPtr& a) { return a->kind == Expr::Kind::Variable; });
        if (!plain_application) {
            throw Error(ErrorCode::InvalidDataHeader, line,
                        "data output column '" + text + "' must apply a symbol to input variables");
        }
        cols.push_back(DataColumn{ColumnRole::Output, h, h.expr->sort, line});
    }
    return cols;
}

}  // namespace cdmn
