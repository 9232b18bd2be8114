#pragma once

#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "core.hpp"
#include "equivalence.hpp"
#include "groupring.hpp"
#include "groups.hpp"
#include "polymat.hpp"

namespace gext {

using Json = nlohmann::json;

class ParseError : public InvalidArgument {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& msg)
        : InvalidArgument("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
          line_(line),
          column_(column) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_, column_;
};

/// A named input: a matrix, a single polynomial, a list of polynomials, or a bare word.
struct Value {
    std::variant<MatGRPoly, GRPoly, std::vector<GRPoly>, std::string> data;

    bool is_matrix() const { return std::holds_alternative<MatGRPoly>(data); }
    bool is_poly() const { return std::holds_alternative<GRPoly>(data); }
    bool is_list() const { return std::holds_alternative<std::vector<GRPoly>>(data); }
    bool is_text() const { return std::holds_alternative<std::string>(data); }

    friend bool operator==(const Value& a, const Value& b) { return a.data == b.data; }
};

struct InputDocument {
    GroupSpec spec = GroupSpec::cyclic(1);
    GroupPtr group = trivial_group();
    std::map<std::string, Value> values;
    Json certificate;  // null unless the input carried one
};

// ---- group spec text ----

inline std::string render_spec(const GroupSpec& s) {
    using Kind = GroupSpec::Kind;
    switch (s.kind) {
        case Kind::cyclic: return "cyclic " + std::to_string(s.n) + (s.generator == "g" ? "" : " " + s.generator);
        case Kind::dihedral: return "dihedral " + std::to_string(s.n);
        case Kind::symmetric: return "symmetric " + std::to_string(s.n);
        case Kind::product: {
            std::string out = "product";
            for (std::size_t i = 0; i < s.factors.size(); ++i) out += (i ? " x " : " ") + render_spec(s.factors[i]);
            return out;
        }
        case Kind::explicit_table: {
            std::string out = "table [";
            for (std::size_t i = 0; i < s.table.size(); ++i) {
                out += i ? ", [" : "[";
                for (std::size_t j = 0; j < s.table[i].size(); ++j) out += (j ? ", " : "") + std::to_string(s.table[i][j]);
                out += "]";
            }
            out += "]";
            if (!s.names.empty()) {
                out += " names";
                for (const auto& n : s.names) out += " " + n;
            }
            return out;
        }
    }
    return "";
}

// ---- lexer ----

namespace detail {

struct Token {
    enum class Kind { number, ident, string, punct, newline, end };
    Kind kind = Kind::end;
    std::string text;
    std::size_t line = 1, column = 1;
};

inline std::vector<Token> tokenize(const std::string& src, std::size_t line0 = 1, std::size_t col0 = 1) {
    std::vector<Token> out;
    std::size_t line = line0, col = col0, i = 0;
    int depth = 0;
    auto push = [&](Token::Kind k, std::string t, std::size_t l, std::size_t c) { out.push_back({k, std::move(t), l, c}); };
    while (i < src.size()) {
        const char ch = src[i];
        if (ch == '#') {
            while (i < src.size() && src[i] != '\n') ++i, ++col;
            continue;
        }
        if (ch == '\n') {
            if (depth == 0) push(Token::Kind::newline, "\n", line, col);
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i, ++col;
            continue;
        }
        const std::size_t l = line, c = col;
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            push(Token::Kind::number, src.substr(i, j - i), l, c);
            col += j - i;
            i = j;
        } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            push(Token::Kind::ident, src.substr(i, j - i), l, c);
            col += j - i;
            i = j;
        } else if (ch == '"') {
            std::size_t j = i + 1;
            while (j < src.size() && src[j] != '"' && src[j] != '\n') ++j;
            if (j >= src.size() || src[j] != '"') throw ParseError(l, c, "unterminated string");
            push(Token::Kind::string, src.substr(i + 1, j - i - 1), l, c);
            col += j + 1 - i;
            i = j + 1;
        } else if (std::string("()[],+-*^=;").find(ch) != std::string::npos) {
            if (ch == '(' || ch == '[') ++depth;
            if (ch == ')' || ch == ']') depth = std::max(0, depth - 1);
            push(Token::Kind::punct, std::string(1, ch), l, c);
            ++i, ++col;
        } else {
            throw ParseError(l, c, std::string("unexpected character '") + ch + "'");
        }
    }
    push(Token::Kind::end, "", line, col);
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> toks, GroupPtr g) : toks_(std::move(toks)), group_(std::move(g)) {}

    void set_group(GroupPtr g) { group_ = std::move(g); }
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool at_punct(const std::string& p, std::size_t k = 0) const {
        return peek(k).kind == Token::Kind::punct && peek(k).text == p;
    }
    bool at_end() const { return peek().kind == Token::Kind::end; }
    Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
    [[noreturn]] void fail(const Token& t, const std::string& msg) const { throw ParseError(t.line, t.column, msg); }
    [[noreturn]] void fail(const std::string& msg) const { fail(peek(), msg); }
    void expect(const std::string& p) {
        if (!at_punct(p)) fail("expected '" + p + "'" + (at_end() ? " before end of input" : " but found '" + peek().text + "'"));
        ++pos_;
    }
    void skip_separators() {
        while (peek().kind == Token::Kind::newline || at_punct(";")) ++pos_;
    }

    std::size_t parse_size(const std::string& what) {
        const Token t = next();
        if (t.kind != Token::Kind::number) fail(t, "expected " + what);
        return std::stoul(t.text);
    }

    GroupSpec parse_spec(bool allow_product = true) {
        const Token t = next();
        if (t.kind != Token::Kind::ident) fail(t, "expected a group kind");
        if (t.text == "cyclic") {
            std::size_t n = parse_size("the order of the cyclic group");
            std::string gen = "g";
            if (peek().kind == Token::Kind::ident && peek().text != "x") gen = next().text;
            return GroupSpec::cyclic(n, gen);
        }
        if (t.text == "dihedral") return GroupSpec::dihedral(parse_size("the number of sides"));
        if (t.text == "symmetric") return GroupSpec::symmetric(parse_size("the permutation degree"));
        if (t.text == "product" && allow_product) {
            std::vector<GroupSpec> parts{parse_spec(false)};
            while (peek().kind == Token::Kind::ident && peek().text == "x") {
                next();
                parts.push_back(parse_spec(false));
            }
            return GroupSpec::product(parts);
        }
        if (t.text == "table") {
            std::vector<std::vector<std::size_t>> table;
            expect("[");
            do {
                expect("[");
                std::vector<std::size_t> row;
                do row.push_back(parse_size("a table entry"));
                while (at_punct(",") && (next(), true));
                expect("]");
                table.push_back(row);
            } while (at_punct(",") && (next(), true));
            expect("]");
            std::vector<std::string> names;
            if (peek().kind == Token::Kind::ident && peek().text == "names") {
                next();
                while (peek().kind == Token::Kind::ident) names.push_back(next().text);
            }
            return GroupSpec::explicit_table(table, names);
        }
        fail(t, "unknown group kind '" + t.text + "'");
    }

    // value := matrix | list | expr | word
    Value parse_value() {
        if (at_punct("[")) {
            if (at_punct("[", 1)) return Value{parse_matrix()};
            return Value{parse_list()};
        }
        if (peek().kind == Token::Kind::string) return Value{next().text};
        if (peek().kind == Token::Kind::ident && is_word(peek().text) && value_ends(1)) return Value{next().text};
        return Value{parse_expr()};
    }

    MatGRPoly parse_matrix() {
        const Token open = peek();
        expect("[");
        std::vector<std::vector<GRPoly>> rows;
        do {
            if (!at_punct("[")) fail("expected '[' to start a matrix row");
            rows.push_back(parse_list());
            if (rows.back().size() != rows.front().size())
                fail("row " + std::to_string(rows.size()) + " has " + std::to_string(rows.back().size()) +
                     " entries, expected " + std::to_string(rows.front().size()));
        } while (at_punct(",") && (next(), true));
        expect("]");
        if (rows.empty() || rows.front().empty()) fail(open, "empty matrix");
        return MatGRPoly::from_rows(rows, gr_poly_zero(group_));
    }

    std::vector<GRPoly> parse_list() {
        expect("[");
        std::vector<GRPoly> out;
        if (at_punct("]")) {
            next();
            return out;
        }
        do out.push_back(parse_expr());
        while (at_punct(",") && (next(), true));
        expect("]");
        return out;
    }

    GRPoly parse_expr() {
        GRPoly acc = parse_term();
        while (at_punct("+") || at_punct("-")) {
            const bool plus = next().text == "+";
            GRPoly rhs = parse_term();
            acc = plus ? acc + rhs : acc - rhs;
        }
        return acc;
    }

private:
    bool is_word(const std::string& s) const {
        return s != "t" && s != "u" && !group_->find_name(s);
    }
    bool value_ends(std::size_t k) const {
        const auto& t = peek(k);
        return t.kind == Token::Kind::end || t.kind == Token::Kind::newline || (t.kind == Token::Kind::punct && (t.text == ";" || t.text == ","));
    }

    GRPoly parse_term() {
        GRPoly acc = parse_unary();
        for (;;) {
            if (at_punct("*")) {
                next();
                acc = acc * parse_unary();
            } else if (cycle_ahead()) {
                acc = acc * parse_unary();
            } else {
                return acc;
            }
        }
    }

    GRPoly parse_unary() {
        if (at_punct("-")) {
            next();
            return -parse_unary();
        }
        if (at_punct("+")) {
            next();
            return parse_unary();
        }
        return parse_power();
    }

    GRPoly parse_power() {
        const Token start = peek();
        GRPoly base = parse_atom();
        if (!at_punct("^")) return base;
        next();
        bool negative = false;
        if (at_punct("-")) {
            next();
            negative = true;
        }
        const Token et = next();
        if (et.kind != Token::Kind::number) fail(et, "expected an exponent");
        const unsigned long e = std::stoul(et.text);
        if (negative) {
            const auto& terms = base.terms();
            if (terms.size() != 1 || terms.begin()->first != 0) fail(start, "negative powers apply only to group elements");
            const GRElem& c = terms.begin()->second;
            std::size_t idx = 0, count = 0;
            for (std::size_t x = 0; x < c.size(); ++x)
                if (sgn(c[x]) != 0) idx = x, ++count;
            if (count != 1 || c[idx] != 1) fail(start, "negative powers apply only to group elements");
            base = gr_poly(GRElem::term(group_, group_->inv(idx)));
        }
        GRPoly out = gr_poly(GRElem::scalar(group_, 1));
        for (unsigned long k = 0; k < e; ++k) out = out * base;
        return out;
    }

    bool cycle_ahead() const {
        if (group_->permutation_degree() == 0 || !at_punct("(")) return false;
        std::size_t k = 1, numbers = 0, digits = 0;
        while (peek(k).kind == Token::Kind::number || (peek(k).kind == Token::Kind::punct && peek(k).text == ",")) {
            if (peek(k).kind == Token::Kind::number) ++numbers, digits = peek(k).text.size();
            ++k;
        }
        if (!(peek(k).kind == Token::Kind::punct && peek(k).text == ")")) return false;
        return numbers >= 2 || (numbers == 1 && digits >= 2);
    }

    std::size_t parse_cycle() {
        const Token open = next();
        std::vector<std::string> numbers;
        while (!at_punct(")")) {
            const Token t = next();
            if (t.kind == Token::Kind::number) numbers.push_back(t.text);
        }
        // "(123)" is compact cycle notation; "(1 2 3)" and "(1,2,3)" list points separately
        std::vector<std::size_t> pts;
        if (numbers.size() == 1)
            for (char ch : numbers.front()) pts.push_back(static_cast<std::size_t>(ch - '0'));
        else
            for (const auto& x : numbers) pts.push_back(std::stoul(x));
        next();
        const std::size_t n = group_->permutation_degree();
        std::vector<std::size_t> images(n);
        for (std::size_t i = 0; i < n; ++i) images[i] = i;
        std::set<std::size_t> seen;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (pts[i] < 1 || pts[i] > n) fail(open, "cycle point " + std::to_string(pts[i]) + " outside 1.." + std::to_string(n));
            if (!seen.insert(pts[i]).second) fail(open, "repeated point in cycle");
            images[pts[i] - 1] = pts[(i + 1) % pts.size()] - 1;
        }
        auto idx = group_->find_permutation(images);
        if (!idx) fail(open, "cycle is not an element of the group");
        return *idx;
    }

    GRPoly parse_atom() {
        const Token t = peek();
        if (cycle_ahead()) {
            std::size_t x = parse_cycle();
            while (cycle_ahead()) x = group_->mul(x, parse_cycle());
            return gr_poly(GRElem::term(group_, x));
        }
        if (t.kind == Token::Kind::punct && t.text == "(") {
            next();
            GRPoly inner = parse_expr();
            expect(")");
            return inner;
        }
        if (t.kind == Token::Kind::number) {
            next();
            return gr_poly(GRElem::scalar(group_, Integer(t.text)));
        }
        if (t.kind == Token::Kind::ident) {
            next();
            if (t.text == "t") return gr_poly(GRElem::scalar(group_, 1), 1);
            if (auto x = group_->find_name(t.text)) return gr_poly(GRElem::term(group_, *x));
            if (t.text == "u") return gr_poly(GRElem::sum_of_group(group_));
            fail(t, "unknown generator '" + t.text + "' for group " + render_spec(group_->spec()));
        }
        if (t.kind == Token::Kind::end) fail(t, "unexpected end of input");
        fail(t, "unexpected '" + t.text + "'");
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    GroupPtr group_;
};

}  // namespace detail

// ---- parsing ----

inline GroupSpec parse_spec(const std::string& text) {
    detail::Parser p(detail::tokenize(text), trivial_group());
    GroupSpec s = p.parse_spec();
    p.skip_separators();
    if (!p.at_end()) p.fail("unexpected '" + p.peek().text + "' after the group description");
    return s;
}

inline GroupPtr parse_group(const std::string& text) { return make_group(parse_spec(text)); }

/// Parses a value (matrix, list, polynomial, or word) over the given group.
inline Value parse_value(const std::string& text, const GroupPtr& g) {
    detail::Parser p(detail::tokenize(text), g);
    p.skip_separators();
    Value v = p.parse_value();
    p.skip_separators();
    if (!p.at_end()) p.fail("unexpected '" + p.peek().text + "'");
    return v;
}

inline MatGRPoly parse_matrix(const std::string& text, const GroupPtr& g) {
    Value v = parse_value(text, g);
    if (v.is_matrix()) return std::get<MatGRPoly>(v.data);
    if (v.is_poly()) return MatGRPoly::from_rows({{std::get<GRPoly>(v.data)}}, gr_poly_zero(g));
    throw InvalidArgument("expected a matrix: " + text);
}

inline GRPoly parse_poly(const std::string& text, const GroupPtr& g) {
    Value v = parse_value(text, g);
    if (!v.is_poly()) throw InvalidArgument("expected a polynomial: " + text);
    return std::get<GRPoly>(v.data);
}

namespace detail {

inline InputDocument parse_text_document(const std::string& text) {
    InputDocument doc;
    Parser p(tokenize(text), doc.group);
    bool have_group = false;
    p.skip_separators();
    while (!p.at_end()) {
        const Token head = p.next();
        if (head.kind != Token::Kind::ident) p.fail(head, "expected a statement");
        if (head.text == "group" && !p.at_punct("=")) {
            if (have_group) p.fail(head, "group declared twice");
            if (!doc.values.empty()) p.fail(head, "group must be declared before any value");
            doc.spec = p.parse_spec();
            try {
                doc.group = make_group(doc.spec);
            } catch (const InvalidArgument& e) {
                p.fail(head, e.what());
            }
            p.set_group(doc.group);
            have_group = true;
        } else {
            p.expect("=");
            if (doc.values.count(head.text)) p.fail(head, "'" + head.text + "' assigned twice");
            doc.values.emplace(head.text, p.parse_value());
        }
        if (!p.at_end() && p.peek().kind != Token::Kind::newline && !p.at_punct(";"))
            p.fail("expected ';' or a new line after the statement");
        p.skip_separators();
    }
    return doc;
}

inline Value json_value(const Json& j, const GroupPtr& g, const std::string& name) {
    if (j.is_number_integer()) return Value{gr_poly(GRElem::scalar(g, Integer(j.dump())))};
    if (j.is_string()) {
        try {
            return parse_value(j.get<std::string>(), g);
        } catch (const ParseError& e) {
            throw InvalidArgument("value '" + name + "': " + e.what());
        }
    }
    if (j.is_array()) {
        bool nested = !j.empty() && j.front().is_array();
        auto entry = [&](const Json& x) -> GRPoly {
            if (x.is_number_integer()) return gr_poly(GRElem::scalar(g, Integer(x.dump())));
            if (x.is_string()) return parse_poly(x.get<std::string>(), g);
            throw InvalidArgument("value '" + name + "': entries must be integers or expression strings");
        };
        if (!nested) {
            std::vector<GRPoly> out;
            for (const auto& x : j) out.push_back(entry(x));
            return Value{out};
        }
        std::vector<std::vector<GRPoly>> rows;
        for (const auto& row : j) {
            if (!row.is_array()) throw InvalidArgument("value '" + name + "': mixed rows");
            std::vector<GRPoly> r;
            for (const auto& x : row) r.push_back(entry(x));
            if (!rows.empty() && r.size() != rows.front().size()) throw InvalidArgument("value '" + name + "': ragged rows");
            rows.push_back(r);
        }
        if (rows.front().empty()) throw InvalidArgument("value '" + name + "': empty matrix");
        return Value{MatGRPoly::from_rows(rows, gr_poly_zero(g))};
    }
    if (j.is_boolean()) return Value{std::string(j.get<bool>() ? "true" : "false")};
    throw InvalidArgument("value '" + name + "' has an unsupported JSON type");
}

inline GroupSpec json_spec(const Json& j) {
    if (j.is_string()) return parse_spec(j.get<std::string>());
    if (!j.is_object() || !j.contains("kind")) throw InvalidArgument("group must be a string or an object with a kind");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "cyclic") return GroupSpec::cyclic(j.at("n").get<std::size_t>(), j.value("generator", std::string("g")));
    if (kind == "dihedral") return GroupSpec::dihedral(j.at("n").get<std::size_t>());
    if (kind == "symmetric") return GroupSpec::symmetric(j.at("n").get<std::size_t>());
    if (kind == "product") {
        std::vector<GroupSpec> parts;
        for (const auto& f : j.at("factors")) parts.push_back(json_spec(f));
        return GroupSpec::product(parts);
    }
    if (kind == "table")
        return GroupSpec::explicit_table(j.at("table").get<std::vector<std::vector<std::size_t>>>(),
                                         j.value("names", std::vector<std::string>{}));
    throw InvalidArgument("unknown group kind '" + kind + "'");
}

inline InputDocument parse_json_document(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InvalidArgument(std::string("malformed JSON: ") + e.what());
    }
    // a report emitted by the CLI: take its echoed input and its certificates
    if (j.contains("canonical")) {
        const Json& c = j.at("canonical");
        Json in = c.value("input", Json::object());
        if (c.contains("certificates") && !c.at("certificates").empty()) in["certificate"] = c.at("certificates");
        j = in;
    }
    InputDocument doc;
    if (j.contains("group")) {
        doc.spec = json_spec(j.at("group"));
        doc.group = make_group(doc.spec);
    }
    for (const char* key : {"values", "matrices", "params"}) {
        if (!j.contains(key)) continue;
        for (const auto& [name, v] : j.at(key).items()) {
            if (doc.values.count(name)) throw InvalidArgument("'" + name + "' assigned twice");
            doc.values.emplace(name, json_value(v, doc.group, name));
        }
    }
    if (j.contains("certificate")) doc.certificate = j.at("certificate");
    return doc;
}

}  // namespace detail

/// Text documents are "group ...; NAME = value" statements; JSON documents use group/values/certificate keys.
inline InputDocument parse_input(const std::string& text) {
    std::size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i < text.size() && text[i] == '{') return detail::parse_json_document(text);
    return detail::parse_text_document(text);
}

// ---- rendering ----

inline std::string render_value(const Value& v) {
    if (v.is_matrix()) return to_string(std::get<MatGRPoly>(v.data));
    if (v.is_poly()) return to_string(std::get<GRPoly>(v.data));
    if (v.is_list()) {
        std::string s = "[";
        const auto& l = std::get<std::vector<GRPoly>>(v.data);
        for (std::size_t i = 0; i < l.size(); ++i) s += (i ? ", " : "") + to_string(l[i]);
        return s + "]";
    }
    return std::get<std::string>(v.data);
}

inline std::string render(const InputDocument& doc) {
    std::string out = "group " + render_spec(doc.spec) + "\n";
    for (const auto& [name, v] : doc.values) out += name + " = " + render_value(v) + "\n";
    return out;
}

inline bool operator==(const InputDocument& a, const InputDocument& b) {
    return render_spec(a.spec) == render_spec(b.spec) && a.values == b.values;
}

// ---- certificates ----

inline Json chain_to_json(const MoveChain& c, const GroupSpec& spec) {
    Json moves = Json::array();
    for (const auto& mv : c.moves) {
        Json m{{"side", to_string(mv.side)}, {"i", mv.i}, {"j", mv.j}, {"r", to_string(mv.r)}, {"inverse", mv.inverse}};
        m["stabilize_to"] = mv.stabilize_to ? Json(*mv.stabilize_to) : Json(nullptr);
        moves.push_back(m);
    }
    return Json{{"type", "chain"},
                {"group", render_spec(spec)},
                {"mode", to_string(c.mode)},
                {"start", to_string(c.start)},
                {"end", to_string(c.end)},
                {"moves", moves}};
}

inline std::string require_type(const Json& j, const std::string& type) {
    if (!j.is_object() || j.value("type", std::string()) != type)
        throw InvalidArgument("certificate is not of type '" + type + "'");
    return type;
}

inline std::pair<GroupPtr, MoveChain> chain_from_json(const Json& j) {
    require_type(j, "chain");
    const GroupPtr g = parse_group(j.at("group").get<std::string>());
    MoveChain c;
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "positive") c.mode = ChainMode::positive;
    else if (mode == "el_only") c.mode = ChainMode::el_only;
    else throw InvalidArgument("unknown chain mode '" + mode + "'");
    c.start = parse_matrix(j.at("start").get<std::string>(), g);
    c.end = parse_matrix(j.at("end").get<std::string>(), g);
    for (const auto& m : j.at("moves")) {
        ElementaryMove mv;
        const std::string side = m.at("side").get<std::string>();
        if (side != "left" && side != "right") throw InvalidArgument("unknown move side '" + side + "'");
        mv.side = side == "left" ? Side::left : Side::right;
        mv.i = m.at("i").get<std::size_t>();
        mv.j = m.at("j").get<std::size_t>();
        mv.r = parse_poly(m.at("r").get<std::string>(), g);
        mv.inverse = m.value("inverse", false);
        if (m.contains("stabilize_to") && !m.at("stabilize_to").is_null()) mv.stabilize_to = m.at("stabilize_to").get<std::size_t>();
        c.moves.push_back(std::move(mv));
    }
    return {g, c};
}

inline Semiring semiring_from_string(const std::string& s) {
    for (Semiring x : {Semiring::zplus_g, Semiring::z_g, Semiring::zplus_g_t, Semiring::z_g_t})
        if (to_string(x) == s) return x;
    throw InvalidArgument("unknown semiring '" + s + "'");
}

inline Json sse_to_json(const MatGRPoly& a, const MatGRPoly& b, const SSEWitness& w, const GroupSpec& spec) {
    Json steps = Json::array();
    for (const auto& [r, s] : w.steps) steps.push_back(Json{{"r", to_string(r)}, {"s", to_string(s)}});
    return Json{{"type", "sse"}, {"group", render_spec(spec)}, {"semiring", to_string(w.semiring)},
                {"a", to_string(a)}, {"b", to_string(b)}, {"steps", steps}};
}

struct SSECertificate {
    GroupPtr group;
    MatGRPoly a, b;
    SSEWitness witness;
};

inline SSECertificate sse_from_json(const Json& j) {
    require_type(j, "sse");
    SSECertificate c;
    c.group = parse_group(j.at("group").get<std::string>());
    c.a = parse_matrix(j.at("a").get<std::string>(), c.group);
    c.b = parse_matrix(j.at("b").get<std::string>(), c.group);
    c.witness.semiring = semiring_from_string(j.at("semiring").get<std::string>());
    for (const auto& st : j.at("steps"))
        c.witness.steps.push_back({parse_matrix(st.at("r").get<std::string>(), c.group), parse_matrix(st.at("s").get<std::string>(), c.group)});
    return c;
}

inline Json se_to_json(const MatGRPoly& a, const MatGRPoly& b, const SEWitness& w, const GroupSpec& spec) {
    return Json{{"type", "se"}, {"group", render_spec(spec)}, {"semiring", to_string(w.semiring)}, {"lag", w.lag},
                {"a", to_string(a)}, {"b", to_string(b)}, {"r", to_string(w.r)}, {"s", to_string(w.s)}};
}

struct SECertificate {
    GroupPtr group;
    MatGRPoly a, b;
    SEWitness witness;
};

inline SECertificate se_from_json(const Json& j) {
    require_type(j, "se");
    SECertificate c;
    c.group = parse_group(j.at("group").get<std::string>());
    c.a = parse_matrix(j.at("a").get<std::string>(), c.group);
    c.b = parse_matrix(j.at("b").get<std::string>(), c.group);
    c.witness.semiring = semiring_from_string(j.at("semiring").get<std::string>());
    c.witness.lag = j.at("lag").get<unsigned long>();
    c.witness.r = parse_matrix(j.at("r").get<std::string>(), c.group);
    c.witness.s = parse_matrix(j.at("s").get<std::string>(), c.group);
    return c;
}

}  // namespace gext
