#include "sit/parser.hpp"

#include <cctype>

#include "sit/errors.hpp"

namespace sit {

namespace {

enum class Tok {
    Name, Type, Var, Number, Null,
    Colon, Comma, Caret, Equals, Pipe,
    LBrace, RBrace, LBracket, RBracket, Lt, Gt,
    InfonOpen, InfonClose,
    Supports, NotSupports,
    ArrowBwd, ArrowFwd, ArrowBi,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    int line = 1;
    int col = 1;
};

const char* tok_label(Tok t) {
    switch (t) {
        case Tok::Name: return "a name";
        case Tok::Type: return "a type";
        case Tok::Var: return "a variable";
        case Tok::Number: return "a number";
        case Tok::Null: return "'-'";
        case Tok::Colon: return "':'";
        case Tok::Comma: return "','";
        case Tok::Caret: return "'^'";
        case Tok::Equals: return "'='";
        case Tok::Pipe: return "'|'";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::LBracket: return "'['";
        case Tok::RBracket: return "']'";
        case Tok::Lt: return "'<'";
        case Tok::Gt: return "'>'";
        case Tok::InfonOpen: return "'<<'";
        case Tok::InfonClose: return "'>>'";
        case Tok::Supports: return "'|='";
        case Tok::NotSupports: return "'|/='";
        case Tok::ArrowBwd: return "'<='";
        case Tok::ArrowFwd: return "'=>'";
        case Tok::ArrowBi: return "'<=>'";
        case Tok::End: return "end of statement";
    }
    return "?";
}

bool name_start(unsigned char c) {
    return std::isalnum(c) || c == '_' || c >= 0x80;
}

bool name_char(unsigned char c) { return name_start(c); }

class Lexer {
public:
    Lexer(const std::string& text, int line_base) : text_(text), line_(line_base) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            if (pos_ >= text_.size()) break;
            out.push_back(next());
        }
        out.push_back({Tok::End, "", line_, col_});
        return out;
    }

private:
    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {  // comment to end of line
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (c == '\n') {
                advance();
                ++line_;
                col_ = 1;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    void advance() {
        ++pos_;
        ++col_;
    }

    bool starts_with(const char* s) const {
        return text_.compare(pos_, std::char_traits<char>::length(s), s) == 0;
    }

    Token take(Tok kind, std::size_t n) {
        Token t{kind, text_.substr(pos_, n), line_, col_};
        for (std::size_t i = 0; i < n; ++i) advance();
        return t;
    }

    std::string scan_name() {
        std::size_t start = pos_;
        while (pos_ < text_.size()) {
            unsigned char c = static_cast<unsigned char>(text_[pos_]);
            if (name_char(c)) {
                advance();
            } else if (c == '-' && pos_ + 1 < text_.size() &&
                       name_char(static_cast<unsigned char>(text_[pos_ + 1]))) {
                advance();  // hyphen inside a name
            } else {
                break;
            }
        }
        return text_.substr(start, pos_ - start);
    }

    Token next() {
        int line = line_, col = col_;
        char c = text_[pos_];
        if (starts_with("<=>")) return take(Tok::ArrowBi, 3);
        if (starts_with("<<")) return take(Tok::InfonOpen, 2);
        if (starts_with("<=")) return take(Tok::ArrowBwd, 2);
        if (starts_with(">>")) return take(Tok::InfonClose, 2);
        if (starts_with("|/=")) return take(Tok::NotSupports, 3);
        if (starts_with("|=")) return take(Tok::Supports, 2);
        if (starts_with("=>")) return take(Tok::ArrowFwd, 2);
        switch (c) {
            case '<': return take(Tok::Lt, 1);
            case '>': return take(Tok::Gt, 1);
            case '|': return take(Tok::Pipe, 1);
            case '=': return take(Tok::Equals, 1);
            case ':': return take(Tok::Colon, 1);
            case ',': return take(Tok::Comma, 1);
            case '^': return take(Tok::Caret, 1);
            case '{': return take(Tok::LBrace, 1);
            case '}': return take(Tok::RBrace, 1);
            case '[': return take(Tok::LBracket, 1);
            case ']': return take(Tok::RBracket, 1);
            default: break;
        }
        if (c == '~') {
            advance();
            std::string name = scan_name();
            if (name.empty()) throw ParseError("expected a type name after '~'", line, col);
            return {Tok::Type, name, line, col};
        }
        if (c == '?') {
            advance();
            std::string name = scan_name();
            if (name.empty()) throw ParseError("expected a variable name after '?'", line, col);
            return {Tok::Var, name, line, col};
        }
        if (c == '-') {
            if (pos_ + 1 < text_.size() &&
                name_char(static_cast<unsigned char>(text_[pos_ + 1])))
                throw ParseError("names cannot start with '-'", line, col);
            return take(Tok::Null, 1);
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                advance();
            // a digit run flowing into name characters is a name like 0th
            if (pos_ < text_.size() && name_char(static_cast<unsigned char>(text_[pos_]))) {
                pos_ = start;
                col_ = col;
                return {Tok::Name, scan_name(), line, col};
            }
            return {Tok::Number, text_.substr(start, pos_ - start), line, col};
        }
        if (name_start(static_cast<unsigned char>(c)))
            return {Tok::Name, scan_name(), line, col};
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_;
    int col_ = 1;
};

class Parser {
public:
    Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    Statement parse(bool query_mode) {
        if (query_mode) {
            QueryStmt q{parse_atoms()};
            expect(Tok::End);
            return q;
        }
        Statement s = parse_assert_statement();
        expect(Tok::End);
        return s;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }

    Token eat() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

    Token expect(Tok kind) {
        const Token& t = peek();
        if (t.kind != kind)
            throw ParseError(std::string("expected ") + tok_label(kind) + ", got " +
                                 (t.kind == Tok::End ? "end of statement"
                                                     : "'" + t.text + "'"),
                             t.line, t.col);
        return eat();
    }

    [[noreturn]] void fail(const std::string& msg) {
        const Token& t = peek();
        throw ParseError(msg, t.line, t.col);
    }

    Statement parse_assert_statement() {
        switch (peek().kind) {
            case Tok::Lt: return parse_relation_decl();
            case Tok::Type: return parse_type_decl();
            case Tok::Name: break;
            case Tok::Var:
                fail("variables are only allowed in constraints and queries");
            default:
                fail("expected a declaration, proposition, or constraint");
        }
        // NAME-initial statements
        if (peek(1).kind == Tok::Colon) {
            if (peek(2).kind == Tok::Type) return parse_object_decl();
            if (peek(2).kind == Tok::Name && peek(3).kind == Tok::Colon)
                return parse_constraint();
            pos_ += 2;
            fail("expected a kind (~IND, ~SIT, ...) or a constraint name");
        }
        if (peek(1).kind == Tok::Equals) return parse_binding_decl();
        if (peek(1).kind == Tok::Supports || peek(1).kind == Tok::NotSupports)
            return parse_proposition();
        pos_ += 1;
        fail("expected ':', '=', '|=', or '|/=' after the name");
    }

    Statement parse_object_decl() {
        std::string name = expect(Tok::Name).text;
        expect(Tok::Colon);
        std::string kind = expect(Tok::Type).text;
        return ObjectDecl{name, kind};
    }

    Statement parse_relation_decl() {
        expect(Tok::Lt);
        std::string name = expect(Tok::Name).text;
        expect(Tok::Pipe);
        RelationDecl decl;
        decl.name = name;
        while (true) {
            std::vector<std::string> role{expect(Tok::Type).text};
            while (peek().kind == Tok::Pipe) {
                eat();
                role.push_back(expect(Tok::Type).text);
            }
            decl.roles.push_back(std::move(role));
            if (peek().kind != Tok::Comma) break;
            eat();
        }
        expect(Tok::Gt);
        expect(Tok::LBracket);
        Token min = expect(Tok::Number);
        try {
            decl.minimality = std::stoi(min.text);
        } catch (const std::exception&) {
            throw ParseError("minimality out of range: " + min.text, min.line, min.col);
        }
        expect(Tok::RBracket);
        return decl;
    }

    Statement parse_type_decl() {
        std::string name = expect(Tok::Type).text;
        expect(Tok::Equals);
        expect(Tok::LBracket);
        std::string param = expect(Tok::Name).text;
        expect(Tok::Pipe);
        std::string grounding = expect(Tok::Name).text;
        if (peek().kind == Tok::NotSupports)
            fail("type conditions use |=");
        expect(Tok::Supports);
        std::vector<InfonExpr> conditions = parse_infon_set();
        expect(Tok::RBracket);
        return TypeDecl{name, param, grounding, std::move(conditions)};
    }

    // NAME = ... : infon naming, parameter declaration, or alias
    Statement parse_binding_decl() {
        std::string name = expect(Tok::Name).text;
        expect(Tok::Equals);
        if (peek().kind == Tok::InfonOpen)
            return InfonNameDecl{name, parse_infon_expr()};
        std::string base;
        if (peek().kind == Tok::Type)
            base = "~" + eat().text;
        else
            base = expect(Tok::Name).text;
        if (peek().kind == Tok::Caret) {
            eat();
            return ParamDecl{name, base, parse_infon_set(/*allow_empty=*/true)};
        }
        if (base.front() == '~') return ParamDecl{name, base, {}};
        return AliasDecl{name, base};
    }

    Statement parse_proposition() {
        std::string situation = expect(Tok::Name).text;
        bool positive = parse_supports();
        return PropositionStmt{situation, positive, parse_infon_set()};
    }

    bool parse_supports() {
        if (peek().kind == Tok::Supports) {
            eat();
            return true;
        }
        if (peek().kind == Tok::NotSupports) {
            eat();
            return false;
        }
        fail("expected '|=' or '|/='");
    }

    Statement parse_constraint() {
        ConstraintStmt c;
        c.group = expect(Tok::Name).text;
        expect(Tok::Colon);
        c.name = expect(Tok::Name).text;
        expect(Tok::Colon);
        c.lhs = parse_atoms();
        switch (peek().kind) {
            case Tok::ArrowBwd: c.direction = Direction::Backward; break;
            case Tok::ArrowFwd: c.direction = Direction::Forward; break;
            case Tok::ArrowBi: c.direction = Direction::Bidirectional; break;
            default: fail("expected '<=', '=>', or '<=>'");
        }
        eat();
        c.rhs = parse_atoms();
        if (peek().kind == Tok::Name && peek().text == "UNDER-CONDITIONS") {
            eat();
            expect(Tok::Colon);
            if (peek().kind == Tok::Name && peek().text == "w" && peek(1).kind == Tok::Colon) {
                eat();
                eat();
            }
            c.conditions = parse_infon_set();
        }
        return c;
    }

    std::vector<AtomExpr> parse_atoms() {
        std::vector<AtomExpr> atoms{parse_atom()};
        while (peek().kind == Tok::Comma &&
               (peek(1).kind == Tok::Name || peek(1).kind == Tok::Var) &&
               (peek(2).kind == Tok::Supports || peek(2).kind == Tok::NotSupports)) {
            eat();
            atoms.push_back(parse_atom());
        }
        return atoms;
    }

    AtomExpr parse_atom() {
        AtomExpr atom;
        if (peek().kind == Tok::Var)
            atom.situation = Term::var(eat().text);
        else
            atom.situation = Term::entity(expect(Tok::Name).text);
        atom.positive = parse_supports();
        atom.infons = parse_infon_set();
        return atom;
    }

    std::vector<InfonExpr> parse_infon_set(bool allow_empty = false) {
        std::vector<InfonExpr> out;
        if (peek().kind == Tok::LBrace) {
            eat();
            if (peek().kind == Tok::RBrace) {
                if (!allow_empty) fail("expected at least one infon");
                eat();
                return out;
            }
            out.push_back(parse_infon_expr());
            while (peek().kind == Tok::Comma) {
                eat();
                out.push_back(parse_infon_expr());
            }
            expect(Tok::RBrace);
            return out;
        }
        out.push_back(parse_infon_expr());
        return out;
    }

    InfonExpr parse_infon_expr() {
        if (peek().kind == Tok::Name) return InfonExpr{eat().text};
        RawInfon infon;
        expect(Tok::InfonOpen);
        infon.relation = expect(Tok::Name).text;
        std::vector<Token> elements;
        while (peek().kind == Tok::Comma) {
            eat();
            const Token& t = peek();
            switch (t.kind) {
                case Tok::Name:
                case Tok::Type:
                case Tok::Var:
                case Tok::Null:
                case Tok::Number:
                    elements.push_back(eat());
                    break;
                default:
                    fail("expected an argument or polarity");
            }
        }
        expect(Tok::InfonClose);
        if (elements.empty() || elements.back().kind != Tok::Number ||
            (elements.back().text != "0" && elements.back().text != "1"))
            throw ParseError("an infon ends with its polarity (0 or 1)",
                             peek().line, peek().col);
        infon.polarity = elements.back().text == "1" ? 1 : 0;
        elements.pop_back();
        for (const Token& t : elements) {
            switch (t.kind) {
                case Tok::Name: infon.args.push_back(Term::entity(t.text)); break;
                case Tok::Type: infon.args.push_back(Term::entity(t.text)); break;
                case Tok::Var: infon.args.push_back(Term::var(t.text)); break;
                case Tok::Null: infon.args.push_back(Term::null()); break;
                case Tok::Number:
                    throw ParseError("numbers are not valid arguments", t.line, t.col);
                default: break;
            }
        }
        return InfonExpr{std::move(infon)};
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

}  // namespace

Statement parse_statement(const std::string& text, bool query_mode, int line_base) {
    // directives are split on whitespace, so paths stay intact
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == ':') {
        DirectiveStmt d;
        std::string rest = text.substr(first + 1);
        std::size_t i = 0;
        auto word = [&]() {
            while (i < rest.size() && std::isspace(static_cast<unsigned char>(rest[i]))) ++i;
            std::size_t start = i;
            while (i < rest.size() && !std::isspace(static_cast<unsigned char>(rest[i]))) ++i;
            return rest.substr(start, i - start);
        };
        d.name = word();
        if (d.name.empty())
            throw ParseError("expected a directive name after ':'", line_base, 1);
        for (std::string w = word(); !w.empty(); w = word()) d.args.push_back(w);
        return d;
    }

    Lexer lexer(text, line_base);
    Parser parser(lexer.run());
    return parser.parse(query_mode);
}

bool is_blank_statement(const std::string& text) {
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return true;
    if (text[first] == ':') return false;
    try {
        return Lexer(text, 1).run().size() == 1;  // End only
    } catch (const ParseError&) {
        return false;
    }
}

bool needs_more_input(const std::string& text) {
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || text[first] == ':') return false;
    std::vector<Token> tokens;
    try {
        tokens = Lexer(text, 1).run();
    } catch (const ParseError&) {
        return false;  // let the parser report it
    }
    int braces = 0, infons = 0, brackets = 0;
    for (const Token& t : tokens) {
        switch (t.kind) {
            case Tok::LBrace: ++braces; break;
            case Tok::RBrace: --braces; break;
            case Tok::InfonOpen: ++infons; break;
            case Tok::InfonClose: --infons; break;
            case Tok::LBracket: ++brackets; break;
            case Tok::RBracket: --brackets; break;
            default: break;
        }
    }
    if (braces > 0 || infons > 0 || brackets > 0) return true;
    if (tokens.size() < 2) return false;
    const Token& last = tokens[tokens.size() - 2];
    switch (last.kind) {
        case Tok::Comma:
        case Tok::ArrowBwd:
        case Tok::ArrowFwd:
        case Tok::ArrowBi:
        case Tok::Caret:
        case Tok::Equals:
        case Tok::Supports:
        case Tok::NotSupports:
        case Tok::Pipe:
            return true;
        case Tok::Colon:
            // "UNDER-CONDITIONS:" at end of line continues
            return tokens.size() >= 3 && tokens[tokens.size() - 3].kind == Tok::Name &&
                   tokens[tokens.size() - 3].text == "UNDER-CONDITIONS";
        default:
            return false;
    }
}

}  // namespace sit
