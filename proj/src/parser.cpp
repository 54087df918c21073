#include "nqv/parser.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace nqv {

namespace {

const std::map<std::string, TokenKind> kKeywords = {
    {"def", TokenKind::Def},     {"load", TokenKind::Load},   {"end", TokenKind::End},
    {"proof", TokenKind::Proof}, {"show", TokenKind::Show},   {"skip", TokenKind::Skip},
    {"abort", TokenKind::Abort}, {"if", TokenKind::If},       {"then", TokenKind::Then},
    {"else", TokenKind::Else},   {"while", TokenKind::While}, {"do", TokenKind::Do},
    {"inv", TokenKind::Inv},
};

}  // namespace

const char* token_kind_name(TokenKind k) {
    switch (k) {
        case TokenKind::Def: return "'def'";
        case TokenKind::Load: return "'load'";
        case TokenKind::End: return "'end'";
        case TokenKind::Proof: return "'proof'";
        case TokenKind::Show: return "'show'";
        case TokenKind::Skip: return "'skip'";
        case TokenKind::Abort: return "'abort'";
        case TokenKind::If: return "'if'";
        case TokenKind::Then: return "'then'";
        case TokenKind::Else: return "'else'";
        case TokenKind::While: return "'while'";
        case TokenKind::Do: return "'do'";
        case TokenKind::Inv: return "'inv'";
        case TokenKind::Ident: return "identifier";
        case TokenKind::String: return "string literal";
        case TokenKind::Zero: return "'0'";
        case TokenKind::Assign: return "':='";
        case TokenKind::ApplyEq: return "'*='";
        case TokenKind::LParen: return "'('";
        case TokenKind::RParen: return "')'";
        case TokenKind::LBracket: return "'['";
        case TokenKind::RBracket: return "']'";
        case TokenKind::LBrace: return "'{'";
        case TokenKind::RBrace: return "'}'";
        case TokenKind::Semi: return "';'";
        case TokenKind::Colon: return "':'";
        case TokenKind::Hash: return "'#'";
        case TokenKind::Eof: return "end of file";
    }
    return "?";
}

std::vector<Token> lex(const std::string& source) {
    std::vector<Token> tokens;
    int line = 1, col = 1;
    std::size_t i = 0;
    const auto push = [&](TokenKind k, std::string text, int l, int c) {
        tokens.push_back(Token{k, std::move(text), l, c});
    };
    while (i < source.size()) {
        const char c = source[i];
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++col;
            ++i;
            continue;
        }
        if (c == '/' && i + 1 < source.size() && source[i + 1] == '/') {
            while (i < source.size() && source[i] != '\n') ++i;
            continue;
        }
        const int l = line, cstart = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < source.size() &&
                   (std::isalnum(static_cast<unsigned char>(source[j])) || source[j] == '_'))
                ++j;
            std::string word = source.substr(i, j - i);
            col += int(j - i);
            i = j;
            auto kw = kKeywords.find(word);
            if (kw != kKeywords.end())
                push(kw->second, std::move(word), l, cstart);
            else
                push(TokenKind::Ident, std::move(word), l, cstart);
            continue;
        }
        if (c == '"') {
            std::size_t j = i + 1;
            std::string text;
            while (j < source.size() && source[j] != '"') {
                if (source[j] == '\n')
                    throw SyntaxError("unterminated string literal", l, cstart);
                text += source[j++];
            }
            if (j >= source.size())
                throw SyntaxError("unterminated string literal", l, cstart);
            col += int(j + 1 - i);
            i = j + 1;
            push(TokenKind::String, std::move(text), l, cstart);
            continue;
        }
        if (c == '0') {
            push(TokenKind::Zero, "0", l, cstart);
            ++i;
            ++col;
            continue;
        }
        if (c == ':' && i + 1 < source.size() && source[i + 1] == '=') {
            push(TokenKind::Assign, ":=", l, cstart);
            i += 2;
            col += 2;
            continue;
        }
        if (c == '*' && i + 1 < source.size() && source[i + 1] == '=') {
            push(TokenKind::ApplyEq, "*=", l, cstart);
            i += 2;
            col += 2;
            continue;
        }
        // UTF-8 box character, synonym for '#'.
        if (static_cast<unsigned char>(c) == 0xE2 && i + 2 < source.size() &&
            static_cast<unsigned char>(source[i + 1]) == 0x96 &&
            static_cast<unsigned char>(source[i + 2]) == 0xA1) {
            push(TokenKind::Hash, "#", l, cstart);
            i += 3;
            ++col;
            continue;
        }
        TokenKind k;
        switch (c) {
            case '(': k = TokenKind::LParen; break;
            case ')': k = TokenKind::RParen; break;
            case '[': k = TokenKind::LBracket; break;
            case ']': k = TokenKind::RBracket; break;
            case '{': k = TokenKind::LBrace; break;
            case '}': k = TokenKind::RBrace; break;
            case ';': k = TokenKind::Semi; break;
            case ':': k = TokenKind::Colon; break;
            case '#': k = TokenKind::Hash; break;
            default:
                throw SyntaxError(std::string("unexpected character '") + c + "'", l, cstart);
        }
        push(k, std::string(1, c), l, cstart);
        ++i;
        ++col;
    }
    tokens.push_back(Token{TokenKind::Eof, "", line, col});
    return tokens;
}

namespace {

class Parser {
  public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    DeclarationFile file() {
        DeclarationFile f;
        while (!at(TokenKind::Eof)) f.decls.push_back(declaration());
        return f;
    }

  private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;

    const Token& peek(std::size_t ahead = 0) const {
        return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
    }
    bool at(TokenKind k, std::size_t ahead = 0) const { return peek(ahead).kind == k; }
    Token advance() { return tokens_[pos_++]; }

    [[noreturn]] void fail(const std::string& expected) const {
        const Token& t = peek();
        std::ostringstream msg;
        msg << t.line << ":" << t.column << ": expected " << expected << ", got "
            << token_kind_name(t.kind);
        if (t.kind == TokenKind::Ident) msg << " '" << t.text << "'";
        throw SyntaxError(msg.str(), t.line, t.column);
    }

    Token expect(TokenKind k, const char* what = nullptr) {
        if (!at(k)) fail(what ? what : token_kind_name(k));
        return advance();
    }

    SourceLoc loc() const { return SourceLoc{peek().line, peek().column}; }

    Declaration declaration() {
        if (at(TokenKind::Show)) {
            const SourceLoc l = loc();
            advance();
            std::string name = expect(TokenKind::Ident).text;
            expect(TokenKind::End);
            return ShowCmd{std::move(name), l};
        }
        const SourceLoc l = loc();
        expect(TokenKind::Def, "'def' or 'show'");
        std::string name = expect(TokenKind::Ident).text;
        expect(TokenKind::Assign);
        if (at(TokenKind::Load)) {
            advance();
            std::string path = expect(TokenKind::String).text;
            expect(TokenKind::End);
            return LoadDecl{std::move(name), std::move(path), l};
        }
        if (at(TokenKind::Proof)) {
            ProofDecl p = proof();
            p.name = std::move(name);
            p.loc = l;
            expect(TokenKind::End);
            return p;
        }
        fail("'load' or 'proof'");
    }

    // True when the next tokens open an assertion rather than an invariant
    // annotation: '{' not followed by 'inv' ':'.
    bool at_assertion() const {
        return at(TokenKind::LBrace) &&
               !(at(TokenKind::Inv, 1) && at(TokenKind::Colon, 2));
    }

    ProofDecl proof() {
        ProofDecl p;
        expect(TokenKind::Proof);
        p.reg = var_tuple();
        expect(TokenKind::Colon);
        if (at_assertion()) {
            p.pre = assertion();
            expect(TokenKind::Semi);
        }
        std::vector<ProgramNode> stmts;
        while (true) {
            stmts.push_back(statement());
            expect(TokenKind::Semi, "';' after statement");
            if (at_assertion()) {
                p.post = assertion();
                break;
            }
        }
        p.body = ProgramNode::seq(std::move(stmts));
        return p;
    }

    VarTuple var_tuple() {
        expect(TokenKind::LBracket);
        std::vector<std::string> names;
        names.push_back(expect(TokenKind::Ident, "qubit name").text);
        while (at(TokenKind::Ident)) names.push_back(advance().text);
        const Token& close = peek();
        if (!at(TokenKind::RBracket)) fail("qubit name or ']'");
        advance();
        try {
            return VarTuple(std::move(names));
        } catch (const DisjointnessError& e) {
            throw SyntaxError(std::to_string(close.line) + ":" + std::to_string(close.column) +
                                  ": " + e.what(),
                              close.line, close.column);
        }
    }

    AssertionExpr assertion() {
        AssertionExpr a;
        a.loc = loc();
        expect(TokenKind::LBrace);
        a.terms.push_back(term());
        while (at(TokenKind::Ident)) a.terms.push_back(term());
        if (!at(TokenKind::RBrace)) fail("predicate term or '}'");
        advance();
        return a;
    }

    AssertionTerm term() {
        AssertionTerm t;
        t.loc = loc();
        t.name = expect(TokenKind::Ident, "predicate name").text;
        t.vars = var_tuple();
        return t;
    }

    std::vector<ProgramNode> statements(const char* stop_desc) {
        std::vector<ProgramNode> stmts;
        stmts.push_back(statement());
        while (at(TokenKind::Semi)) {
            advance();
            stmts.push_back(statement());
        }
        (void)stop_desc;
        return stmts;
    }

    ProgramNode statement() {
        const SourceLoc l = loc();
        switch (peek().kind) {
            case TokenKind::Skip:
                advance();
                return ProgramNode::skip(l);
            case TokenKind::Abort:
                advance();
                return ProgramNode::abort(l);
            case TokenKind::LBracket: {
                VarTuple vars = var_tuple();
                if (at(TokenKind::Assign)) {
                    advance();
                    expect(TokenKind::Zero, "'0' after ':='");
                    return ProgramNode::init(std::move(vars), l);
                }
                if (at(TokenKind::ApplyEq)) {
                    advance();
                    std::string op = expect(TokenKind::Ident, "operator name").text;
                    return ProgramNode::unitary(std::move(vars), std::move(op), l);
                }
                fail("':=' or '*='");
            }
            case TokenKind::LParen: {
                advance();
                std::vector<ProgramNode> branches;
                branches.push_back(ProgramNode::seq(statements("'#' or ')'")));
                while (at(TokenKind::Hash)) {
                    advance();
                    branches.push_back(ProgramNode::seq(statements("'#' or ')'")));
                }
                expect(TokenKind::RParen);
                return ProgramNode::ndet(std::move(branches));
            }
            case TokenKind::If: {
                advance();
                std::string op = expect(TokenKind::Ident, "measurement name").text;
                VarTuple vars = var_tuple();
                expect(TokenKind::Then);
                ProgramNode then_branch = ProgramNode::seq(statements("'else' or 'end'"));
                ProgramNode else_branch = ProgramNode::skip(l);
                if (at(TokenKind::Else)) {
                    advance();
                    else_branch = ProgramNode::seq(statements("'end'"));
                }
                expect(TokenKind::End);
                return ProgramNode::if_then_else(std::move(op), std::move(vars),
                                                 std::move(then_branch), std::move(else_branch), l);
            }
            case TokenKind::LBrace: {
                // `{ inv: terms }; while ...` — the only statement position a
                // brace is legal in.
                advance();
                expect(TokenKind::Inv, "'inv' (loop annotation)");
                expect(TokenKind::Colon);
                AssertionExpr inv;
                inv.loc = l;
                inv.terms.push_back(term());
                while (at(TokenKind::Ident)) inv.terms.push_back(term());
                expect(TokenKind::RBrace, "predicate term or '}'");
                expect(TokenKind::Semi, "';' after invariant annotation");
                if (!at(TokenKind::While)) fail("'while' after invariant annotation");
                ProgramNode w = statement();
                w.invariant = std::move(inv);
                return w;
            }
            case TokenKind::While: {
                advance();
                std::string op = expect(TokenKind::Ident, "measurement name").text;
                VarTuple vars = var_tuple();
                expect(TokenKind::Do);
                ProgramNode body = ProgramNode::seq(statements("'end'"));
                expect(TokenKind::End);
                return ProgramNode::while_loop(std::move(op), std::move(vars), std::move(body),
                                               std::nullopt, l);
            }
            default:
                fail("statement");
        }
    }
};

}  // namespace

DeclarationFile parse(const std::string& source) { return Parser(lex(source)).file(); }

}  // namespace nqv
