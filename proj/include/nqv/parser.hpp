#pragma once

#include <string>
#include <vector>

#include "nqv/ast.hpp"

namespace nqv {

enum class TokenKind {
    Def, Load, End, Proof, Show, Skip, Abort, If, Then, Else, While, Do, Inv,
    Ident, String, Zero,
    Assign,   // :=
    ApplyEq,  // *=
    LParen, RParen, LBracket, RBracket, LBrace, RBrace,
    Semi, Colon, Hash,
    Eof,
};

struct Token {
    TokenKind kind;
    std::string text;
    int line;
    int column;
};

// Tokenizes a declaration file. `//` comments run to end of line; the unicode
// box character is accepted as a synonym for `#`.
std::vector<Token> lex(const std::string& source);

// Parses a declaration file; throws SyntaxError with position and the
// expected-token set on malformed input.
DeclarationFile parse(const std::string& source);

const char* token_kind_name(TokenKind k);

}  // namespace nqv
