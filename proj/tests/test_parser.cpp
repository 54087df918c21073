#include <string>
#include <variant>

#include "doctest.h"
#include "nqv/env.hpp"
#include "nqv/parser.hpp"
#include "testutil.hpp"

using namespace nqv;

namespace {

const ProofDecl& first_proof(const DeclarationFile& f) {
    for (const auto& d : f.decls)
        if (const auto* p = std::get_if<ProofDecl>(&d)) return *p;
    throw std::logic_error("no proof in file");
}

ProofDecl parse_proof(const std::string& body) {
    return first_proof(parse(body));
}

const std::string kWalk =
    "// a two branch walk with an annotated loop\n"
    "def pf := proof [q1 q2] :\n"
    "  { I[q1] };\n"
    "  [q1 q2] :=0;\n"
    "  { inv: I[q1 q2] };\n"
    "  while M01[q1] do\n"
    "    ( [q1] *= H # [q1] *= X; [q2] *= Z )\n"
    "  end;\n"
    "  { P0[q1] }\n"
    "end\n"
    "show pf end\n";

}  // namespace

TEST_CASE("lexer") {
    SUBCASE("operators and keywords") {
        const auto toks = lex("( skip # abort □ skip )");
        REQUIRE(toks.size() == 8);  // incl. Eof
        CHECK(toks[0].kind == TokenKind::LParen);
        CHECK(toks[1].kind == TokenKind::Skip);
        CHECK(toks[2].kind == TokenKind::Hash);
        CHECK(toks[3].kind == TokenKind::Abort);
        CHECK(toks[4].kind == TokenKind::Hash);  // the box character is a synonym
        CHECK(toks[6].kind == TokenKind::RParen);
        CHECK(toks[7].kind == TokenKind::Eof);
    }
    SUBCASE("assignment forms") {
        const auto toks = lex("[q] :=0; [q] *= H");
        CHECK(toks[0].kind == TokenKind::LBracket);
        CHECK(toks[3].kind == TokenKind::Assign);
        CHECK(toks[4].kind == TokenKind::Zero);
        CHECK(toks[5].kind == TokenKind::Semi);
        CHECK(toks[9].kind == TokenKind::ApplyEq);
    }
    SUBCASE("comments run to end of line and positions are tracked") {
        const auto toks = lex("skip // the rest vanishes\n  proof");
        REQUIRE(toks.size() == 3);
        CHECK(toks[0].kind == TokenKind::Skip);
        CHECK(toks[1].kind == TokenKind::Proof);
        CHECK(toks[1].line == 2);
        CHECK(toks[1].column == 3);
    }
    SUBCASE("strings carry their text") {
        const auto toks = lex("load \"ops/w1.qmat\"");
        CHECK(toks[0].kind == TokenKind::Load);
        CHECK(toks[1].kind == TokenKind::String);
        CHECK(toks[1].text == "ops/w1.qmat");
    }
    SUBCASE("bad characters are rejected with a position") {
        CHECK_THROWS_AS(lex("skip $"), SyntaxError);
        try {
            lex("\n  @");
        } catch (const SyntaxError& e) {
            CHECK(e.line == 2);
            CHECK(e.column == 3);
        }
    }
}

TEST_CASE("parsing a full declaration file") {
    const DeclarationFile f = parse(kWalk);
    REQUIRE(f.decls.size() == 2);
    const auto& pf = first_proof(f);
    CHECK(pf.name == "pf");
    CHECK(pf.reg == (VarTuple{"q1", "q2"}));
    REQUIRE(pf.pre.has_value());
    CHECK(pf.pre->terms.size() == 1);
    CHECK(pf.pre->terms[0].name == "I");
    CHECK(pf.post.terms[0].name == "P0");

    REQUIRE(pf.body.kind == NodeKind::Seq);
    REQUIRE(pf.body.children.size() == 2);
    CHECK(pf.body.children[0].kind == NodeKind::Init);
    const auto& loop = pf.body.children[1];
    REQUIRE(loop.kind == NodeKind::While);
    CHECK(loop.op_name == "M01");
    REQUIRE(loop.invariant.has_value());
    CHECK(loop.invariant->terms[0].vars == (VarTuple{"q1", "q2"}));

    const auto& body = loop.children[0];
    REQUIRE(body.kind == NodeKind::NDet);
    REQUIRE(body.children.size() == 2);
    CHECK(body.children[0].kind == NodeKind::Unitary);
    CHECK(body.children[1].kind == NodeKind::Seq);

    const auto* show = std::get_if<ShowCmd>(&f.decls[1]);
    REQUIRE(show != nullptr);
    CHECK(show->name == "pf");
}

TEST_CASE("if statements") {
    SUBCASE("a missing else branch defaults to skip") {
        const auto pf = parse_proof(
            "def p := proof [q] : { I[q] }; if M01[q] then [q] *= X end; { I[q] } end");
        const auto& node = pf.body;
        REQUIRE(node.kind == NodeKind::If);
        REQUIRE(node.children.size() == 2);
        CHECK(node.children[0].kind == NodeKind::Unitary);
        CHECK(node.children[1].kind == NodeKind::Skip);
    }
    SUBCASE("both branches parse") {
        const auto pf = parse_proof(
            "def p := proof [q] : { I[q] }; if Mpm[q] then skip else abort end; { I[q] } end");
        CHECK(pf.body.op_name == "Mpm");
        CHECK(pf.body.children[0].kind == NodeKind::Skip);
        CHECK(pf.body.children[1].kind == NodeKind::Abort);
    }
}

TEST_CASE("sequences and choices flatten to n-ary nodes") {
    const auto pf = parse_proof(
        "def p := proof [q] : { I[q] }; skip; skip; skip; { I[q] } end");
    CHECK(pf.body.kind == NodeKind::Seq);
    CHECK(pf.body.children.size() == 3);

    const auto pf2 = parse_proof(
        "def p := proof [q] : { I[q] }; ( skip # skip # skip ); { I[q] } end");
    CHECK(pf2.body.kind == NodeKind::NDet);
    CHECK(pf2.body.children.size() == 3);

    // Parenthesized sequencing inside a branch stays one branch.
    const auto pf3 = parse_proof(
        "def p := proof [q] : { I[q] }; ( skip; skip # skip ); { I[q] } end");
    CHECK(pf3.body.kind == NodeKind::NDet);
    REQUIRE(pf3.body.children.size() == 2);
    CHECK(pf3.body.children[0].kind == NodeKind::Seq);
}

TEST_CASE("syntax errors carry positions and expectations") {
    CHECK_THROWS_AS(parse("def p := proof [q] : { I[q] }; skip; { I[q] }"), SyntaxError);
    CHECK_THROWS_AS(parse("def p := proof [q] skip end"), SyntaxError);
    try {
        parse("def p := proof [q] :\n  { I[q] };\n  if M01[q] skip end; { I[q] } end");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.line == 3);
        CHECK(std::string(e.what()).find("expected") != std::string::npos);
    }
}

TEST_CASE("pretty printing round trips") {
    const DeclarationFile f1 = parse(kWalk);
    const std::string printed = pretty(f1);
    const DeclarationFile f2 = parse(printed);
    CHECK(pretty(f2) == printed);
    CHECK(first_proof(f2).body == first_proof(f1).body);
}

TEST_CASE("typechecking rejects ill-formed proofs") {
    const OperatorEnv env = OperatorEnv::with_builtins();
    auto check = [&](const std::string& src) { return typecheck(parse_proof(src), env); };

    SUBCASE("well-typed input passes") {
        const CheckedProof p = check(
            "def p := proof [q r] : { I[q] }; [q r] *= CX; if M01[q] then [r] *= H end;"
            " { P0[r] } end");
        CHECK(p.reg == (VarTuple{"q", "r"}));
        CHECK(p.pre.has_value());
        CHECK(p.post.vars == p.reg);
    }
    SUBCASE("unknown operator") {
        CHECK_THROWS_AS(check("def p := proof [q] : { I[q] }; [q] *= NOPE; { I[q] } end"),
                        UnknownName);
    }
    SUBCASE("qubit outside the declared register") {
        CHECK_THROWS_AS(check("def p := proof [q] : { I[q] }; [r] *= X; { I[q] } end"),
                        UnknownName);
    }
    SUBCASE("gate arity must match the operand tuple") {
        CHECK_THROWS_AS(check("def p := proof [q] : { I[q] }; [q] *= CX; { I[q] } end"),
                        ArityMismatch);
    }
    SUBCASE("projectors are not gates") {
        CHECK_THROWS_AS(check("def p := proof [q] : { I[q] }; [q] *= P0; { I[q] } end"),
                        NotUnitary);
    }
    SUBCASE("branch conditions must be measurements") {
        CHECK_THROWS_AS(
            check("def p := proof [q] : { I[q] }; if H[q] then skip end; { I[q] } end"),
            NotMeasurement);
    }
    SUBCASE("assertion terms must be predicates") {
        CHECK_THROWS_AS(check("def p := proof [q] : { X[q] }; skip; { I[q] } end"),
                        NotPredicate);
        CHECK_THROWS_AS(check("def p := proof [q] : { M01[q] }; skip; { I[q] } end"),
                        NotPredicate);
    }
}
