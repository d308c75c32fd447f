#pragma once

// Concrete syntax.
//
//   program := { "def" ident ":" typ ":=" exp ";" }
//   typ     := atyp [ "->" typ ]
//   atyp    := "Nat" | "[" ctx "|-" typ "]" | "(" typ ")"
//   ctx     := [ ident ":" typ { "," ident ":" typ } ]
//   exp     := "\" ( "(" ident ":" typ ")" )+ "." exp
//            | "letbox" ident "=" exp "in" exp
//            | "match" app "{" [ "|" ] branch { "|" branch } "}"
//            | app
//   app     := head { atom }
//   head    := "suc" atom | "rec" "[" typ "]" atom "(" ident ident "." exp ")" atom
//            | atom
//   atom    := ident [ "^[" [ exp { "," exp } ] "]" ] | "zero" | numeral
//            | "(" exp ")" | "box" "(" ctx "." exp ")"
//   branch  := "var" ident "=>" exp | "zero" "=>" exp | "suc" "?" ident "=>" exp
//            | "\" ident "." "?" ident "=>" exp | "?" ident "?" ident "=>" exp
//            | "rec" "?" ident "(" ident ident "." "?" ident ")" "?" ident "=>" exp
//            | "_" "=>" exp
//
// Comments run from "--" to the end of the line. The characters λ → ⊢ ⇒ are
// accepted for \ -> |- =>.

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lmtt/syntax.hpp"

namespace lmtt {

struct Pos {
  int line = 1;
  int col = 1;
};

std::string to_string(const Pos& p);

class ParseError : public std::runtime_error {
 public:
  ParseError(Pos pos, const std::string& message)
      : std::runtime_error(to_string(pos) + ": " + message), pos_(pos) {}
  Pos pos() const { return pos_; }

 private:
  Pos pos_;
};

struct SExp;
using SExpPtr = std::shared_ptr<const SExp>;

struct SBranch {
  enum class Kind { var, zero, suc, lam, app, rec, wildcard };
  Kind kind;
  /// var: {x}  suc: {u}  lam: {x, u}  app: {u, u'}  rec: {u, x, y, u', u''}
  std::vector<std::string> names;
  SExpPtr body;
  Pos pos;
};

namespace surf {
struct Ident {
  std::string name;
};
/// u^[e1, ..., en]
struct GApp {
  std::string name;
  std::vector<SExpPtr> args;
};
struct Zero {};
struct Num {
  std::size_t value;
};
struct Suc {
  SExpPtr arg;
};
struct Rec {
  Typ motive;
  SExpPtr base;
  std::string x;
  std::string y;
  SExpPtr step;
  SExpPtr scrut;
};
struct Lam {
  std::vector<CtxEntry> params;
  SExpPtr body;
};
struct App {
  SExpPtr fn;
  SExpPtr arg;
};
struct Box {
  LocalCtx ctx;
  SExpPtr body;
};
struct LetBox {
  std::string name;
  SExpPtr scrut;
  SExpPtr body;
};
struct Match {
  SExpPtr scrut;
  std::vector<SBranch> branches;
};
}  // namespace surf

struct SExp {
  std::variant<surf::Ident, surf::GApp, surf::Zero, surf::Num, surf::Suc,
               surf::Rec, surf::Lam, surf::App, surf::Box, surf::LetBox,
               surf::Match>
      v;
  Pos pos;
};

struct SDef {
  std::string name;
  Typ typ;
  SExpPtr body;
  Pos pos;
};

struct Program {
  std::vector<SDef> defs;
};

Program parse_program(std::string_view src);
SExpPtr parse_exp(std::string_view src);
Typ parse_typ(std::string_view src);

}  // namespace lmtt
