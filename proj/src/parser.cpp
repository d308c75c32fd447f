#include <cctype>
#include <charconv>

#include "lmtt/surface.hpp"

namespace lmtt {

std::string to_string(const Pos& p) {
  return std::to_string(p.line) + ":" + std::to_string(p.col);
}

namespace {

enum class Tok {
  ident,
  number,
  lparen,
  rparen,
  lbrack,
  rbrack,
  lbrace,
  rbrace,
  comma,
  colon,
  assign,  // :=
  dot,
  bar,
  turnstile,  // |-
  arrow,      // ->
  fat_arrow,  // =>
  equals,
  backslash,
  caret,  // ^[ (includes the bracket)
  question,
  underscore,
  semicolon,
  end,
};

struct Token {
  Tok kind;
  std::string text;
  Pos pos;
};

bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
bool is_ident_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '\'';
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  Pos pos;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      // Count columns in code points: skip UTF-8 continuation bytes.
      if (src[i] == '\n') {
        ++pos.line;
        pos.col = 1;
      } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
        ++pos.col;
      }
      ++i;
    }
  };
  auto starts = [&](std::string_view s) { return src.substr(i).substr(0, s.size()) == s; };
  struct Sym {
    std::string_view text;
    Tok kind;
  };
  static const Sym syms[] = {
      {"λ", Tok::backslash}, {"→", Tok::arrow},  {"⊢", Tok::turnstile},
      {"⇒", Tok::fat_arrow}, {":=", Tok::assign}, {"|-", Tok::turnstile},
      {"->", Tok::arrow},    {"=>", Tok::fat_arrow}, {"^[", Tok::caret},
      {"(", Tok::lparen},    {")", Tok::rparen},  {"[", Tok::lbrack},
      {"]", Tok::rbrack},    {"{", Tok::lbrace},  {"}", Tok::rbrace},
      {",", Tok::comma},     {":", Tok::colon},   {".", Tok::dot},
      {"|", Tok::bar},       {"=", Tok::equals},  {"\\", Tok::backslash},
      {"?", Tok::question},  {";", Tok::semicolon},
  };
  while (i < src.size()) {
    unsigned char c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    if (starts("--")) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Pos start = pos;
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && is_ident_char(static_cast<unsigned char>(src[j]))) ++j;
      std::string text(src.substr(i, j - i));
      advance(j - i);
      out.push_back({text == "_" ? Tok::underscore : Tok::ident, text, start});
      continue;
    }
    if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      std::string text(src.substr(i, j - i));
      advance(j - i);
      out.push_back({Tok::number, text, start});
      continue;
    }
    bool matched = false;
    for (const auto& s : syms) {
      if (starts(s.text)) {
        advance(s.text.size());
        out.push_back({s.kind, std::string(s.text), start});
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(start, "unexpected character");
  }
  out.push_back({Tok::end, "", pos});
  return out;
}

bool is_keyword(const std::string& s) {
  static const char* const kws[] = {"Nat", "zero", "suc",   "rec", "box",
                                    "letbox", "in", "match", "var", "def"};
  for (const char* k : kws)
    if (s == k) return true;
  return false;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  Program program() {
    Program p;
    while (!at(Tok::end)) {
      Pos pos = peek().pos;
      expect_kw("def");
      std::string name = ident();
      expect(Tok::colon, "':'");
      Typ t = typ();
      expect(Tok::assign, "':='");
      SExpPtr body = exp();
      expect(Tok::semicolon, "';'");
      p.defs.push_back(SDef{std::move(name), std::move(t), std::move(body), pos});
    }
    return p;
  }

  SExpPtr whole_exp() {
    SExpPtr e = exp();
    expect(Tok::end, "end of input");
    return e;
  }

  Typ whole_typ() {
    Typ t = typ();
    expect(Tok::end, "end of input");
    return t;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_kw(const char* kw) const {
    return peek().kind == Tok::ident && peek().text == kw;
  }
  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void error(const std::string& what) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.pos, "expected " + what + ", found " + found);
  }

  void expect(Tok k, const char* what) {
    if (!at(k)) error(what);
    take();
  }
  void expect_kw(const char* kw) {
    if (!at_kw(kw)) error(std::string("'") + kw + "'");
    take();
  }

  std::string ident() {
    if (!at(Tok::ident) || is_keyword(peek().text)) error("an identifier");
    return take().text;
  }

  std::string pattern_var() {
    expect(Tok::question, "'?'");
    return ident();
  }

  // Types ------------------------------------------------------------------

  Typ typ() {
    Typ t = typ_atom();
    if (at(Tok::arrow)) {
      take();
      return arrow(t, typ());
    }
    return t;
  }

  Typ typ_atom() {
    if (at_kw("Nat")) {
      take();
      return nat();
    }
    if (at(Tok::lbrack)) {
      take();
      LocalCtx c = ctx(Tok::turnstile);
      expect(Tok::turnstile, "'|-'");
      Typ body = typ();
      expect(Tok::rbrack, "']'");
      return cbox(std::move(c), body);
    }
    if (at(Tok::lparen)) {
      take();
      Typ t = typ();
      expect(Tok::rparen, "')'");
      return t;
    }
    error("a type");
  }

  LocalCtx ctx(Tok terminator) {
    LocalCtx c;
    if (at(terminator)) return c;
    for (;;) {
      std::string name = ident();
      expect(Tok::colon, "':'");
      c.push_back(CtxEntry{std::move(name), typ()});
      if (!at(Tok::comma)) return c;
      take();
    }
  }

  // Terms ------------------------------------------------------------------

  static SExpPtr node(decltype(SExp::v) v, Pos pos) {
    return std::make_shared<const SExp>(SExp{std::move(v), pos});
  }

  SExpPtr exp() {
    Pos pos = peek().pos;
    if (at(Tok::backslash)) {
      take();
      std::vector<CtxEntry> params;
      do {
        expect(Tok::lparen, "'(' before a lambda parameter");
        std::string name = ident();
        expect(Tok::colon, "':'");
        params.push_back(CtxEntry{std::move(name), typ()});
        expect(Tok::rparen, "')'");
      } while (at(Tok::lparen));
      expect(Tok::dot, "'.'");
      return node(surf::Lam{std::move(params), exp()}, pos);
    }
    if (at_kw("letbox")) {
      take();
      std::string name = ident();
      expect(Tok::equals, "'='");
      SExpPtr scrut = exp();
      expect_kw("in");
      return node(surf::LetBox{std::move(name), scrut, exp()}, pos);
    }
    if (at_kw("match")) {
      take();
      SExpPtr scrut = app();
      expect(Tok::lbrace, "'{'");
      if (at(Tok::bar)) take();
      std::vector<SBranch> bs;
      bs.push_back(branch());
      while (at(Tok::bar)) {
        take();
        bs.push_back(branch());
      }
      expect(Tok::rbrace, "'}'");
      return node(surf::Match{scrut, std::move(bs)}, pos);
    }
    return app();
  }

  SBranch branch() {
    Pos pos = peek().pos;
    SBranch b{SBranch::Kind::zero, {}, nullptr, pos};
    if (at_kw("var")) {
      take();
      b.kind = SBranch::Kind::var;
      b.names = {ident()};
    } else if (at_kw("zero")) {
      take();
      b.kind = SBranch::Kind::zero;
    } else if (at_kw("suc")) {
      take();
      b.kind = SBranch::Kind::suc;
      b.names = {pattern_var()};
    } else if (at(Tok::backslash)) {
      take();
      b.kind = SBranch::Kind::lam;
      std::string x = ident();
      expect(Tok::dot, "'.'");
      b.names = {x, pattern_var()};
    } else if (at(Tok::question)) {
      b.kind = SBranch::Kind::app;
      std::string u = pattern_var();
      b.names = {u, pattern_var()};
    } else if (at_kw("rec")) {
      take();
      b.kind = SBranch::Kind::rec;
      std::string u = pattern_var();
      expect(Tok::lparen, "'('");
      std::string x = ident();
      std::string y = ident();
      expect(Tok::dot, "'.'");
      std::string u2 = pattern_var();
      expect(Tok::rparen, "')'");
      b.names = {u, x, y, u2, pattern_var()};
    } else if (at(Tok::underscore)) {
      take();
      b.kind = SBranch::Kind::wildcard;
    } else {
      error("a pattern");
    }
    expect(Tok::fat_arrow, "'=>'");
    b.body = exp();
    return b;
  }

  bool starts_atom() const {
    if (at(Tok::number) || at(Tok::lparen)) return true;
    if (!at(Tok::ident)) return false;
    const auto& t = peek().text;
    return t == "zero" || t == "box" || !is_keyword(t);
  }

  SExpPtr app() {
    Pos pos = peek().pos;
    SExpPtr e;
    if (at_kw("suc")) {
      take();
      e = node(surf::Suc{atom()}, pos);
    } else if (at_kw("rec")) {
      take();
      expect(Tok::lbrack, "'['");
      Typ motive = typ();
      expect(Tok::rbrack, "']'");
      SExpPtr base = atom();
      expect(Tok::lparen, "'('");
      std::string x = ident();
      std::string y = ident();
      expect(Tok::dot, "'.'");
      SExpPtr step = exp();
      expect(Tok::rparen, "')'");
      SExpPtr scrut = atom();
      e = node(surf::Rec{motive, base, x, y, step, scrut}, pos);
    } else {
      e = atom();
    }
    while (starts_atom()) {
      Pos apos = peek().pos;
      e = node(surf::App{e, atom()}, apos);
    }
    return e;
  }

  SExpPtr atom() {
    Pos pos = peek().pos;
    if (at(Tok::number)) {
      std::string text = take().text;
      std::size_t n = 0;
      auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
      if (ec != std::errc() || n > 100000) throw ParseError(pos, "numeral out of range");
      return node(surf::Num{n}, pos);
    }
    if (at(Tok::lparen)) {
      take();
      SExpPtr e = exp();
      expect(Tok::rparen, "')'");
      return e;
    }
    if (at_kw("zero")) {
      take();
      return node(surf::Zero{}, pos);
    }
    if (at_kw("box")) {
      take();
      expect(Tok::lparen, "'(' after box");
      LocalCtx c = ctx(Tok::dot);
      expect(Tok::dot, "'.'");
      SExpPtr body = exp();
      expect(Tok::rparen, "')'");
      return node(surf::Box{std::move(c), body}, pos);
    }
    std::string name = ident();
    if (at(Tok::caret)) {
      take();
      std::vector<SExpPtr> args;
      if (!at(Tok::rbrack)) {
        args.push_back(exp());
        while (at(Tok::comma)) {
          take();
          args.push_back(exp());
        }
      }
      expect(Tok::rbrack, "']'");
      return node(surf::GApp{std::move(name), std::move(args)}, pos);
    }
    return node(surf::Ident{std::move(name)}, pos);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Program parse_program(std::string_view src) { return Parser(src).program(); }
SExpPtr parse_exp(std::string_view src) { return Parser(src).whole_exp(); }
Typ parse_typ(std::string_view src) { return Parser(src).whole_typ(); }

}  // namespace lmtt
