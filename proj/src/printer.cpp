#include "lmtt/printer.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <set>

#include "lmtt/typing.hpp"

namespace lmtt {

namespace {

bool is_keyword(const std::string& s) {
  static const std::set<std::string> kws{"Nat", "zero", "suc",   "rec", "box",
                                         "letbox", "in", "match", "var", "def"};
  return kws.count(s) > 0;
}

bool is_identifier(const std::string& s) {
  if (s.empty() || s == "_" || is_keyword(s)) return false;
  auto c0 = static_cast<unsigned char>(s[0]);
  if (!std::isalpha(c0) && c0 != '_') return false;
  return std::all_of(s.begin(), s.end(), [](char ch) {
    auto c = static_cast<unsigned char>(ch);
    return std::isalnum(c) || c == '_' || c == '\'';
  });
}

template <class Taken>
std::string fresh(const std::string& hint, const char* fallback, const Taken& taken) {
  std::string base = is_identifier(hint) ? hint : fallback;
  if (!taken(base)) return base;
  for (std::size_t k = 1;; ++k) {
    std::string cand = base + std::to_string(k);
    if (!taken(cand)) return cand;
  }
}

void print_typ(std::string& out, const Typ& t, bool parens_for_arrow);

void print_ctx(std::string& out, const LocalCtx& ctx) {
  auto names = display_names(ctx);
  for (std::size_t k = 0; k < ctx.size(); ++k) {
    if (k) out += ", ";
    out += names[k];
    out += ":";
    print_typ(out, ctx[k].typ, false);
  }
}

void print_typ(std::string& out, const Typ& t, bool parens_for_arrow) {
  std::visit(overloaded{
                 [&](const type::Nat&) { out += "Nat"; },
                 [&](const type::Opq& o) { out += "Opq#" + std::to_string(o.id); },
                 [&](const type::Arr& a) {
                   if (parens_for_arrow) out += "(";
                   print_typ(out, a.dom, true);
                   out += " -> ";
                   print_typ(out, a.cod, false);
                   if (parens_for_arrow) out += ")";
                 },
                 [&](const type::CBox& b) {
                   out += "[";
                   print_ctx(out, b.ctx);
                   out += b.ctx.empty() ? "|- " : " |- ";
                   print_typ(out, b.body, false);
                   out += "]";
                 },
             },
             t->v);
}

void collect_ctx_names(const Typ& t, std::set<std::string>& names);

void collect_ctx_names(const LocalCtx& ctx, std::set<std::string>& names) {
  for (const auto& n : display_names(ctx)) names.insert(n);
  for (const auto& e : ctx) collect_ctx_names(e.typ, names);
}

void collect_ctx_names(const Typ& t, std::set<std::string>& names) {
  std::visit(overloaded{
                 [&](const type::Arr& a) {
                   collect_ctx_names(a.dom, names);
                   collect_ctx_names(a.cod, names);
                 },
                 [&](const type::CBox& b) {
                   collect_ctx_names(b.ctx, names);
                   collect_ctx_names(b.body, names);
                 },
                 [](const auto&) {},
             },
             t->v);
}

void collect_ctx_names(const Exp& e, std::set<std::string>& names) {
  auto sub = [&](const Exp& x) { collect_ctx_names(x, names); };
  std::visit(overloaded{
                 [&](const expr::GVar& g) {
                   for (const auto& t : g.subst.terms) sub(t);
                 },
                 [&](const expr::Suc& s) { sub(s.pred); },
                 [&](const expr::Rec& r) {
                   collect_ctx_names(r.motive, names);
                   sub(r.base);
                   sub(r.step);
                   sub(r.scrut);
                 },
                 [&](const expr::Lam& l) {
                   collect_ctx_names(l.dom, names);
                   sub(l.body);
                 },
                 [&](const expr::App& a) {
                   sub(a.fn);
                   sub(a.arg);
                 },
                 [&](const expr::Box& b) {
                   collect_ctx_names(b.ctx, names);
                   sub(b.body);
                 },
                 [&](const expr::LetBox& l) {
                   collect_ctx_names(l.ctx, names);
                   sub(l.scrut);
                   sub(l.body);
                 },
                 [&](const expr::Match& m) {
                   collect_ctx_names(m.ctx, names);
                   sub(m.scrut);
                   for (const auto& b : m.branches) sub(b.body);
                 },
                 [](const auto&) {},
             },
             e->v);
}

struct Scope {
  GlobalCtx psi;
  LocalCtx gamma;
};

class Printer {
 public:
  explicit Printer(std::set<std::string> reserved) : reserved_(std::move(reserved)) {}

  void exp(std::string& out, const Exp& e, const Scope& s, int level) {
    std::visit(
        overloaded{
            [&](const expr::LVar& x) {
              if (x.index < s.gamma.size())
                out += s.gamma[s.gamma.size() - 1 - x.index].hint;
              else
                out += "#" + std::to_string(x.index);
            },
            [&](const expr::GVar& g) {
              if (g.index < s.psi.size())
                out += s.psi[s.psi.size() - 1 - g.index].hint;
              else
                out += "#g" + std::to_string(g.index);
              out += "^[";
              for (std::size_t k = 0; k < g.subst.terms.size(); ++k) {
                if (k) out += ", ";
                exp(out, g.subst.terms[k], s, 0);
              }
              out += "]";
            },
            [&](const expr::Zero&) { out += "zero"; },
            [&](const expr::Suc& n) {
              open(out, level > 1);
              out += "suc ";
              exp(out, n.pred, s, 2);
              close(out, level > 1);
            },
            [&](const expr::Rec& r) {
              open(out, level > 1);
              out += "rec [";
              print_typ(out, r.motive, false);
              out += "] ";
              exp(out, r.base, s, 2);
              std::string x = local_name(r.x_hint, s);
              Scope inner = with_local(s, x, nat());
              std::string y = local_name(r.y_hint, inner);
              inner = with_local(inner, y, r.motive);
              out += " (" + x + " " + y + ". ";
              exp(out, r.step, inner, 0);
              out += ") ";
              exp(out, r.scrut, s, 2);
              close(out, level > 1);
            },
            [&](const expr::Lam&) {
              open(out, level > 0);
              out += "\\";
              Scope inner = s;
              Exp cur = e;
              while (const auto* l = as<expr::Lam>(cur)) {
                std::string x = local_name(l->hint, inner);
                out += "(" + x + ":";
                print_typ(out, l->dom, false);
                out += ")";
                inner = with_local(inner, x, l->dom);
                cur = l->body;
              }
              out += ". ";
              exp(out, cur, inner, 0);
              close(out, level > 0);
            },
            [&](const expr::App& a) {
              open(out, level > 1);
              exp(out, a.fn, s, 1);
              out += " ";
              exp(out, a.arg, s, 2);
              close(out, level > 1);
            },
            [&](const expr::Box& b) {
              out += "box(";
              print_ctx(out, b.ctx);
              out += b.ctx.empty() ? ". " : ". ";
              Scope inner{s.psi, {}};
              auto names = display_names(b.ctx);
              for (std::size_t k = 0; k < b.ctx.size(); ++k)
                inner.gamma.push_back(CtxEntry{names[k], b.ctx[k].typ});
              exp(out, b.body, inner, 0);
              out += ")";
            },
            [&](const expr::LetBox& l) {
              open(out, level > 0);
              std::string u = global_name(l.hint, s, {});
              out += "letbox " + u + " = ";
              exp(out, l.scrut, s, 0);
              out += " in ";
              Scope inner = s;
              inner.psi.push_back(GlobalEntry{u, l.ctx, l.typ});
              exp(out, l.body, inner, 0);
              close(out, level > 0);
            },
            [&](const expr::Match& m) {
              open(out, level > 0);
              out += "match ";
              exp(out, m.scrut, s, 1);
              out += " { ";
              bool first = true;
              for (const auto& b : m.branches) {
                if (!first) out += " | ";
                first = false;
                branch(out, b, m, s);
              }
              out += " }";
              close(out, level > 0);
            },
        },
        e->v);
  }

 private:
  static void open(std::string& out, bool p) {
    if (p) out += "(";
  }
  static void close(std::string& out, bool p) {
    if (p) out += ")";
  }

  static bool in_scope(const Scope& s, const std::string& n) {
    for (const auto& g : s.psi)
      if (g.hint == n) return true;
    for (const auto& l : s.gamma)
      if (l.hint == n) return true;
    return false;
  }

  static Scope with_local(Scope s, const std::string& name, const Typ& t) {
    s.gamma.push_back(CtxEntry{name, t});
    return s;
  }

  std::string local_name(const std::string& hint, const Scope& s) const {
    return fresh(hint, "x", [&](const std::string& n) { return in_scope(s, n); });
  }

  std::string global_name(const std::string& hint, const Scope& s,
                          const std::vector<std::string>& also) const {
    return fresh(hint, "u", [&](const std::string& n) {
      return in_scope(s, n) || reserved_.count(n) > 0 ||
             std::find(also.begin(), also.end(), n) != also.end();
    });
  }

  // Names of the scrutinee's context as the parser will see them.
  std::vector<std::string> scrutinee_names(const expr::Match& m, const Scope& s) {
    auto r = try_infer(s.psi, s.gamma, Layer::meta, m.scrut);
    if (const auto* t = std::get_if<Typ>(&r))
      if (const auto* b = as<type::CBox>(*t))
        if (b->ctx.size() == m.ctx.size()) return display_names(b->ctx);
    return display_names(m.ctx);
  }

  void branch(std::string& out, const Branch& b, const expr::Match& m,
              const Scope& s) {
    std::vector<std::string> us;
    for (const auto& h : b.binders) us.push_back(global_name(h, s, us));
    auto pattern_local = [&](std::size_t k, const std::vector<std::string>& avoid) {
      std::string hint = k < b.locals.size() ? b.locals[k] : "";
      return fresh(hint, k == 0 ? "x" : "y", [&](const std::string& n) {
        return std::find(avoid.begin(), avoid.end(), n) != avoid.end();
      });
    };
    switch (b.head.kind) {
      case HeadKind::var: {
        auto names = scrutinee_names(m, s);
        out += "var ";
        out += b.head.var < names.size() ? names[names.size() - 1 - b.head.var]
                                         : "#" + std::to_string(b.head.var);
        break;
      }
      case HeadKind::zero: out += "zero"; break;
      case HeadKind::suc: out += "suc ?" + us[0]; break;
      case HeadKind::lam: out += "\\" + pattern_local(0, {}) + ". ?" + us[0]; break;
      case HeadKind::app: out += "?" + us[0] + " ?" + us[1]; break;
      case HeadKind::rec: {
        std::string x = pattern_local(0, {});
        std::string y = pattern_local(1, {x});
        out += "rec ?" + us[0] + " (" + x + " " + y + ". ?" + us[1] + ") ?" + us[2];
        break;
      }
    }
    out += " => ";
    Scope inner = s;
    auto binds = pattern_bindings(b, m.ctx, m.typ);
    for (std::size_t k = 0; k < binds.size(); ++k) {
      binds[k].hint = us[k];
      inner.psi.push_back(binds[k]);
    }
    exp(out, b.body, inner, 0);
  }

  std::set<std::string> reserved_;
};

}  // namespace

std::vector<std::string> display_names(const LocalCtx& ctx) {
  std::vector<std::string> names;
  for (const auto& e : ctx)
    names.push_back(fresh(e.hint, "x", [&](const std::string& n) {
      return std::find(names.begin(), names.end(), n) != names.end();
    }));
  return names;
}

std::string print(const Typ& t) {
  std::string out;
  print_typ(out, t, false);
  return out;
}

std::string print(const LocalCtx& ctx) {
  std::string out;
  print_ctx(out, ctx);
  return out;
}

std::string print(const Exp& e, const GlobalCtx& psi, const LocalCtx& gamma) {
  std::set<std::string> reserved;
  collect_ctx_names(e, reserved);
  std::string out;
  Printer(std::move(reserved)).exp(out, e, Scope{psi, gamma}, 0);
  return out;
}

std::ostream& operator<<(std::ostream& os, const Typ& t) { return os << print(t); }
std::ostream& operator<<(std::ostream& os, const Exp& e) { return os << print(e); }

}  // namespace lmtt
