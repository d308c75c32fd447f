#include "lmtt/driver.hpp"

#include <CLI11.hpp>
#include <pthread.h>

#include <algorithm>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>

#include "lmtt/elaborate.hpp"
#include "lmtt/nbe.hpp"
#include "lmtt/oracle.hpp"
#include "lmtt/printer.hpp"

namespace lmtt {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::size_t fuel = kDefaultFuel;
  bool quiet = false;
};

// A failure already reported to the user, carrying the exit status.
struct Exit {
  int code;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Kind name of a diagnostic, as used by EXPECT-REJECT.
std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const ResolveError*>(&e)) return "ResolveError";
  if (const auto* t = dynamic_cast<const SourceTypeError*>(&e))
    return to_string(t->error().kind);
  if (const auto* t = dynamic_cast<const TypeError*>(&e))
    return to_string(t->error().kind);
  return "Error";
}

std::vector<CheckedDef> load(const std::string& path) {
  return resolve(parse_program(read_file(path)));
}

const CheckedDef* find_def(const std::vector<CheckedDef>& defs,
                           const std::string& name) {
  for (const auto& d : defs)
    if (d.name == name) return &d;
  return nullptr;
}

const CheckedDef& require_def(const std::vector<CheckedDef>& defs,
                              const std::string& name, std::ostream& err) {
  const CheckedDef* d = find_def(defs, name);
  if (!d) {
    err << "error: no definition named '" << name << "'\n";
    throw Exit{2};
  }
  return *d;
}

Exp normal_form(const CheckedDef& d) { return nbe({}, {}, d.body, d.typ).exp(); }

int cmd_check(const std::string& file, const Options& opt, std::ostream& out) {
  auto defs = load(file);
  if (!opt.quiet)
    for (const auto& d : defs) out << d.name << " : " << print(d.typ) << "\n";
  return 0;
}

int cmd_nbe(const std::string& file, const std::string& only, const Options&,
            std::ostream& out, std::ostream& err) {
  auto defs = load(file);
  if (!only.empty()) {
    const auto& d = require_def(defs, only, err);
    out << "def " << d.name << " : " << print(d.typ) << " := "
        << print(normal_form(d)) << ";\n";
    return 0;
  }
  for (const auto& d : defs)
    out << "def " << d.name << " : " << print(d.typ) << " := "
        << print(normal_form(d)) << ";\n";
  return 0;
}

int cmd_equiv(const std::string& file, const std::string& a,
              const std::string& b, const Options& opt, std::ostream& out,
              std::ostream& err) {
  auto defs = load(file);
  const auto& da = require_def(defs, a, err);
  const auto& db = require_def(defs, b, err);
  if (!(da.typ == db.typ)) {
    err << "error: '" << a << "' : " << print(da.typ) << " and '" << b
        << "' : " << print(db.typ) << " have different types\n";
    return 2;
  }
  bool same = equiv({}, {}, Layer::meta, da.body, db.body, da.typ);
  if (!opt.quiet) out << (same ? "equivalent" : "not equivalent") << "\n";
  return same ? 0 : 1;
}

// Corpus files -------------------------------------------------------------

struct Directive {
  std::string kind;
  std::string arg;
  int line;
};

std::vector<Directive> directives(const std::string& src) {
  static const std::regex re(R"(--\s*EXPECT-([A-Z-]+)\s*:\s*(.*?)\s*$)");
  std::vector<Directive> out;
  std::istringstream in(src);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    std::smatch m;
    if (std::regex_search(line, m, re)) out.push_back({m[1], m[2], n});
  }
  return out;
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

// Self-checks run on every definition of an accepted corpus file.
std::optional<std::string> audit(const CheckedDef& d, const Options& opt) {
  Exp nf = normal_form(d);
  if (!classify_nf(nf)) return "normal form of '" + d.name + "' is not normal";
  auto r = try_infer({}, {}, Layer::meta, nf);
  if (!std::holds_alternative<Typ>(r) || !(std::get<Typ>(r) == d.typ))
    return "normal form of '" + d.name + "' does not have its type";
  if (!alpha_eq(nbe({}, {}, nf, d.typ).exp(), nf))
    return "normalization of '" + d.name + "' is not idempotent";
  if (step({}, {}, nf)) return "normal form of '" + d.name + "' has a redex";
  auto reduced = beta_normalize({}, {}, d.body, opt.fuel);
  if (!reduced) return "reduction of '" + d.name + "' ran out of fuel";
  if (!alpha_eq(nbe({}, {}, *reduced, d.typ).exp(), nf))
    return "reduct of '" + d.name + "' normalizes differently";
  return std::nullopt;
}

// Returns the failures of one corpus file.
std::vector<std::string> run_file(const std::string& path, const Options& opt) {
  std::vector<std::string> fails;
  std::string src = read_file(path);
  auto dirs = directives(src);
  auto reject = std::find_if(dirs.begin(), dirs.end(),
                             [](const Directive& d) { return d.kind == "REJECT"; });
  std::vector<CheckedDef> defs;
  try {
    defs = resolve(parse_program(src));
  } catch (const std::exception& e) {
    if (reject == dirs.end()) {
      fails.push_back(std::string("unexpected error: ") + e.what());
      return fails;
    }
    auto w = words(reject->arg);
    std::string kind = error_kind(e);
    if (w.empty() || w[0] != kind) {
      fails.push_back("expected rejection " + reject->arg + ", got " + kind + ": " + e.what());
    } else {
      std::string rest = reject->arg.substr(reject->arg.find(w[0]) + w[0].size());
      rest.erase(0, rest.find_first_not_of(' '));
      if (!rest.empty() && std::string(e.what()).find(rest) == std::string::npos)
        fails.push_back("rejection message lacks '" + rest + "': " + e.what());
    }
    return fails;
  }
  if (reject != dirs.end()) {
    fails.push_back("line " + std::to_string(reject->line) +
                    ": expected rejection, but the file checks");
    return fails;
  }

  auto where = [](const Directive& d) { return "line " + std::to_string(d.line) + ": "; };
  for (const auto& d : dirs) {
    try {
      if (d.kind == "TYPE") {
        auto colon = d.arg.find(':');
        if (colon == std::string::npos) throw std::runtime_error("malformed directive");
        auto name = words(d.arg.substr(0, colon));
        const CheckedDef* def = name.size() == 1 ? find_def(defs, name[0]) : nullptr;
        if (!def) throw std::runtime_error("unknown definition");
        Typ want = parse_typ(d.arg.substr(colon + 1));
        if (!(want == def->typ))
          fails.push_back(where(d) + def->name + " has type " + print(def->typ));
      } else if (d.kind == "NF") {
        auto sep = d.arg.find(":=");
        if (sep == std::string::npos) throw std::runtime_error("malformed directive");
        auto name = words(d.arg.substr(0, sep));
        const CheckedDef* def = name.size() == 1 ? find_def(defs, name[0]) : nullptr;
        if (!def) throw std::runtime_error("unknown definition");
        Exp want = read_exp(d.arg.substr(sep + 2), {}, {}, Layer::meta, defs).exp;
        Exp got = normal_form(*def);
        if (!alpha_eq(want, got))
          fails.push_back(where(d) + def->name + " normalizes to " + print(got));
      } else if (d.kind == "EQUIV" || d.kind == "NOT-EQUIV") {
        auto w = words(d.arg);
        if (w.size() != 2) throw std::runtime_error("malformed directive");
        const CheckedDef* a = find_def(defs, w[0]);
        const CheckedDef* b = find_def(defs, w[1]);
        if (!a || !b) throw std::runtime_error("unknown definition");
        bool same = a->typ == b->typ &&
                    equiv({}, {}, Layer::meta, a->body, b->body, a->typ);
        if (same != (d.kind == "EQUIV"))
          fails.push_back(where(d) + w[0] + " and " + w[1] +
                          (same ? " are equivalent" : " are not equivalent"));
      } else {
        fails.push_back(where(d) + "unknown directive EXPECT-" + d.kind);
      }
    } catch (const std::exception& e) {
      fails.push_back(where(d) + e.what());
    }
  }
  for (const auto& def : defs) {
    try {
      if (auto problem = audit(def, opt)) fails.push_back(*problem);
    } catch (const std::exception& e) {
      fails.push_back(def.name + ": " + e.what());
    }
  }
  return fails;
}

int cmd_corpus(const std::string& dir, const Options& opt, std::ostream& out,
               std::ostream& err) {
  if (!fs::is_directory(dir)) {
    err << "error: " << dir << " is not a directory\n";
    return 2;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".lmtt")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::size_t failed = 0;
  for (const auto& f : files) {
    std::string name = fs::relative(f, dir).generic_string();
    auto fails = run_file(f.string(), opt);
    if (fails.empty()) {
      if (!opt.quiet) out << "PASS " << name << "\n";
      continue;
    }
    ++failed;
    out << "FAIL " << name << "\n";
    for (const auto& m : fails) out << "  " << m << "\n";
  }
  out << files.size() << " files, " << failed << " failed\n";
  return failed == 0 ? 0 : 1;
}

int run_commands(const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err) {
  CLI::App app{"Checker and normalizer for two-layer contextual modal programs",
               "lmtt"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--fuel", opt.fuel, "Step bound for the reference reducer")
      ->check(CLI::PositiveNumber);
  app.add_flag("--quiet", opt.quiet, "Only report failures");

  std::string file, dir, def, name1, name2;
  auto* check = app.add_subcommand("check", "Typecheck every definition");
  check->add_option("FILE", file)->required();
  auto* norm = app.add_subcommand("nbe", "Print normal forms");
  norm->add_option("FILE", file)->required();
  norm->add_option("--def", def, "Only this definition");
  auto* eq = app.add_subcommand("equiv", "Decide equivalence of two definitions");
  eq->add_option("FILE", file)->required();
  eq->add_option("NAME1", name1)->required();
  eq->add_option("NAME2", name2)->required();
  auto* corpus = app.add_subcommand("corpus", "Run the EXPECT directives of a directory");
  corpus->add_option("DIR", dir)->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*check) return cmd_check(file, opt, out);
    if (*norm) return cmd_nbe(file, def, opt, out, err);
    if (*eq) return cmd_equiv(file, name1, name2, opt, out, err);
    if (*corpus) return cmd_corpus(dir, opt, out, err);
  } catch (const Exit& e) {
    return e.code;
  } catch (const std::exception& e) {
    if (error_kind(e) == "Error")
      err << "error: " << e.what() << "\n";
    else
      err << file << ":" << e.what() << "\n";
    return 2;
  }
  return 2;
}

// Traversals recurse on term depth, and literals like 100000 are that deep.
constexpr std::size_t kStackBytes = std::size_t{1} << 30;

struct Job {
  const std::vector<std::string>* args;
  std::ostream* out;
  std::ostream* err;
  int code = 2;
  std::exception_ptr failure;
};

void* run_job(void* p) {
  auto* job = static_cast<Job*>(p);
  try {
    job->code = run_commands(*job->args, *job->out, *job->err);
  } catch (...) {
    job->failure = std::current_exception();
  }
  return nullptr;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  Job job{&args, &out, &err, 2, nullptr};
  pthread_attr_t attr;
  pthread_t thread;
  bool started = pthread_attr_init(&attr) == 0 &&
                 pthread_attr_setstacksize(&attr, kStackBytes) == 0 &&
                 pthread_create(&thread, &attr, run_job, &job) == 0;
  pthread_attr_destroy(&attr);
  if (!started) return run_commands(args, out, err);
  pthread_join(thread, nullptr);
  if (job.failure) std::rethrow_exception(job.failure);
  return job.code;
}

}  // namespace lmtt
