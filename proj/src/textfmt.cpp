#include "cuba/textfmt.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace cuba {

SyntaxError::SyntaxError(SourceDiagnostic d)
    : InputError(std::to_string(d.line) + ":" + std::to_string(d.column) +
                 ": " + d.message),
      diag_(std::move(d)) {}

namespace {

std::string join_diagnostics(const std::vector<Diagnostic> &diags) {
  std::string out = "invalid CPDS";
  for (const auto &d : diags) out += "\n  " + d.location + ": " + d.message;
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<Diagnostic> diags)
    : InputError(join_diagnostics(diags)), diags_(std::move(diags)) {}

bool matches(const PropertySpec &p, const VisibleState &v) {
  for (const auto &pat : p.patterns) {
    if (pat.tops.size() != v.tops.size()) continue;
    if (pat.q && *pat.q != v.q) continue;
    bool ok = true;
    for (std::size_t i = 0; i < v.tops.size() && ok; ++i)
      if (pat.tops[i] && *pat.tops[i] != v.tops[i]) ok = false;
    if (ok) return true;
  }
  return false;
}

namespace {

enum class Tok { name, star, lparen, rparen, comma, semi, bar, lbrace, rbrace,
                 colon, arrow, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

bool is_delim(char ch) {
  switch (ch) {
    case '(': case ')': case '*': case ',': case ';': case '|': case '{':
    case '}': case ':': case '#':
      return true;
    default:
      return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r';
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_blank();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      const char ch = src_[pos_];
      if (ch == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
        t.kind = Tok::arrow;
        advance(2);
      } else if (is_delim(ch)) {
        switch (ch) {
          case '(': t.kind = Tok::lparen; break;
          case ')': t.kind = Tok::rparen; break;
          case '*': t.kind = Tok::star; break;
          case ',': t.kind = Tok::comma; break;
          case ';': t.kind = Tok::semi; break;
          case '|': t.kind = Tok::bar; break;
          case '{': t.kind = Tok::lbrace; break;
          case '}': t.kind = Tok::rbrace; break;
          default: t.kind = Tok::colon; break;
        }
        advance(1);
      } else {
        t.kind = Tok::name;
        const std::size_t start = pos_;
        while (pos_ < src_.size() && !is_delim(src_[pos_]) &&
               !(src_[pos_] == '-' && pos_ + 1 < src_.size() &&
                 src_[pos_ + 1] == '>'))
          advance(1);
        t.text = std::string(src_.substr(start, pos_ - start));
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      // Count columns in code points, not bytes.
      const auto b = static_cast<unsigned char>(src_[pos_]);
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else if ((b & 0xC0) != 0x80) {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_blank() {
    while (pos_ < src_.size()) {
      const char ch = src_[pos_];
      if (ch == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
      } else if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') {
        advance(1);
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

// A name as written, with its position, resolved once the owning namespace
// is known.
struct NameRef {
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
  bool star = false;
};

struct RawRule {
  NameRef src, top, dst;
  std::vector<NameRef> rhs;  // empty means eps
};

struct RawThread {
  NameRef name;
  std::vector<NameRef> alphabet;
  std::vector<RawRule> rules;
};

struct RawBad {
  NameRef q;
  std::vector<NameRef> tops;
  std::size_t line = 0;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ParsedInput run() {
    expect_keyword("shared");
    expect(Tok::colon, "':'");
    while (peek().kind == Tok::name) shared_.push_back(take_name());
    if (shared_.empty()) fail(peek(), "expected at least one shared state");
    expect(Tok::semi, "';'");

    expect_keyword("init");
    expect(Tok::colon, "':'");
    init_q_ = take_name();
    expect(Tok::bar, "'|'");
    init_words_.push_back(take_word());
    while (peek().kind == Tok::comma) {
      next();
      init_words_.push_back(take_word());
    }
    expect(Tok::semi, "';'");

    if (!is_keyword(peek(), "thread")) fail(peek(), "expected 'thread'");
    while (is_keyword(peek(), "thread")) parse_thread();
    while (is_keyword(peek(), "bad")) parse_bad();
    if (peek().kind != Tok::end)
      fail(peek(), "expected 'thread', 'bad:' or end of input");
    return build();
  }

 private:
  const Token &peek() const { return toks_[pos_]; }
  const Token &next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const Token &t, const std::string &msg) const {
    std::string found = t.kind == Tok::end    ? "end of input"
                        : t.kind == Tok::name ? "'" + t.text + "'"
                                              : "punctuation";
    throw SyntaxError({t.line, t.column, msg + ", found " + found});
  }

  static bool is_keyword(const Token &t, std::string_view kw) {
    return t.kind == Tok::name && t.text == kw;
  }

  void expect_keyword(std::string_view kw) {
    if (!is_keyword(peek(), kw)) fail(peek(), "expected '" + std::string(kw) + "'");
    next();
  }

  void expect(Tok k, const char *what) {
    if (peek().kind != k) fail(peek(), std::string("expected ") + what);
    next();
  }

  NameRef take_name() {
    const Token &t = peek();
    if (t.kind != Tok::name) fail(t, "expected a name");
    next();
    return {t.text, t.line, t.column, false};
  }

  NameRef take_name_or_star() {
    const Token &t = peek();
    if (t.kind == Tok::star) {
      next();
      return {"*", t.line, t.column, true};
    }
    return take_name();
  }

  std::vector<NameRef> take_word() {
    std::vector<NameRef> w;
    if (is_keyword(peek(), "eps")) {
      next();
      return w;
    }
    while (peek().kind == Tok::name) w.push_back(take_name());
    if (w.empty()) fail(peek(), "expected a stack word or 'eps'");
    return w;
  }

  void parse_thread() {
    next();  // thread
    RawThread th;
    th.name = take_name();
    expect(Tok::lbrace, "'{'");
    if (is_keyword(peek(), "alphabet")) {
      next();
      expect(Tok::colon, "':'");
      while (peek().kind == Tok::name) th.alphabet.push_back(take_name());
      expect(Tok::semi, "';'");
    }
    while (peek().kind == Tok::lparen) th.rules.push_back(parse_rule());
    expect(Tok::rbrace, "'}' or a rule");
    threads_.push_back(std::move(th));
  }

  RawRule parse_rule() {
    RawRule r;
    expect(Tok::lparen, "'('");
    r.src = take_name_or_star();
    expect(Tok::comma, "','");
    r.top = take_name();
    expect(Tok::rparen, "')'");
    expect(Tok::arrow, "'->'");
    expect(Tok::lparen, "'('");
    r.dst = take_name_or_star();
    expect(Tok::comma, "','");
    if (is_keyword(peek(), "eps")) {
      next();
    } else {
      r.rhs.push_back(take_name());
      if (peek().kind == Tok::name) r.rhs.push_back(take_name());
    }
    if (peek().kind == Tok::name) fail(peek(), "right-hand side has more than two symbols");
    expect(Tok::rparen, "')'");
    expect(Tok::semi, "';'");
    if (r.dst.star && !r.src.star)
      throw SyntaxError({r.dst.line, r.dst.column,
                         "'*' on the right-hand side needs a '*' on the left"});
    return r;
  }

  void parse_bad() {
    RawBad b;
    b.line = peek().line;
    next();  // bad
    expect(Tok::colon, "':'");
    expect(Tok::lparen, "'('");
    b.q = take_name_or_star();
    expect(Tok::bar, "'|'");
    b.tops.push_back(take_name_or_star());
    while (peek().kind == Tok::comma) {
      next();
      b.tops.push_back(take_name_or_star());
    }
    expect(Tok::rparen, "')'");
    expect(Tok::semi, "';'");
    bads_.push_back(std::move(b));
  }

  static std::string where(const NameRef &n) {
    return std::to_string(n.line) + ":" + std::to_string(n.column);
  }

  ParsedInput build() {
    ParsedInput out;
    Cpds &c = out.cpds;
    std::vector<Diagnostic> diags;

    std::map<std::string, SharedId> qidx;
    for (const auto &n : shared_) {
      if (!qidx.emplace(n.text, static_cast<SharedId>(c.shared.size())).second)
        diags.push_back({where(n), "duplicate shared state '" + n.text + "'"});
      else
        c.shared.push_back(n.text);
    }
    auto resolve_q = [&](const NameRef &n) -> SharedId {
      auto it = qidx.find(n.text);
      if (it != qidx.end()) return it->second;
      diags.push_back({where(n), "undeclared shared state '" + n.text + "'"});
      return static_cast<SharedId>(-1);
    };

    c.initial_shared = resolve_q(init_q_);

    std::set<std::string> thread_names;
    std::vector<std::map<std::string, SymbolId>> sym_idx;
    for (const auto &rt : threads_) {
      if (!thread_names.insert(rt.name.text).second)
        diags.push_back({where(rt.name), "duplicate thread '" + rt.name.text + "'"});
      ThreadProgram th;
      th.name = rt.name.text;
      std::map<std::string, SymbolId> sidx;
      for (const auto &s : rt.alphabet) {
        if (s.text == "eps") {
          diags.push_back({where(s), "'eps' cannot be a stack symbol"});
          continue;
        }
        if (!sidx.emplace(s.text, static_cast<SymbolId>(th.symbols.size())).second)
          diags.push_back({where(s), "duplicate stack symbol '" + s.text + "'"});
        else
          th.symbols.push_back(s.text);
      }
      auto resolve_s = [&](const NameRef &n) -> SymbolId {
        auto it = sidx.find(n.text);
        if (it != sidx.end()) return it->second;
        diags.push_back({where(n), "undeclared stack symbol '" + n.text +
                                       "' in thread " + th.name});
        return 0;
      };

      std::set<Action> seen;
      for (const auto &rr : rt.rules) {
        const SymbolId top = rr.top.text == "eps" ? kEmptyTop : resolve_s(rr.top);
        Word rhs;
        for (const auto &n : rr.rhs) rhs.push_back(resolve_s(n));
        std::vector<std::pair<SharedId, SharedId>> ends;
        if (rr.src.star) {
          const bool bound = rr.dst.star;
          const SharedId fixed = bound ? 0 : resolve_q(rr.dst);
          for (SharedId q = 0; q < c.shared.size(); ++q)
            ends.emplace_back(q, bound ? q : fixed);
        } else {
          ends.emplace_back(resolve_q(rr.src), resolve_q(rr.dst));
        }
        for (auto [q, q2] : ends) {
          Action a{q, top, q2, rhs};
          if (seen.insert(a).second) th.actions.push_back(std::move(a));
        }
      }
      c.threads.push_back(std::move(th));
      sym_idx.push_back(std::move(sidx));
    }

    if (init_words_.size() != threads_.size()) {
      diags.push_back({where(init_q_), "init lists " +
                                           std::to_string(init_words_.size()) +
                                           " words for " +
                                           std::to_string(threads_.size()) +
                                           " threads"});
    } else {
      for (std::size_t t = 0; t < threads_.size(); ++t) {
        Word w;
        for (const auto &n : init_words_[t]) {
          auto it = sym_idx[t].find(n.text);
          if (it == sym_idx[t].end())
            diags.push_back({where(n), "undeclared stack symbol '" + n.text +
                                           "' in thread " + c.threads[t].name});
          else
            w.push_back(it->second);
        }
        c.initial_stacks.push_back(std::move(w));
      }
    }

    for (const auto &b : bads_) {
      VisiblePattern pat;
      if (!b.q.star) pat.q = resolve_q(b.q);
      if (b.tops.size() != threads_.size()) {
        diags.push_back({where(b.q), "bad pattern has " +
                                         std::to_string(b.tops.size()) +
                                         " tops for " +
                                         std::to_string(threads_.size()) +
                                         " threads"});
        continue;
      }
      for (std::size_t t = 0; t < b.tops.size(); ++t) {
        const auto &n = b.tops[t];
        if (n.star) {
          pat.tops.emplace_back();
        } else if (n.text == "eps") {
          pat.tops.emplace_back(kEmptyTop);
        } else {
          auto it = sym_idx[t].find(n.text);
          if (it == sym_idx[t].end()) {
            diags.push_back({where(n), "undeclared stack symbol '" + n.text +
                                           "' in thread " + c.threads[t].name});
            pat.tops.emplace_back(0);
          } else {
            pat.tops.emplace_back(it->second);
          }
        }
      }
      out.property.patterns.push_back(std::move(pat));
    }

    if (diags.empty()) diags = validate(c);
    if (!diags.empty()) throw ValidationError(std::move(diags));
    return out;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  std::vector<NameRef> shared_;
  NameRef init_q_;
  std::vector<std::vector<NameRef>> init_words_;
  std::vector<RawThread> threads_;
  std::vector<RawBad> bads_;
};

}  // namespace

ParsedInput parse_cpds(std::string_view text) {
  return Parser(Lexer(text).run()).run();
}

ParsedInput parse_cpds_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_cpds(ss.str());
}

std::string format_pattern(const Cpds &c, const VisiblePattern &p) {
  std::string out = "(" + (p.q ? c.shared.at(*p.q) : std::string("*")) + " | ";
  for (std::size_t i = 0; i < p.tops.size(); ++i) {
    if (i) out += ", ";
    if (!p.tops[i])
      out += '*';
    else if (*p.tops[i] == kEmptyTop)
      out += "eps";
    else
      out += c.threads[i].symbols.at(*p.tops[i]);
  }
  return out + ")";
}

std::string serialize_cpds(const Cpds &c, const PropertySpec &p) {
  std::ostringstream os;
  os << "shared:";
  for (const auto &q : c.shared) os << ' ' << q;
  os << ";\n";
  os << "init: " << c.shared.at(c.initial_shared) << " |";
  for (std::size_t t = 0; t < c.thread_count(); ++t)
    os << (t ? ", " : " ") << format_word(c, t, c.initial_stacks.at(t));
  os << ";\n";
  for (std::size_t t = 0; t < c.thread_count(); ++t) {
    const auto &th = c.threads[t];
    os << "\nthread " << th.name << " {\n  alphabet:";
    for (const auto &s : th.symbols) os << ' ' << s;
    os << ";\n";
    for (const auto &a : th.actions) {
      os << "  (" << c.shared.at(a.src) << ", "
         << (a.from_empty() ? std::string("eps") : th.symbols.at(a.top))
         << ") -> (" << c.shared.at(a.dst) << ", " << format_word(c, t, a.rhs)
         << ");\n";
    }
    os << "}\n";
  }
  if (!p.empty()) os << '\n';
  for (const auto &pat : p.patterns) os << "bad: " << format_pattern(c, pat) << ";\n";
  return os.str();
}

}  // namespace cuba
