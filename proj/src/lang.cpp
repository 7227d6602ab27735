#include "virolab/lang.hpp"

#include <unordered_map>

#include "virolab/codec.hpp"

namespace virolab::lang {

namespace {

struct FormInfo {
  Op op;
  int operands;  // expression operands; -1 = variadic; binders not counted
  bool binder;   // first token after the keyword is a name
};

const std::unordered_map<std::string, FormInfo>& forms() {
  static const std::unordered_map<std::string, FormInfo> table = {
      {"let", {Op::let, 2, true}},   {"ifeq", {Op::ifeq, 4, false}},
      {"loop", {Op::loop, 3, true}}, {"exec", {Op::exec, 2, false}},
      {"pair", {Op::pair, 2, false}}, {"fst", {Op::fst, 1, false}},
      {"snd", {Op::snd, 1, false}},  {"tup", {Op::tup, -1, false}},
      {"arity", {Op::arity, 1, false}}, {"get", {Op::get, 2, false}},
      {"set", {Op::set, 3, false}},  {"app", {Op::app, 2, false}},
      {"cat", {Op::cat, 2, false}},  {"take", {Op::take, 2, false}},
      {"drop", {Op::drop, 2, false}}, {"inc", {Op::inc, 1, false}},
      {"sub", {Op::sub, 2, false}},  {"smn", {Op::smn, 2, false}},
      {"quo", {Op::quo, 1, false}},
  };
  return table;
}

// Recursive descent; this bound keeps adversarially nested input from
// exhausting the host stack. Deeper than the evaluator's own cap, so any
// program that parses but nests too far still fails at run time, not here.
constexpr std::size_t kMaxParseDepth = 10000;

bool is_ws(char c) { return c == ' ' || c == '\n' || c == '\t' || c == '\r'; }
bool is_sym_start(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }
bool is_sym_char(char c) { return is_sym_start(c) || (c >= '0' && c <= '9'); }
bool is_hex_digit(char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); }

struct Parser {
  const Word& src;
  std::size_t pos = 0;
  std::size_t depth = 0;
  Program out;

  explicit Parser(const Word& s) : src(s) {}

  [[noreturn]] static void fail(std::size_t at, std::string reason) {
    throw ParseError{at, std::move(reason)};
  }

  void skip_ws() {
    while (pos < src.size() && is_ws(src[pos])) ++pos;
  }

  std::string symbol() {
    std::size_t start = pos;
    if (pos >= src.size() || !is_sym_start(src[pos])) fail(pos, "expected symbol");
    while (pos < src.size() && is_sym_char(src[pos])) ++pos;
    return std::string(src, start, pos - start);
  }

  std::uint32_t add(Node n) {
    out.nodes.push_back(std::move(n));
    return static_cast<std::uint32_t>(out.nodes.size() - 1);
  }

  std::uint32_t expr() {
    if (depth >= kMaxParseDepth) fail(pos, "nesting too deep");
    ++depth;
    std::uint32_t idx = expr_inner();
    --depth;
    return idx;
  }

  std::uint32_t expr_inner() {
    skip_ws();
    if (pos >= src.size()) fail(pos, "unexpected end of input");
    char c = src[pos];
    if (c == '\'') {
      ++pos;
      std::size_t start = pos;
      while (pos < src.size() && src[pos] != '\'') {
        if (!is_hex_digit(src[pos])) fail(pos, "literal: not a lowercase hex digit");
        ++pos;
      }
      if (pos >= src.size()) fail(start, "literal: missing closing quote");
      std::size_t len = pos - start;
      if (len % 2 != 0) fail(start, "literal: odd digit count");
      Word bytes = from_hex(std::string(src, start, len));
      ++pos;  // closing quote
      return add({Op::lit, std::move(bytes), {}, {}});
    }
    if (c == '(') {
      std::size_t open = pos;
      ++pos;
      skip_ws();
      std::string head = symbol();
      auto it = forms().find(head);
      if (it == forms().end()) fail(open, "unknown form: " + head);
      const FormInfo& info = it->second;
      Node node{info.op, {}, {}, {}};
      if (info.binder) {
        skip_ws();
        std::size_t at = pos;
        std::string name = symbol();
        if (forms().count(name)) fail(at, "binder shadows keyword: " + name);
        node.name = std::move(name);
      }
      if (info.operands < 0) {
        for (;;) {
          skip_ws();
          if (pos < src.size() && src[pos] == ')') break;
          node.kids.push_back(expr());
        }
      } else {
        for (int i = 0; i < info.operands; ++i) node.kids.push_back(expr());
      }
      skip_ws();
      if (pos >= src.size() || src[pos] != ')') fail(pos, "expected )");
      ++pos;
      return add(std::move(node));
    }
    if (is_sym_start(c)) {
      std::size_t at = pos;
      std::string name = symbol();
      if (forms().count(name)) fail(at, "keyword used as expression: " + name);
      return add({Op::var, {}, std::move(name), {}});
    }
    fail(pos, "unexpected byte");
  }
};

}  // namespace

ParseResult parse(const Word& src) {
  Parser p(src);
  try {
    std::uint32_t root = p.expr();
    p.skip_ws();
    if (p.pos != src.size()) p.fail(p.pos, "trailing bytes after expression");
    auto prog = std::make_shared<Program>(std::move(p.out));
    prog->root = root;
    return {std::move(prog), {}};
  } catch (const ParseError& e) {
    return {nullptr, e};
  }
}

bool parses(const Word& src) { return static_cast<bool>(parse(src)); }

std::shared_ptr<const Program> parse_cached(const Word& src) {
  // The same virus text gets exec'd thousands of times across probe runs.
  thread_local std::unordered_map<Word, std::shared_ptr<const Program>> cache;
  if (auto it = cache.find(src); it != cache.end()) return it->second;
  if (cache.size() >= (1u << 16)) cache.clear();
  ParseResult r = parse(src);
  cache.emplace(src, r.program);
  return r.program;
}

std::string lit(const Word& w) { return "'" + to_hex(w) + "'"; }

std::string natlit(std::uint64_t n) { return lit(nat_word(n)); }

std::string sx(const std::vector<std::string>& parts) {
  std::string out = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(' ');
    out += parts[i];
  }
  out.push_back(')');
  return out;
}

}  // namespace virolab::lang
