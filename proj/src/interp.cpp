#include "virolab/interp.hpp"

#include <stdexcept>
#include <vector>

#include "virolab/codec.hpp"
#include "virolab/lang.hpp"

namespace virolab {

namespace {

struct Fault {
  std::string reason;
};
struct FuelOut {};

// Nesting bound: keeps pathological self-embedding programs from running the
// host out of C++ stack. Hitting it is a deterministic fault.
constexpr std::size_t kMaxDepth = 4000;

const std::string kInputName = lang::kInput;

struct Binding {
  const std::string* name;
  Word value;
};

class Eval {
 public:
  explicit Eval(std::uint64_t budget) : fuel_(budget), budget_(budget) {}

  Word run(const lang::Program& prog, const Word& input) {
    frames_.push_back(scope_.size());
    scope_.push_back({&kInputName, input});
    Word out = eval(prog, prog.root);
    scope_.pop_back();
    frames_.pop_back();
    return out;
  }

  [[nodiscard]] std::uint64_t consumed() const { return budget_ - fuel_; }

 private:
  std::uint64_t fuel_;
  std::uint64_t budget_;
  std::size_t depth_ = 0;
  std::vector<Binding> scope_;
  std::vector<std::size_t> frames_;  // scope base per exec level

  void tick() {
    if (fuel_ == 0) throw FuelOut{};
    --fuel_;
  }

  const Word& lookup(const std::string& name) {
    std::size_t base = frames_.back();
    for (std::size_t i = scope_.size(); i > base; --i) {
      if (*scope_[i - 1].name == name) return scope_[i - 1].value;
    }
    throw Fault{"unbound variable: " + name};
  }

  // Index operand for take/drop, clamped to the word length: values past the
  // end behave as the end, keeping both total.
  static std::size_t clamp_nat(const Word& w, std::size_t limit) {
    try {
      std::uint64_t n = word_small_nat(w);
      return n > limit ? limit : static_cast<std::size_t>(n);
    } catch (const IndexOutOfRange&) {
      return limit;  // beyond 2^64, certainly beyond any string
    }
  }

  std::size_t index_nat(const Word& w) {
    try {
      return word_small_nat(w);
    } catch (const IndexOutOfRange&) {
      throw Fault{"index out of range"};
    }
  }

  std::vector<Word> tuple_of(const Word& w) {
    try {
      return decode_tuple(w);
    } catch (const MalformedTuple&) {
      throw Fault{"malformed tuple"};
    }
  }

  Word eval(const lang::Program& prog, std::uint32_t idx) {
    tick();
    if (depth_ >= kMaxDepth) throw Fault{"nesting too deep"};
    ++depth_;
    Word out = eval_inner(prog, idx);
    --depth_;
    return out;
  }

  Word eval_inner(const lang::Program& prog, std::uint32_t idx) {
    const lang::Node& n = prog.nodes[idx];
    using lang::Op;
    switch (n.op) {
      case Op::lit:
        return n.bytes;
      case Op::var:
        return lookup(n.name);
      case Op::let: {
        Word v = eval(prog, n.kids[0]);
        scope_.push_back({&n.name, std::move(v)});
        Word out = eval(prog, n.kids[1]);
        scope_.pop_back();
        return out;
      }
      case Op::ifeq: {
        Word a = eval(prog, n.kids[0]);
        Word b = eval(prog, n.kids[1]);
        return eval(prog, a == b ? n.kids[2] : n.kids[3]);
      }
      case Op::loop: {
        Word v = eval(prog, n.kids[0]);
        for (;;) {
          tick();  // one step per round, beyond whatever guard/body cost
          scope_.push_back({&n.name, std::move(v)});
          Word g = eval(prog, n.kids[1]);
          if (g.empty()) {
            v = std::move(scope_.back().value);
            scope_.pop_back();
            return v;
          }
          Word next = eval(prog, n.kids[2]);
          scope_.pop_back();
          v = std::move(next);
        }
      }
      case Op::exec: {
        Word pw = eval(prog, n.kids[0]);
        Word in = eval(prog, n.kids[1]);
        auto target = lang::parse_cached(pw);
        if (!target) throw Fault{"exec: target does not parse"};
        frames_.push_back(scope_.size());
        scope_.push_back({&kInputName, std::move(in)});
        Word out = eval(*target, target->root);
        scope_.pop_back();
        frames_.pop_back();
        return out;
      }
      case Op::pair:
        return pair_words(eval(prog, n.kids[0]), eval(prog, n.kids[1]));
      case Op::fst:
        return unpair_word(eval(prog, n.kids[0])).first;
      case Op::snd:
        return unpair_word(eval(prog, n.kids[0])).second;
      case Op::tup: {
        std::vector<Word> items;
        items.reserve(n.kids.size());
        for (auto k : n.kids) items.push_back(eval(prog, k));
        return encode_tuple(items);
      }
      case Op::arity:
        return nat_word(tuple_of(eval(prog, n.kids[0])).size());
      case Op::get: {
        std::vector<Word> items = tuple_of(eval(prog, n.kids[0]));
        std::size_t i = index_nat(eval(prog, n.kids[1]));
        if (i >= items.size()) throw Fault{"index out of range"};
        return items[i];
      }
      case Op::set: {
        std::vector<Word> items = tuple_of(eval(prog, n.kids[0]));
        std::size_t i = index_nat(eval(prog, n.kids[1]));
        if (i >= items.size()) throw Fault{"index out of range"};
        items[i] = eval(prog, n.kids[2]);
        return encode_tuple(items);
      }
      case Op::app: {
        std::vector<Word> items = tuple_of(eval(prog, n.kids[0]));
        items.push_back(eval(prog, n.kids[1]));
        return encode_tuple(items);
      }
      case Op::cat:
        return eval(prog, n.kids[0]) + eval(prog, n.kids[1]);
      case Op::take: {
        Word w = eval(prog, n.kids[0]);
        return w.substr(0, clamp_nat(eval(prog, n.kids[1]), w.size()));
      }
      case Op::drop: {
        Word w = eval(prog, n.kids[0]);
        return w.substr(clamp_nat(eval(prog, n.kids[1]), w.size()));
      }
      case Op::inc:
        return nat_to_word(word_to_nat(eval(prog, n.kids[0])) + 1);
      case Op::sub: {
        mpz_class a = word_to_nat(eval(prog, n.kids[0]));
        mpz_class b = word_to_nat(eval(prog, n.kids[1]));
        if (b > a) throw Fault{"sub: negative"};
        return nat_to_word(a - b);
      }
      case Op::smn:
        return virolab::smn(eval(prog, n.kids[0]), eval(prog, n.kids[1]));
      case Op::quo:
        return lang::lit(eval(prog, n.kids[0]));
    }
    throw Fault{"corrupt node"};
  }
};

}  // namespace

EvalOutcome interp(const Word& program, const Word& input, Fuel fuel) {
  auto prog = lang::parse_cached(program);
  if (!prog) return EvalOutcome::undef("program does not parse", 0);
  Eval ev(fuel.budget);
  try {
    Word out = ev.run(*prog, input);
    return EvalOutcome::val(std::move(out), ev.consumed());
  } catch (const Fault& f) {
    return EvalOutcome::undef(f.reason, ev.consumed());
  } catch (const FuelOut&) {
    return EvalOutcome::exhausted(fuel.budget);
  }
}

Word smn(const Word& p, const Word& c) {
  return "(let x0 (pair " + lang::lit(c) + " x0) " + p + ")";
}

const Word& smn_prefix() {
  static const Word prefix = "(let x0 (pair '";
  return prefix;
}

std::optional<std::pair<Word, Word>> smn_parts(const Word& w) {
  const Word& pre = smn_prefix();
  if (w.size() <= pre.size() || w.compare(0, pre.size(), pre) != 0) return {};
  std::size_t quote = w.find('\'', pre.size());
  if (quote == std::string::npos) return {};
  static const std::string mid = " x0) ";
  if (w.compare(quote + 1, mid.size(), mid) != 0) return {};
  std::size_t body = quote + 1 + mid.size();
  if (body + 1 > w.size() || w.back() != ')') return {};
  Word c;
  try {
    c = from_hex(w.substr(pre.size(), quote - pre.size()));
  } catch (const std::invalid_argument&) {
    return {};
  }
  Word p = w.substr(body, w.size() - 1 - body);
  if (smn(p, c) != w) return {};
  return std::make_pair(std::move(p), std::move(c));
}

}  // namespace virolab
