#include "virolab/codec.hpp"

#include <unordered_map>

namespace virolab {

namespace {

// Sum of 256^i for i < k: the offset between plain base-256 digits and the
// bijective reading. In base 256 it is just k repetitions of digit 1.
mpz_class ones(std::size_t k) {
  if (k == 0) return 0;
  std::string buf(k, '\x01');
  mpz_class o;
  mpz_import(o.get_mpz_t(), buf.size(), -1, 1, 0, 0, buf.data());
  return o;
}

struct PairKey {
  Word a, b;
  bool operator==(const PairKey& o) const { return a == o.a && b == o.b; }
};

struct PairKeyHash {
  std::size_t operator()(const PairKey& k) const {
    std::size_t h = std::hash<Word>{}(k.a);
    return h ^ (std::hash<Word>{}(k.b) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
  }
};

// Pairing dominates the interpreter's cost profile (the same environment
// words get split and rebuilt constantly), and both directions are pure, so
// memoize. Thread-local keeps the maps lock-free.
constexpr std::size_t kCacheCap = 1u << 18;

std::unordered_map<PairKey, Word, PairKeyHash>& pair_cache() {
  thread_local std::unordered_map<PairKey, Word, PairKeyHash> c;
  return c;
}

std::unordered_map<Word, std::pair<Word, Word>>& unpair_cache() {
  thread_local std::unordered_map<Word, std::pair<Word, Word>> c;
  return c;
}

}  // namespace

mpz_class word_to_nat(const Word& w) {
  if (w.empty()) return 0;
  mpz_class m;
  mpz_import(m.get_mpz_t(), w.size(), -1, 1, 0, 0, w.data());
  return m + ones(w.size());
}

Word nat_to_word(const mpz_class& n) {
  if (n == 0) return "";
  // Digit count k satisfies 256^k <= 255n+1 < 256^(k+1); sizeinbase is exact
  // for power-of-two bases.
  mpz_class m = 255 * n + 1;
  std::size_t k = mpz_sizeinbase(m.get_mpz_t(), 256) - 1;
  mpz_class digits = n - ones(k);
  Word out(k, '\x00');
  std::size_t count = 0;
  mpz_export(out.data(), &count, -1, 1, 0, 0, digits.get_mpz_t());
  // High digits of value zero are not exported; the zero fill already covers
  // them. count <= k always holds.
  return out;
}

Word nat_word(std::uint64_t n) {
  mpz_class m;
  mpz_import(m.get_mpz_t(), 1, -1, sizeof(n), 0, 0, &n);
  return nat_to_word(m);
}

std::uint64_t word_small_nat(const Word& w) {
  mpz_class n = word_to_nat(w);
  if (!n.fits_ulong_p()) throw IndexOutOfRange("word_small_nat: value exceeds 64 bits");
  return n.get_ui();
}

Word pair_words(const Word& a, const Word& b) {
  auto& cache = pair_cache();
  PairKey key{a, b};
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  mpz_class x = word_to_nat(a);
  mpz_class y = word_to_nat(b);
  mpz_class s = x + y;
  mpz_class n = s * (s + 1) / 2 + y;
  Word out = nat_to_word(n);

  if (cache.size() >= kCacheCap) cache.clear();
  cache.emplace(std::move(key), out);
  auto& rcache = unpair_cache();
  if (rcache.size() >= kCacheCap) rcache.clear();
  rcache.emplace(out, std::make_pair(a, b));
  return out;
}

std::pair<Word, Word> unpair_word(const Word& w) {
  auto& cache = unpair_cache();
  if (auto it = cache.find(w); it != cache.end()) return it->second;

  mpz_class n = word_to_nat(w);
  mpz_class r = 8 * n + 1;
  mpz_class root = sqrt(r);  // floor
  mpz_class s = (root - 1) / 2;
  while (s * (s + 1) / 2 > n) s -= 1;
  while ((s + 1) * (s + 2) / 2 <= n) s += 1;
  mpz_class y = n - s * (s + 1) / 2;
  mpz_class x = s - y;
  std::pair<Word, Word> out{nat_to_word(x), nat_to_word(y)};

  if (cache.size() >= kCacheCap) cache.clear();
  cache.emplace(w, out);
  auto& fcache = pair_cache();
  if (fcache.size() >= kCacheCap) fcache.clear();
  fcache.emplace(PairKey{out.first, out.second}, w);
  return out;
}

Word encode_tuple(const std::vector<Word>& items) {
  Word acc = nat_word(items.size());
  for (std::size_t i = items.size(); i > 0; --i) acc = pair_words(items[i - 1], acc);
  return pair_words(nat_word(items.size()), acc);
}

std::vector<Word> decode_tuple(const Word& w) {
  auto [header, payload] = unpair_word(w);
  mpz_class k = word_to_nat(header);
  if (k > kMaxTupleArity) throw MalformedTuple("decode_tuple: arity header too large");
  std::size_t arity = k.get_ui();
  std::vector<Word> items;
  items.reserve(arity);
  Word rest = payload;
  for (std::size_t i = 0; i < arity; ++i) {
    auto [item, next] = unpair_word(rest);
    items.push_back(std::move(item));
    rest = std::move(next);
  }
  // The fold terminal repeats the arity; a disagreeing header ends up staring
  // at some other residue here.
  if (rest != header) throw MalformedTuple("decode_tuple: header disagrees with payload nesting");
  return items;
}

bool is_tuple_word(const Word& w) {
  try {
    (void)decode_tuple(w);
    return true;
  } catch (const MalformedTuple&) {
    return false;
  }
}

std::size_t tuple_arity(const Word& w) { return decode_tuple(w).size(); }

Word tuple_get(const Word& w, std::size_t i) {
  std::vector<Word> items = decode_tuple(w);
  if (i >= items.size()) throw IndexOutOfRange("tuple_get: index beyond arity");
  return items[i];
}

Word replace_items(const Word& w, const std::vector<std::pair<std::size_t, Word>>& repl) {
  std::vector<Word> items = decode_tuple(w);
  for (const auto& [idx, word] : repl) {
    if (idx >= items.size()) throw IndexOutOfRange("replace_items: index beyond arity");
    items[idx] = word;
  }
  return encode_tuple(items);
}

Word add_items(const Word& w, const std::vector<Word>& items) {
  std::vector<Word> all = decode_tuple(w);
  all.insert(all.end(), items.begin(), items.end());
  return encode_tuple(all);
}

}  // namespace virolab
