#include "group_words.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace periods {

Alphabet::Alphabet(int rank) : rank_(rank) {
  if (rank < 1 || rank > kMaxRank) {
    fail(ErrorCode::invalid_input, "alphabet rank must be in 1.." + std::to_string(kMaxRank) + ", got " +
                                       std::to_string(rank));
  }
}

char Alphabet::symbol(Letter l) {
  const int idx = (l < 0 ? -l : l) - 1;
  return static_cast<char>((l < 0 ? 'A' : 'a') + idx);
}

std::string Alphabet::format(std::span<const Letter> letters) const {
  std::string out;
  out.reserve(letters.size());
  for (Letter l : letters) out.push_back(symbol(l));
  return out;
}

std::vector<Letter> Alphabet::parse(std::string_view text) const {
  std::vector<Letter> out;
  out.reserve(text.size());
  for (char c : text) {
    Letter l = 0;
    if (c >= 'a' && c <= 'z') l = c - 'a' + 1;
    if (c >= 'A' && c <= 'Z') l = -(c - 'A' + 1);
    if (!contains(l)) {
      fail(ErrorCode::invalid_input, std::string("letter '") + c + "' is not in the rank-" + std::to_string(rank_) +
                                         " alphabet");
    }
    out.push_back(l);
  }
  return out;
}

std::string Alphabet::letter_order() const {
  std::string out;
  for (int key = 0; key < size(); ++key) {
    if (key) out += '<';
    out += symbol(from_key(key));
  }
  return out;
}

Word reduce_unchecked(std::span<const Letter> letters) {
  std::vector<Letter> stack;
  stack.reserve(letters.size());
  for (Letter l : letters) {
    if (!stack.empty() && stack.back() == -l) {
      stack.pop_back();
    } else {
      stack.push_back(l);
    }
  }
  return Word(std::move(stack));
}

Word free_reduce(const Alphabet& alphabet, std::span<const Letter> letters) {
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (!alphabet.contains(letters[i])) {
      fail(ErrorCode::invalid_input, "letter index " + std::to_string(letters[i]) + " at position " +
                                         std::to_string(i) + " is outside the rank-" +
                                         std::to_string(alphabet.rank()) + " alphabet");
    }
  }
  return reduce_unchecked(letters);
}

Word Word::inverse() const {
  std::vector<Letter> out(letters_.rbegin(), letters_.rend());
  for (auto& l : out) l = -l;
  return Word(std::move(out));
}

Word Word::power(int n) const {
  if (n < 0) return inverse().power(-n);
  std::vector<Letter> raw;
  raw.reserve(letters_.size() * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) raw.insert(raw.end(), letters_.begin(), letters_.end());
  return reduce_unchecked(raw);
}

Word operator*(const Word& lhs, const Word& rhs) {
  std::vector<Letter> raw(lhs.letters_);
  raw.insert(raw.end(), rhs.letters_.begin(), rhs.letters_.end());
  return reduce_unchecked(raw);
}

CyclicReduction cyclic_reduce(const Word& w) {
  auto letters = w.letters();
  std::size_t lo = 0;
  std::size_t hi = letters.size();
  while (hi - lo >= 2 && letters[lo] == -letters[hi - 1]) {
    ++lo;
    --hi;
  }
  return {reduce_unchecked(letters.subspan(lo, hi - lo)), reduce_unchecked(letters.first(lo))};
}

std::size_t least_rotation(std::span<const Letter> letters) {
  // Booth's algorithm over the doubled string, comparing order keys.
  const std::size_t n = letters.size();
  if (n == 0) return 0;
  auto key = [&](std::size_t i) { return Alphabet::order_key(letters[i % n]); };
  std::vector<std::ptrdiff_t> fail_link(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    std::ptrdiff_t i = fail_link[j - k - 1];
    while (i != -1 && key(j) != key(k + static_cast<std::size_t>(i) + 1)) {
      if (key(j) < key(k + static_cast<std::size_t>(i) + 1)) k = j - static_cast<std::size_t>(i) - 1;
      i = fail_link[static_cast<std::size_t>(i)];
    }
    if (i == -1 && key(j) != key(k)) {
      if (key(j) < key(k)) k = j;
      fail_link[j - k] = -1;
    } else {
      fail_link[j - k] = i + 1;
    }
  }
  return k % n;
}

std::size_t smallest_period(std::span<const Letter> letters) {
  const std::size_t n = letters.size();
  if (n == 0) return 0;
  std::vector<std::size_t> pi(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t j = pi[i - 1];
    while (j > 0 && letters[i] != letters[j]) j = pi[j - 1];
    if (letters[i] == letters[j]) ++j;
    pi[i] = j;
  }
  const std::size_t p = n - pi[n - 1];
  return (n % p == 0) ? p : n;
}

bool length_lex_less(std::span<const Letter> a, std::span<const Letter> b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int ka = Alphabet::order_key(a[i]);
    const int kb = Alphabet::order_key(b[i]);
    if (ka != kb) return ka < kb;
  }
  return false;
}

Word CyclicWord::as_word() const { return reduce_unchecked(letters_); }

Word CyclicWord::rotation(std::size_t start) const {
  std::vector<Letter> out;
  out.reserve(letters_.size());
  for (std::size_t i = 0; i < letters_.size(); ++i) out.push_back(letters_[(start + i) % letters_.size()]);
  return reduce_unchecked(out);
}

CyclicWord make_cyclic_word(std::vector<Letter> letters) {
  const std::size_t p = smallest_period(letters);
  return CyclicWord(std::move(letters), p);
}

CyclicWord canonical_class(const Word& w) {
  auto core = cyclic_reduce(w).core;
  if (core.empty()) fail(ErrorCode::empty_class, "the identity element has no conjugacy-class period");
  auto letters = core.letters();
  const std::size_t start = least_rotation(letters);
  std::vector<Letter> rotated;
  rotated.reserve(letters.size());
  for (std::size_t i = 0; i < letters.size(); ++i) rotated.push_back(letters[(start + i) % letters.size()]);
  return make_cyclic_word(std::move(rotated));
}

const char* class_mode_name(ClassMode mode) { return mode == ClassMode::all ? "all" : "primitive"; }

ClassMode parse_class_mode(std::string_view text) {
  if (text == "all") return ClassMode::all;
  if (text == "primitive") return ClassMode::primitive;
  fail(ErrorCode::invalid_config, "mode must be 'all' or 'primitive', got '" + std::string(text) + "'");
}

double estimated_class_count(const Alphabet& alphabet, int max_len) {
  const double q = 2.0 * alphabet.rank() - 1.0;
  const double r = alphabet.rank();
  double total = 0.0;
  for (int n = 1; n <= max_len; ++n) {
    const double cyclically_reduced = std::pow(q, n) + 1.0 + (r - 1.0) * (1.0 + ((n % 2 == 0) ? 1.0 : -1.0));
    total += cyclically_reduced / n;
  }
  return total;
}

std::vector<ClassChunk> class_chunks(const Alphabet& alphabet, int max_len, const EnumerationLimits& limits) {
  if (max_len < 1) fail(ErrorCode::invalid_input, "max_len must be at least 1");
  if (max_len > limits.max_len) {
    fail(ErrorCode::resource_limit, "max_len " + std::to_string(max_len) + " exceeds the safety bound " +
                                        std::to_string(limits.max_len));
  }
  const double estimate = estimated_class_count(alphabet, max_len);
  if (estimate > static_cast<double>(limits.class_budget)) {
    fail(ErrorCode::resource_limit, "about " + std::to_string(static_cast<std::uint64_t>(estimate)) +
                                        " classes up to length " + std::to_string(max_len) +
                                        " exceed the class budget " + std::to_string(limits.class_budget));
  }
  std::vector<ClassChunk> chunks;
  for (int n = 1; n <= max_len; ++n) {
    for (int key = 0; key < alphabet.size(); ++key) {
      const Letter first = Alphabet::from_key(key);
      if (n == 1) {
        chunks.push_back({n, {first}});
        continue;
      }
      for (int key2 = key; key2 < alphabet.size(); ++key2) {
        const Letter second = Alphabet::from_key(key2);
        if (second == -first) continue;
        chunks.push_back({n, {first, second}});
      }
    }
  }
  return chunks;
}

namespace {

// A cyclically reduced word is canonical iff no rotation is smaller.
bool is_least_rotation(std::span<const Letter> w) {
  const std::size_t start = least_rotation(w);
  if (start == 0) return true;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] != w[(start + i) % w.size()]) return false;
  }
  return true;
}

}  // namespace

void for_each_class(const Alphabet& alphabet, const ClassChunk& chunk, ClassMode mode,
                    const std::function<void(const CyclicWord&)>& emit) {
  const int n = chunk.length;
  const auto fixed = static_cast<int>(chunk.prefix.size());
  if (fixed < 1 || fixed > n) fail(ErrorCode::invalid_input, "chunk prefix length must be in 1..length");
  const int first_key = Alphabet::order_key(chunk.prefix[0]);
  std::vector<Letter> w(static_cast<std::size_t>(n));
  for (int i = 0; i < fixed; ++i) {
    const Letter l = chunk.prefix[static_cast<std::size_t>(i)];
    if (!alphabet.contains(l) || Alphabet::order_key(l) < first_key || (i > 0 && l == -w[static_cast<std::size_t>(i - 1)])) {
      return;
    }
    w[static_cast<std::size_t>(i)] = l;
  }

  // The least rotation starts with its smallest letter, so every later
  // letter has key >= first_key.
  std::function<void(int)> extend = [&](int pos) {
    if (pos == n) {
      if (n > 1 && w[static_cast<std::size_t>(n - 1)] == -w[0]) return;
      if (!is_least_rotation(w)) return;
      const std::size_t p = smallest_period(w);
      if (mode == ClassMode::primitive && p != w.size()) return;
      emit(make_cyclic_word(w));
      return;
    }
    const Letter prev = w[static_cast<std::size_t>(pos - 1)];
    for (int key = first_key; key < alphabet.size(); ++key) {
      const Letter l = Alphabet::from_key(key);
      if (l == -prev) continue;
      w[static_cast<std::size_t>(pos)] = l;
      extend(pos + 1);
    }
  };
  extend(fixed);
}

std::vector<CyclicWord> enumerate_classes(const Alphabet& alphabet, int max_len, ClassMode mode,
                                          const EnumerationLimits& limits) {
  std::vector<CyclicWord> out;
  for (const auto& chunk : class_chunks(alphabet, max_len, limits)) {
    for_each_class(alphabet, chunk, mode, [&](const CyclicWord& c) { out.push_back(c); });
  }
  return out;
}

}  // namespace periods
