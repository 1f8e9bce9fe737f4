#pragma once

// Words, cyclic words and conjugacy-class enumeration in a free group.
//
// Letters are signed generator indices: +i is the i-th generator, -i its
// inverse, i in 1..rank. The total order used everywhere (minimal rotations,
// length-lex enumeration, class ids) is g1 < g1^-1 < g2 < g2^-1 < ...

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace periods {

using Letter = int;

class Alphabet {
 public:
  explicit Alphabet(int rank);

  int rank() const { return rank_; }
  int size() const { return 2 * rank_; }
  bool contains(Letter l) const { return l != 0 && l >= -rank_ && l <= rank_; }

  static Letter inverse(Letter l) { return -l; }
  static int order_key(Letter l) { return 2 * ((l < 0 ? -l : l) - 1) + (l < 0 ? 1 : 0); }
  static Letter from_key(int key) { return (key % 2 == 0) ? key / 2 + 1 : -(key / 2 + 1); }

  // 'a'..'z' for generators, upper case for inverses.
  static char symbol(Letter l);
  std::string format(std::span<const Letter> letters) const;
  std::vector<Letter> parse(std::string_view text) const;
  std::string letter_order() const;

  static constexpr int kMaxRank = 26;

 private:
  int rank_;
};

class Word {
 public:
  Word() = default;

  std::span<const Letter> letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }

  Word inverse() const;
  Word power(int n) const;

  friend Word operator*(const Word& lhs, const Word& rhs);
  friend bool operator==(const Word&, const Word&) = default;

 private:
  friend Word free_reduce(const Alphabet&, std::span<const Letter>);
  friend Word reduce_unchecked(std::span<const Letter>);
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}

  std::vector<Letter> letters_;
};

// Unique freely reduced word equal to the input; throws invalid_input on a
// letter outside the alphabet.
Word free_reduce(const Alphabet& alphabet, std::span<const Letter> letters);
Word reduce_unchecked(std::span<const Letter> letters);

struct CyclicReduction {
  Word core;        // cyclically reduced
  Word conjugator;  // w = conjugator * core * conjugator^-1
};

CyclicReduction cyclic_reduce(const Word& w);

// Canonical representative of a nontrivial conjugacy class: the least
// rotation of a cyclically reduced word.
class CyclicWord {
 public:
  std::span<const Letter> letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }

  // Smallest p with letters = root^(size/p); equals size() for primitive classes.
  std::size_t period() const { return period_; }
  bool is_primitive() const { return period_ == letters_.size(); }
  std::size_t exponent() const { return letters_.size() / period_; }

  Word as_word() const;
  // Cyclic shift starting at index `start`; a cyclically reduced conjugate.
  Word rotation(std::size_t start) const;

  friend bool operator==(const CyclicWord&, const CyclicWord&) = default;

 private:
  friend CyclicWord canonical_class(const Word&);
  friend CyclicWord make_cyclic_word(std::vector<Letter>);
  CyclicWord(std::vector<Letter> letters, std::size_t period)
      : letters_(std::move(letters)), period_(period) {}

  std::vector<Letter> letters_;
  std::size_t period_ = 0;
};

// Throws empty_class for the identity.
CyclicWord canonical_class(const Word& w);

// Start index of a least rotation (Booth). For proper powers several
// indices qualify; callers compare contents, not indices.
std::size_t least_rotation(std::span<const Letter> letters);
// Smallest period of the cyclic string, via the prefix function.
std::size_t smallest_period(std::span<const Letter> letters);

// Length-lex comparison under the letter order.
bool length_lex_less(std::span<const Letter> a, std::span<const Letter> b);

enum class ClassMode { all, primitive };
const char* class_mode_name(ClassMode mode);
ClassMode parse_class_mode(std::string_view text);

struct EnumerationLimits {
  int max_len = 16;
  std::uint64_t class_budget = 10'000'000;
};

// Number of cyclically reduced words of length n, divided by n (within a
// few percent of the class count; used for budget checks only).
double estimated_class_count(const Alphabet& alphabet, int max_len);

// Unit of parallel work: all canonical classes of one length starting with
// `prefix` (one or two letters). Chunks listed in order concatenate to the
// length-lex stream.
struct ClassChunk {
  int length;
  std::vector<Letter> prefix;
};

std::vector<ClassChunk> class_chunks(const Alphabet& alphabet, int max_len, const EnumerationLimits& limits = {});

void for_each_class(const Alphabet& alphabet, const ClassChunk& chunk, ClassMode mode,
                    const std::function<void(const CyclicWord&)>& emit);

std::vector<CyclicWord> enumerate_classes(const Alphabet& alphabet, int max_len, ClassMode mode,
                                          const EnumerationLimits& limits = {});

}  // namespace periods
