#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace spectra_lab {

// A word over 'a'..'z' in canonical form: the first occurrences of the letters appear
// in alphabetical order. A word labels a partition of the circuit steps {1..h}.
class Word {
 public:
  Word() = default;
  // Throws DomainError unless `letters` is non-empty and canonical.
  explicit Word(std::string letters);

  const std::string& letters() const noexcept { return letters_; }
  int length() const noexcept { return static_cast<int>(letters_.size()); }

  // Every letter occurs exactly twice.
  bool is_pair_matched() const noexcept;
  int half_length() const noexcept { return length() / 2; }

  // 1-based step position of the other occurrence of the letter at step `pos`.
  // Only meaningful for pair-matched words.
  int partner(int pos) const;
  bool is_first_occurrence(int pos) const;

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word& a, const Word& b) { return a.letters_ <=> b.letters_; }

 private:
  std::string letters_;
};

// All canonical pair-matched words of length 2k, sorted. k must be in 1..6.
std::vector<Word> enumerate_pair_matched(int k);

// Iterated deletion of double letters empties the word.
bool is_catalan(const Word& w);

// Each letter sits once at an odd and once at an even position.
bool is_symmetric_word(const Word& w);

}  // namespace spectra_lab
