#include "spectra_lab/words.hpp"

#include <algorithm>
#include <array>
#include <functional>

#include "spectra_lab/errors.hpp"

namespace spectra_lab {
namespace {

constexpr int kMaxEnumerationK = 6;

void require_pair_matched(const Word& w) {
  if (!w.is_pair_matched()) throw DomainError("word '" + w.letters() + "' is not pair-matched");
}

}  // namespace

Word::Word(std::string letters) : letters_(std::move(letters)) {
  if (letters_.empty()) throw DomainError("empty word");
  char next = 'a';
  for (const char c : letters_) {
    if (c < 'a' || c > 'z') throw DomainError("word letters must be in a..z");
    if (c > next) throw DomainError("word '" + letters_ + "' is not in canonical form");
    if (c == next) ++next;
  }
}

bool Word::is_pair_matched() const noexcept {
  if (letters_.empty() || letters_.size() % 2 != 0) return false;
  std::array<int, 26> counts{};
  for (const char c : letters_) ++counts[static_cast<std::size_t>(c - 'a')];
  return std::all_of(counts.begin(), counts.end(), [](int c) { return c == 0 || c == 2; });
}

int Word::partner(int pos) const {
  if (pos < 1 || pos > length()) throw DomainError("position out of range");
  const char c = letters_[static_cast<std::size_t>(pos - 1)];
  for (int q = 1; q <= length(); ++q) {
    if (q != pos && letters_[static_cast<std::size_t>(q - 1)] == c) return q;
  }
  throw DomainError("letter at position " + std::to_string(pos) + " has no partner");
}

bool Word::is_first_occurrence(int pos) const {
  if (pos < 1 || pos > length()) throw DomainError("position out of range");
  const char c = letters_[static_cast<std::size_t>(pos - 1)];
  return letters_.find(c) == static_cast<std::size_t>(pos - 1);
}

std::vector<Word> enumerate_pair_matched(int k) {
  if (k < 1) throw DomainError("k must be positive");
  if (k > kMaxEnumerationK) {
    throw ResourceError("pair-matched enumeration is limited to k <= 6", 0);
  }
  const int h = 2 * k;
  std::vector<Word> out;
  std::string buf(static_cast<std::size_t>(h), '\0');

  // Fill the first free slot with a fresh letter, then choose its partner slot.
  std::function<void(char)> place = [&](char letter) {
    const auto first = buf.find('\0');
    if (first == std::string::npos) {
      out.emplace_back(buf);
      return;
    }
    buf[first] = letter;
    for (std::size_t q = first + 1; q < buf.size(); ++q) {
      if (buf[q] != '\0') continue;
      buf[q] = letter;
      place(static_cast<char>(letter + 1));
      buf[q] = '\0';
    }
    buf[first] = '\0';
  };
  place('a');
  std::sort(out.begin(), out.end());
  return out;
}

bool is_catalan(const Word& w) {
  require_pair_matched(w);
  std::string stack;
  for (const char c : w.letters()) {
    if (!stack.empty() && stack.back() == c) {
      stack.pop_back();
    } else {
      stack.push_back(c);
    }
  }
  return stack.empty();
}

bool is_symmetric_word(const Word& w) {
  require_pair_matched(w);
  for (int pos = 1; pos <= w.length(); ++pos) {
    if (w.is_first_occurrence(pos) && (pos - w.partner(pos)) % 2 == 0) return false;
  }
  return true;
}

}  // namespace spectra_lab
