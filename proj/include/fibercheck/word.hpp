#pragma once

#include <cstdlib>
#include <vector>

namespace fibercheck {

// A word in a free group.  Letters are nonzero ints: +j stands for the j-th
// generator (1-based), -j for its inverse.  Words are kept freely reduced at
// all times; construction reduces.
class Word {
 public:
  Word() = default;

  explicit Word(std::vector<int> letters) : letters_(std::move(letters)) {
    reduce();
  }

  const std::vector<int>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }
  std::size_t length() const { return letters_.size(); }

  Word inverse() const {
    std::vector<int> inv;
    inv.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) inv.push_back(-*it);
    Word w;
    w.letters_ = std::move(inv);  // inverse of a reduced word is reduced
    return w;
  }

  // Concatenation followed by free reduction.
  Word operator*(const Word& rhs) const {
    std::vector<int> cat = letters_;
    cat.insert(cat.end(), rhs.letters_.begin(), rhs.letters_.end());
    return Word(std::move(cat));
  }

  // Largest generator index mentioned, 0 for the empty word.
  int max_generator() const {
    int m = 0;
    for (int a : letters_)
      if (std::abs(a) > m) m = std::abs(a);
    return m;
  }

  bool operator==(const Word& rhs) const { return letters_ == rhs.letters_; }
  bool operator!=(const Word& rhs) const { return letters_ != rhs.letters_; }
  bool operator<(const Word& rhs) const { return letters_ < rhs.letters_; }

 private:
  void reduce() {
    std::vector<int> out;
    out.reserve(letters_.size());
    for (int a : letters_) {
      if (!out.empty() && out.back() == -a)
        out.pop_back();
      else
        out.push_back(a);
    }
    letters_ = std::move(out);
  }

  std::vector<int> letters_;
};

inline std::vector<int> free_reduce(std::vector<int> letters) {
  return Word(std::move(letters)).letters();
}

}  // namespace fibercheck
