#pragma once

// Free words over signed generator indices and the two presentations the
// toolkit works with: free groups F_n and closed surface groups.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "finorb/error.hpp"

namespace finorb {

using Letter = int;

/// Freely reduced word. Letter k > 0 is generator x_k, -k its inverse.
/// Construction always reduces, so equality is plain sequence equality.
class FreeWord {
 public:
  FreeWord() = default;
  explicit FreeWord(std::vector<Letter> letters);
  FreeWord(std::initializer_list<Letter> letters);

  const std::vector<Letter>& letters() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  auto begin() const noexcept { return letters_.begin(); }
  auto end() const noexcept { return letters_.end(); }

  FreeWord inverse() const;
  /// Largest |letter|, 0 for the empty word.
  int max_generator() const noexcept;

  friend FreeWord operator*(const FreeWord& a, const FreeWord& b);
  friend bool operator==(const FreeWord&, const FreeWord&) = default;
  friend auto operator<=>(const FreeWord& a, const FreeWord& b) {
    return a.letters_ <=> b.letters_;
  }

  std::string to_string() const;

 private:
  struct Trusted {};
  FreeWord(Trusted, std::vector<Letter> letters) : letters_(std::move(letters)) {}
  std::vector<Letter> letters_;
};

/// Free reduction of a raw letter sequence. Throws on a zero letter.
FreeWord reduce(std::span<const Letter> raw);

/// Conjugate g w g^-1.
FreeWord conjugate(const FreeWord& w, const FreeWord& g);

/// [a_1,b_1]...[a_g,b_g] with a_i = 2i-1, b_i = 2i and [a,b] = a b a^-1 b^-1.
FreeWord surface_relator(int genus);

struct CyclicReduction {
  FreeWord core;
  FreeWord conjugator;  // w == conjugator * core * conjugator^-1
};
CyclicReduction cyclic_reduce(const FreeWord& w);

/// Conjugacy in the ambient free group.
bool conjugate_in_free(const FreeWord& u, const FreeWord& v);

/// Exponent sums per generator, length `rank`.
std::vector<std::int64_t> abelianize(const FreeWord& w, int rank);

enum class PresentationKind { free, surface };

class Presentation {
 public:
  static Presentation free(int rank);
  /// genus >= 2; genus 1 is accepted only when allow_low_genus is set
  /// (braid and test scaffolding).
  static Presentation surface(int genus, bool allow_low_genus = false);

  PresentationKind kind() const noexcept { return kind_; }
  int generator_count() const noexcept { return generators_; }
  /// Rank for free groups, genus for surfaces.
  int parameter() const noexcept { return parameter_; }
  const std::vector<FreeWord>& relators() const noexcept { return relators_; }
  bool is_surface() const noexcept { return kind_ == PresentationKind::surface; }

  /// "free:2" / "surface:3"
  std::string spec() const;
  /// Parses the CLI mini-language "free:n" / "surface:g".
  static Presentation parse(const std::string& spec);

  /// Throws out_of_range if any letter exceeds the generator count.
  void check_word(const FreeWord& w) const;

  friend bool operator==(const Presentation& a, const Presentation& b) {
    return a.kind_ == b.kind_ && a.parameter_ == b.parameter_;
  }

 private:
  Presentation(PresentationKind kind, int parameter, int generators,
               std::vector<FreeWord> relators)
      : kind_(kind), parameter_(parameter), generators_(generators),
        relators_(std::move(relators)) {}

  PresentationKind kind_;
  int parameter_;
  int generators_;
  std::vector<FreeWord> relators_;
};

/// Product of images along w in a group G exposing identity(), multiply()
/// and inverse(). The empty word evaluates to the identity.
template <typename Group, typename Elem>
Elem evaluate(const FreeWord& w, std::span<const Elem> images, const Group& group) {
  Elem acc = group.identity();
  for (Letter l : w) {
    const auto k = static_cast<std::size_t>(l > 0 ? l : -l);
    if (k > images.size()) {
      fail(ErrorKind::out_of_range,
           "letter " + std::to_string(l) + " exceeds " +
               std::to_string(images.size()) + " generator images");
    }
    acc = l > 0 ? group.multiply(acc, images[k - 1])
                : group.multiply(acc, group.inverse(images[k - 1]));
  }
  return acc;
}

}  // namespace finorb
