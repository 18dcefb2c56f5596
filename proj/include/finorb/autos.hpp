#pragma once

// Automorphisms of free and surface groups as generator-image maps with a
// certified inverse, and the catalogs that act on representation varieties.
//
// compose(phi, psi) is phi after psi: x_k -> phi(psi(x_k)). The induced map on
// H_1 has column k equal to the abelianized image of x_k, so
// induced_h1(compose(phi, psi)) == induced_h1(phi) * induced_h1(psi).

#include <string>
#include <vector>

#include "finorb/linalg.hpp"
#include "finorb/words.hpp"

namespace finorb {

struct Endo {
  Presentation presentation;
  std::vector<FreeWord> images;
  std::string label;

  /// Substitutes images into w.
  FreeWord apply(const FreeWord& w) const;
  bool is_identity() const;
  std::size_t max_image_length() const;
};

/// e after f.
Endo compose(const Endo& e, const Endo& f);

class Automorphism {
 public:
  /// Certifies forward o backward == backward o forward == id and, for
  /// surfaces, that the relator goes to a free conjugate of itself or its
  /// inverse. Throws catalog on failure.
  Automorphism(Endo forward, Endo backward, std::string label);

  static Automorphism identity(const Presentation& p);

  const Presentation& presentation() const noexcept { return forward_.presentation; }
  const Endo& forward() const noexcept { return forward_; }
  const Endo& backward() const noexcept { return backward_; }
  const std::string& label() const noexcept { return label_; }
  FreeWord apply(const FreeWord& w) const { return forward_.apply(w); }

  Automorphism inverse() const;

  /// Equality of reduced forward images; labels are cosmetic.
  friend bool operator==(const Automorphism& a, const Automorphism& b) {
    return a.presentation() == b.presentation() && a.forward_.images == b.forward_.images;
  }

 private:
  struct Unchecked {};
  Automorphism(Unchecked, Endo forward, Endo backward, std::string label)
      : forward_(std::move(forward)), backward_(std::move(backward)), label_(std::move(label)) {}
  friend Automorphism compose(const Automorphism&, const Automorphism&);

  Endo forward_;
  Endo backward_;
  std::string label_;
};

/// phi after psi, re-certified.
Automorphism compose(const Automorphism& phi, const Automorphism& psi);

/// Adjacent transpositions P_i, inversion x_1 -> x_1^-1, and x_1 -> x_2 x_1.
std::vector<Automorphism> nielsen_generators(int n);

/// Twist-induced maps Ta_i (b_i -> b_i a_i), Tb_i (a_i -> a_i b_i) and the
/// cross-handle twists Tc_i linking handles i and i+1. All fix the relator
/// exactly; each is certified when the catalog is built.
std::vector<Automorphism> surface_mcg_generators(int genus);

/// sigma_i: x_i -> x_i x_{i+1} x_i^-1, x_{i+1} -> x_i.
std::vector<Automorphism> braid_generators(int n);

/// x -> g x g^-1.
Automorphism inner_automorphism(const Presentation& p, const FreeWord& g);

/// Square matrix of abelianized generator images.
IntMatrix induced_h1(const Automorphism& phi);
IntMatrix induced_h1(const Endo& e);

/// "nielsen" | "mcg" | "braid" | "inner" | "file:<path>" for the given group.
std::vector<Automorphism> catalog_from_spec(const std::string& spec, const Presentation& p);

}  // namespace finorb
