#pragma once

// Points of the representation variety Hom(Gamma, G).

#include <string>
#include <vector>

#include "finorb/autos.hpp"
#include "finorb/targets.hpp"
#include "finorb/words.hpp"

namespace finorb {

class Homomorphism {
 public:
  /// Validates image count, element normal forms and every relator.
  Homomorphism(Presentation p, TargetPtr target, std::vector<Element> images);

  const Presentation& presentation() const noexcept { return presentation_; }
  const TargetPtr& target() const noexcept { return target_; }
  const std::vector<Element>& images() const noexcept { return images_; }

  Element operator()(const FreeWord& w) const;

  /// Concatenated element keys; canonical hom order is the order of images.
  std::string key() const;

  bool is_trivial() const;

  friend bool operator==(const Homomorphism& a, const Homomorphism& b) {
    return a.images_ == b.images_;
  }
  friend bool operator<(const Homomorphism& a, const Homomorphism& b) {
    return a.images_ < b.images_;
  }

 private:
  struct Trusted {};
  Homomorphism(Trusted, Presentation p, TargetPtr target, std::vector<Element> images)
      : presentation_(std::move(p)), target_(std::move(target)), images_(std::move(images)) {}
  friend Homomorphism apply_to_hom(const Automorphism&, const Homomorphism&);
  friend Homomorphism apply_inverse_to_hom(const Automorphism&, const Homomorphism&);

  Presentation presentation_;
  TargetPtr target_;
  std::vector<Element> images_;
};

/// rho o phi: x_k -> rho(phi(x_k)).
Homomorphism apply_to_hom(const Automorphism& phi, const Homomorphism& rho);
/// rho o phi^-1.
Homomorphism apply_inverse_to_hom(const Automorphism& phi, const Homomorphism& rho);

/// Exponent-sum hom F_n -> Z (ab:1).
Homomorphism exponent_sum_hom(int n);

/// The standard generators sent to (1,0,0) and (0,1,0) in heis:k / heis:Z.
Homomorphism heisenberg_standard(const Presentation& p, TargetPtr heis);

/// Closure of the image subgroup.
SubgroupClosure image_closure(const Homomorphism& rho, std::size_t cap);

}  // namespace finorb
