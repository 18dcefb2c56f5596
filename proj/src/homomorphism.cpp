#include "finorb/homomorphism.hpp"

#include "finorb/error.hpp"

namespace finorb {

Homomorphism::Homomorphism(Presentation p, TargetPtr target, std::vector<Element> images)
    : presentation_(std::move(p)), target_(std::move(target)), images_(std::move(images)) {
  if (images_.size() != static_cast<std::size_t>(presentation_.generator_count())) {
    fail(ErrorKind::malformed, "hom needs " + std::to_string(presentation_.generator_count()) +
                                   " images, got " + std::to_string(images_.size()));
  }
  for (const auto& e : images_) target_->validate(e);
  const Element id = target_->identity();
  for (const auto& r : presentation_.relators()) {
    if (!((*this)(r) == id)) fail(ErrorKind::malformed, "relator does not map to the identity");
  }
}

Element Homomorphism::operator()(const FreeWord& w) const {
  return evaluate(w, std::span<const Element>(images_), *target_);
}

std::string Homomorphism::key() const {
  std::string k;
  for (const auto& e : images_) {
    k += e.key();
    k += '|';
  }
  return k;
}

bool Homomorphism::is_trivial() const {
  const Element id = target_->identity();
  for (const auto& e : images_)
    if (!(e == id)) return false;
  return true;
}

Homomorphism apply_to_hom(const Automorphism& phi, const Homomorphism& rho) {
  if (!(phi.presentation() == rho.presentation()))
    fail(ErrorKind::invalid_argument, "automorphism and hom live on different groups");
  std::vector<Element> ims;
  ims.reserve(rho.images().size());
  for (const auto& w : phi.forward().images) ims.push_back(rho(w));
  return Homomorphism(Homomorphism::Trusted{}, rho.presentation(), rho.target(), std::move(ims));
}

Homomorphism apply_inverse_to_hom(const Automorphism& phi, const Homomorphism& rho) {
  if (!(phi.presentation() == rho.presentation()))
    fail(ErrorKind::invalid_argument, "automorphism and hom live on different groups");
  std::vector<Element> ims;
  ims.reserve(rho.images().size());
  for (const auto& w : phi.backward().images) ims.push_back(rho(w));
  return Homomorphism(Homomorphism::Trusted{}, rho.presentation(), rho.target(), std::move(ims));
}

Homomorphism exponent_sum_hom(int n) {
  auto t = TargetGroup::abelian_free(1);
  std::vector<Element> ims(static_cast<std::size_t>(n), Element{{mpz_class(1)}});
  return Homomorphism(Presentation::free(n), t, std::move(ims));
}

Homomorphism heisenberg_standard(const Presentation& p, TargetPtr heis) {
  if (p.generator_count() < 2) fail(ErrorKind::invalid_argument, "need two generators");
  std::vector<Element> ims(static_cast<std::size_t>(p.generator_count()), heis->identity());
  ims[0] = Element{{1, 0, 0}};
  ims[1] = Element{{0, 1, 0}};
  if (p.is_surface())
    fail(ErrorKind::invalid_argument, "standard Heisenberg images do not satisfy the surface relator");
  return Homomorphism(p, std::move(heis), std::move(ims));
}

SubgroupClosure image_closure(const Homomorphism& rho, std::size_t cap) {
  return closure(std::span<const Element>(rho.images()), rho.target(), cap);
}

}  // namespace finorb
