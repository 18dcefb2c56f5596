#include "finorb/autos.hpp"

#include <algorithm>

#include "finorb/error.hpp"
#include "finorb/json_io.hpp"

namespace finorb {

FreeWord Endo::apply(const FreeWord& w) const {
  std::vector<Letter> raw;
  for (Letter l : w) {
    const auto k = static_cast<std::size_t>(l > 0 ? l : -l);
    if (k > images.size()) fail(ErrorKind::out_of_range, "letter " + std::to_string(l) + " out of range");
    const FreeWord& img = images[k - 1];
    if (l > 0) {
      raw.insert(raw.end(), img.begin(), img.end());
    } else {
      for (auto it = img.letters().rbegin(); it != img.letters().rend(); ++it) raw.push_back(-*it);
    }
  }
  return reduce(raw);
}

bool Endo::is_identity() const {
  for (std::size_t k = 0; k < images.size(); ++k) {
    if (images[k].size() != 1 || images[k][0] != static_cast<Letter>(k + 1)) return false;
  }
  return true;
}

std::size_t Endo::max_image_length() const {
  std::size_t m = 0;
  for (const auto& w : images) m = std::max(m, w.size());
  return m;
}

Endo compose(const Endo& e, const Endo& f) {
  if (!(e.presentation == f.presentation))
    fail(ErrorKind::invalid_argument, "composing endomorphisms of different groups");
  Endo r{e.presentation, {}, e.label + "*" + f.label};
  r.images.reserve(f.images.size());
  for (const auto& w : f.images) r.images.push_back(e.apply(w));
  return r;
}

namespace {

void check_shape(const Endo& e) {
  const auto n = static_cast<std::size_t>(e.presentation.generator_count());
  if (e.images.size() != n) {
    fail(ErrorKind::catalog, "'" + e.label + "' has " + std::to_string(e.images.size()) +
                                 " images for " + std::to_string(n) + " generators");
  }
  for (const auto& w : e.images) e.presentation.check_word(w);
}

void certify(const Endo& fwd, const Endo& bwd, const std::string& label) {
  check_shape(fwd);
  check_shape(bwd);
  if (!compose(fwd, bwd).is_identity() || !compose(bwd, fwd).is_identity())
    fail(ErrorKind::catalog, "'" + label + "': supplied inverse does not invert");
  if (fwd.presentation.is_surface()) {
    const FreeWord& r = fwd.presentation.relators().front();
    const FreeWord image = fwd.apply(r);
    if (!conjugate_in_free(image, r) && !conjugate_in_free(image, r.inverse()))
      fail(ErrorKind::catalog, "'" + label + "' does not preserve the surface relator up to conjugacy");
  }
}

Endo endo_from(const Presentation& p, std::vector<FreeWord> images, std::string label) {
  return Endo{p, std::move(images), std::move(label)};
}

std::vector<FreeWord> identity_images(const Presentation& p) {
  std::vector<FreeWord> ims;
  for (int k = 1; k <= p.generator_count(); ++k) ims.push_back(FreeWord{k});
  return ims;
}

}  // namespace

Automorphism::Automorphism(Endo forward, Endo backward, std::string label)
    : forward_(std::move(forward)), backward_(std::move(backward)), label_(std::move(label)) {
  certify(forward_, backward_, label_);
}

Automorphism Automorphism::identity(const Presentation& p) {
  auto ims = identity_images(p);
  return Automorphism(Unchecked{}, Endo{p, ims, "id"}, Endo{p, ims, "id"}, "id");
}

Automorphism Automorphism::inverse() const {
  std::string l = label_ + "^-1";
  if (label_.size() > 3 && label_.ends_with("^-1")) l = label_.substr(0, label_.size() - 3);
  return Automorphism(Unchecked{}, backward_, forward_, l);
}

Automorphism compose(const Automorphism& phi, const Automorphism& psi) {
  Endo f = compose(phi.forward_, psi.forward_);
  Endo b = compose(psi.backward_, phi.backward_);
  std::string label = phi.label_ + "*" + psi.label_;
  f.label = b.label = label;
  return Automorphism(std::move(f), std::move(b), std::move(label));
}

std::vector<Automorphism> nielsen_generators(int n) {
  if (n < 2) fail(ErrorKind::invalid_argument, "Nielsen generators need rank >= 2");
  const Presentation p = Presentation::free(n);
  std::vector<Automorphism> out;
  for (int i = 1; i < n; ++i) {
    auto ims = identity_images(p);
    std::swap(ims[i - 1], ims[i]);
    const std::string l = "P" + std::to_string(i);
    out.emplace_back(endo_from(p, ims, l), endo_from(p, ims, l), l);
  }
  {
    auto ims = identity_images(p);
    ims[0] = FreeWord{-1};
    out.emplace_back(endo_from(p, ims, "I1"), endo_from(p, ims, "I1"), "I1");
  }
  {
    auto fwd = identity_images(p);
    auto bwd = identity_images(p);
    fwd[0] = FreeWord{2, 1};
    bwd[0] = FreeWord{-2, 1};
    out.emplace_back(endo_from(p, fwd, "M21"), endo_from(p, bwd, "M21^-1"), "M21");
  }
  return out;
}

std::vector<Automorphism> braid_generators(int n) {
  if (n < 2) fail(ErrorKind::invalid_argument, "braid generators need n >= 2");
  const Presentation p = Presentation::free(n);
  std::vector<Automorphism> out;
  for (int i = 1; i < n; ++i) {
    auto fwd = identity_images(p);
    auto bwd = identity_images(p);
    fwd[i - 1] = FreeWord{i, i + 1, -i};
    fwd[i] = FreeWord{i};
    bwd[i - 1] = FreeWord{i + 1};
    bwd[i] = FreeWord{-(i + 1), i, i + 1};
    const std::string l = "s" + std::to_string(i);
    out.emplace_back(endo_from(p, fwd, l), endo_from(p, bwd, l + "^-1"), l);
  }
  return out;
}

Automorphism inner_automorphism(const Presentation& p, const FreeWord& g) {
  p.check_word(g);
  std::vector<FreeWord> fwd, bwd;
  const FreeWord gi = g.inverse();
  for (int k = 1; k <= p.generator_count(); ++k) {
    fwd.push_back(g * FreeWord{k} * gi);
    bwd.push_back(gi * FreeWord{k} * g);
  }
  const std::string l = "c[" + g.to_string() + "]";
  return Automorphism(endo_from(p, fwd, l), endo_from(p, bwd, l + "^-1"), l);
}

IntMatrix induced_h1(const Endo& e) {
  const int n = e.presentation.generator_count();
  IntMatrix m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const auto col = abelianize(e.images[static_cast<std::size_t>(k)], n);
    for (int i = 0; i < n; ++i)
      m(static_cast<std::size_t>(i), static_cast<std::size_t>(k)) = static_cast<long>(col[static_cast<std::size_t>(i)]);
  }
  return m;
}

IntMatrix induced_h1(const Automorphism& phi) { return induced_h1(phi.forward()); }

std::vector<Automorphism> catalog_from_spec(const std::string& spec, const Presentation& p) {
  if (spec == "nielsen") {
    if (p.is_surface()) fail(ErrorKind::invalid_argument, "nielsen catalog needs a free group");
    return nielsen_generators(p.parameter());
  }
  if (spec == "braid") {
    if (p.is_surface()) fail(ErrorKind::invalid_argument, "braid catalog needs a free group");
    return braid_generators(p.parameter());
  }
  if (spec == "mcg") {
    if (!p.is_surface()) fail(ErrorKind::invalid_argument, "mcg catalog needs a surface group");
    return surface_mcg_generators(p.parameter());
  }
  if (spec == "inner") {
    std::vector<Automorphism> out;
    for (int k = 1; k <= p.generator_count(); ++k) out.push_back(inner_automorphism(p, FreeWord{k}));
    return out;
  }
  if (spec.rfind("file:", 0) == 0) {
    auto cat = load_catalog(spec.substr(5));
    for (const auto& a : cat) {
      if (!(a.presentation() == p))
        fail(ErrorKind::invalid_argument, "catalog file is for " + a.presentation().spec() +
                                              ", not " + p.spec());
    }
    return cat;
  }
  fail(ErrorKind::malformed, "unknown generator set '" + spec + "'");
}

}  // namespace finorb
