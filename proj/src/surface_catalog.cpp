// Mapping-class catalog for closed surfaces.
//
// Entries are written in handle-relative letters: 1 = a_i, 2 = b_i,
// 3 = a_{i+1}, 4 = b_{i+1}. Generators not mentioned are fixed. The tables
// below are the source of truth; Automorphism's constructor certifies each
// instantiated entry (inverse and relator conjugacy) so a typo fails at load.
//
// On H_1: Ta_i sends b_i -> b_i + a_i, Tb_i sends a_i -> a_i + b_i, and Tc_i
// is the transvection along a_{i+1} - b_i. Every entry fixes the relator
// exactly, not just up to conjugacy.

#include <utility>

#include "finorb/autos.hpp"
#include "finorb/error.hpp"

namespace finorb {

namespace {

struct Rule {
  int generator;                       // handle-relative
  std::vector<int> image;              // handle-relative letters
};

struct Entry {
  const char* name;
  bool spans_two_handles;
  std::vector<Rule> forward;
  std::vector<Rule> backward;
};

const std::vector<Entry>& table() {
  static const std::vector<Entry> entries = {
      {"Ta", false, {{2, {2, 1}}}, {{2, {2, -1}}}},
      {"Tb", false, {{1, {1, 2}}}, {{1, {1, -2}}}},
      {"Tc",
       true,
       {{1, {1, -2, 3}}, {2, {-3, 2, 3}}, {3, {-3, 2, 3, -2, 3}}, {4, {4, -2, 3}}},
       {{1, {1, -3, 2}}, {2, {-2, 3, 2, -3, 2}}, {3, {-2, 3, 2}}, {4, {4, -3, 2}}}},
  };
  return entries;
}

Endo instantiate(const Presentation& p, const std::vector<Rule>& rules, int handle,
                 const std::string& label) {
  const int offset = 2 * (handle - 1);
  std::vector<FreeWord> images;
  for (int k = 1; k <= p.generator_count(); ++k) images.push_back(FreeWord{k});
  for (const auto& r : rules) {
    std::vector<Letter> w;
    for (int l : r.image) w.push_back(l > 0 ? l + offset : l - offset);
    images[static_cast<std::size_t>(r.generator + offset - 1)] = FreeWord(std::move(w));
  }
  return Endo{p, std::move(images), label};
}

}  // namespace

std::vector<Automorphism> surface_mcg_generators(int genus) {
  const Presentation p = Presentation::surface(genus, /*allow_low_genus=*/true);
  std::vector<Automorphism> out;
  for (const auto& e : table()) {
    const int last = e.spans_two_handles ? genus - 1 : genus;
    for (int h = 1; h <= last; ++h) {
      const std::string l = std::string(e.name) + std::to_string(h);
      out.emplace_back(instantiate(p, e.forward, h, l), instantiate(p, e.backward, h, l + "^-1"),
                       l);
    }
  }
  return out;
}

}  // namespace finorb
