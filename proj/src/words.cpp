#include "finorb/words.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>

namespace finorb {

namespace {

void push_reduced(std::vector<Letter>& out, Letter l) {
  if (!out.empty() && out.back() == -l) {
    out.pop_back();
  } else {
    out.push_back(l);
  }
}

}  // namespace

FreeWord reduce(std::span<const Letter> raw) {
  std::vector<Letter> out;
  out.reserve(raw.size());
  for (Letter l : raw) {
    if (l == 0) fail(ErrorKind::malformed, "zero letter in word");
    push_reduced(out, l);
  }
  return FreeWord(std::move(out));
}

FreeWord::FreeWord(std::vector<Letter> letters) {
  letters_.reserve(letters.size());
  for (Letter l : letters) {
    if (l == 0) fail(ErrorKind::malformed, "zero letter in word");
    push_reduced(letters_, l);
  }
}

FreeWord::FreeWord(std::initializer_list<Letter> letters)
    : FreeWord(std::vector<Letter>(letters)) {}

FreeWord FreeWord::inverse() const {
  std::vector<Letter> out(letters_.rbegin(), letters_.rend());
  for (auto& l : out) l = -l;
  return FreeWord(Trusted{}, std::move(out));
}

int FreeWord::max_generator() const noexcept {
  int m = 0;
  for (Letter l : letters_) m = std::max(m, std::abs(l));
  return m;
}

FreeWord operator*(const FreeWord& a, const FreeWord& b) {
  std::vector<Letter> out = a.letters_;
  out.reserve(a.size() + b.size());
  for (Letter l : b.letters_) push_reduced(out, l);
  return FreeWord(FreeWord::Trusted{}, std::move(out));
}

std::string FreeWord::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(letters_[i]);
  }
  return s + "]";
}

FreeWord conjugate(const FreeWord& w, const FreeWord& g) {
  return g * w * g.inverse();
}

FreeWord surface_relator(int genus) {
  if (genus < 1) fail(ErrorKind::invalid_argument, "surface genus must be >= 1");
  std::vector<Letter> r;
  r.reserve(4 * static_cast<std::size_t>(genus));
  for (int i = 1; i <= genus; ++i) {
    const Letter a = 2 * i - 1;
    const Letter b = 2 * i;
    r.insert(r.end(), {a, b, -a, -b});
  }
  return FreeWord(std::move(r));
}

CyclicReduction cyclic_reduce(const FreeWord& w) {
  const auto& l = w.letters();
  std::size_t lo = 0;
  std::size_t hi = l.size();
  while (hi - lo >= 2 && l[lo] == -l[hi - 1]) {
    ++lo;
    --hi;
  }
  return {FreeWord(std::vector<Letter>(l.begin() + lo, l.begin() + hi)),
          FreeWord(std::vector<Letter>(l.begin(), l.begin() + lo))};
}

bool conjugate_in_free(const FreeWord& u, const FreeWord& v) {
  const auto cu = cyclic_reduce(u).core.letters();
  const auto cv = cyclic_reduce(v).core.letters();
  if (cu.size() != cv.size()) return false;
  if (cu.empty()) return true;
  std::vector<Letter> doubled(cu);
  doubled.insert(doubled.end(), cu.begin(), cu.end());
  return std::search(doubled.begin(), doubled.end(), cv.begin(), cv.end()) !=
         doubled.end();
}

std::vector<std::int64_t> abelianize(const FreeWord& w, int rank) {
  std::vector<std::int64_t> v(static_cast<std::size_t>(rank), 0);
  for (Letter l : w) {
    const int k = std::abs(l);
    if (k > rank) {
      fail(ErrorKind::out_of_range, "letter " + std::to_string(l) +
                                        " exceeds rank " + std::to_string(rank));
    }
    v[static_cast<std::size_t>(k - 1)] += l > 0 ? 1 : -1;
  }
  return v;
}

Presentation Presentation::free(int rank) {
  if (rank < 2) {
    fail(ErrorKind::invalid_argument,
         "free group rank must be at least 2 (got " + std::to_string(rank) + ")");
  }
  return Presentation(PresentationKind::free, rank, rank, {});
}

Presentation Presentation::surface(int genus, bool allow_low_genus) {
  if (genus < 1 || (genus < 2 && !allow_low_genus)) {
    fail(ErrorKind::invalid_argument,
         "surface genus must be at least 2 (got " + std::to_string(genus) + ")");
  }
  return Presentation(PresentationKind::surface, genus, 2 * genus,
                      {surface_relator(genus)});
}

std::string Presentation::spec() const {
  return (kind_ == PresentationKind::free ? "free:" : "surface:") +
         std::to_string(parameter_);
}

Presentation Presentation::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    fail(ErrorKind::malformed, "group spec must be free:n or surface:g, got '" + spec + "'");
  }
  const std::string head = spec.substr(0, colon);
  const std::string tail = spec.substr(colon + 1);
  int value = 0;
  auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), value);
  if (ec != std::errc() || ptr != tail.data() + tail.size()) {
    fail(ErrorKind::malformed, "bad integer in group spec '" + spec + "'");
  }
  if (head == "free") return free(value);
  if (head == "surface") return surface(value);
  fail(ErrorKind::malformed, "unknown group kind '" + head + "'");
}

void Presentation::check_word(const FreeWord& w) const {
  if (w.max_generator() > generators_) {
    fail(ErrorKind::out_of_range, "word " + w.to_string() + " uses a generator beyond " +
                                      std::to_string(generators_));
  }
}

}  // namespace finorb
