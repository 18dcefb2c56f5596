#include "finorb/linalg.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>
#include <utility>

#include "finorb/error.hpp"

namespace finorb {

template <typename S>
Matrix<S>::Matrix(std::initializer_list<std::initializer_list<long>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  entries_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) fail(ErrorKind::invalid_argument, "ragged matrix literal");
    for (long v : r) entries_.emplace_back(v);
  }
}

template <typename S>
Matrix<S> Matrix<S>::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

template <typename S>
Matrix<S> Matrix<S>::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

template <typename S>
Matrix<S> Matrix<S>::column(std::size_t j) const {
  return columns(j, 1);
}

template <typename S>
Matrix<S> Matrix<S>::columns(std::size_t first, std::size_t count) const {
  if (first + count > cols_) fail(ErrorKind::out_of_range, "column range");
  Matrix c(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < count; ++j) c(i, j) = (*this)(i, first + j);
  return c;
}

template <typename S>
Matrix<S> Matrix<S>::rows_range(std::size_t first, std::size_t count) const {
  if (first + count > rows_) fail(ErrorKind::out_of_range, "row range");
  Matrix r(count, cols_);
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(first + i, j);
  return r;
}

template <typename S>
bool Matrix<S>::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const S& v) { return v == 0; });
}

template <typename S>
S Matrix<S>::trace() const {
  if (!is_square()) fail(ErrorKind::invalid_argument, "trace of non-square matrix");
  S t = 0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

template <typename S>
Matrix<S> operator*(const Matrix<S>& a, const Matrix<S>& b) {
  if (a.cols() != b.rows()) fail(ErrorKind::invalid_argument, "matrix product shape mismatch");
  Matrix<S> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const S& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

template <typename S>
Matrix<S> operator+(const Matrix<S>& a, const Matrix<S>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(ErrorKind::invalid_argument, "matrix sum shape mismatch");
  Matrix<S> c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

template <typename S>
Matrix<S> operator-(const Matrix<S>& a, const Matrix<S>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(ErrorKind::invalid_argument, "matrix difference shape mismatch");
  Matrix<S> c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

template <typename S>
Matrix<S> hstack(std::span<const Matrix<S>> blocks, std::size_t rows) {
  std::size_t cols = 0;
  for (const auto& b : blocks) {
    if (b.rows() != rows) fail(ErrorKind::invalid_argument, "hstack row mismatch");
    cols += b.cols();
  }
  Matrix<S> out(rows, cols);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, off + j) = b(i, j);
    off += b.cols();
  }
  return out;
}

template <typename S>
Matrix<S> vstack(std::span<const Matrix<S>> blocks, std::size_t cols) {
  std::size_t rows = 0;
  for (const auto& b : blocks) {
    if (b.cols() != cols) fail(ErrorKind::invalid_argument, "vstack column mismatch");
    rows += b.rows();
  }
  Matrix<S> out(rows, cols);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < cols; ++j) out(off + i, j) = b(i, j);
    off += b.rows();
  }
  return out;
}

template class Matrix<mpz_class>;
template class Matrix<mpq_class>;
template IntMatrix operator*(const IntMatrix&, const IntMatrix&);
template RatMatrix operator*(const RatMatrix&, const RatMatrix&);
template IntMatrix operator+(const IntMatrix&, const IntMatrix&);
template RatMatrix operator+(const RatMatrix&, const RatMatrix&);
template IntMatrix operator-(const IntMatrix&, const IntMatrix&);
template RatMatrix operator-(const RatMatrix&, const RatMatrix&);
template IntMatrix hstack(std::span<const IntMatrix>, std::size_t);
template RatMatrix hstack(std::span<const RatMatrix>, std::size_t);
template IntMatrix vstack(std::span<const IntMatrix>, std::size_t);
template RatMatrix vstack(std::span<const RatMatrix>, std::size_t);

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = mpq_class(m(i, j));
  return r;
}

bool is_integral(const RatMatrix& m) {
  return std::all_of(m.entries().begin(), m.entries().end(),
                     [](const mpq_class& q) { return q.get_den() == 1; });
}

IntMatrix to_integer(const RatMatrix& m) {
  if (!is_integral(m)) fail(ErrorKind::consistency, "rational matrix is not integral");
  IntMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).get_num();
  return r;
}

std::string to_string(const IntMatrix& m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j).get_str();
    os << "]";
  }
  os << "]";
  return os.str();
}

mpz_class determinant(const IntMatrix& m) {
  if (!m.is_square()) fail(ErrorKind::invalid_argument, "determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  // Fraction-free Bareiss elimination.
  IntMatrix a = m;
  int sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t r = k + 1;
      while (r < n && a(r, k) == 0) ++r;
      if (r == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(r, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      }
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

bool is_unimodular(const IntMatrix& m) {
  if (!m.is_square()) return false;
  const mpz_class d = determinant(m);
  return d == 1 || d == -1;
}

IntMatrix reduce_rows(const IntMatrix& m, std::span<const mpz_class> moduli) {
  if (moduli.size() != m.rows()) fail(ErrorKind::invalid_argument, "modulus count != rows");
  IntMatrix r = m;
  for (std::size_t i = 0; i < r.rows(); ++i) {
    if (moduli[i] == 0) continue;
    for (std::size_t j = 0; j < r.cols(); ++j) {
      mpz_class v;
      mpz_fdiv_r(v.get_mpz_t(), r(i, j).get_mpz_t(), moduli[i].get_mpz_t());
      r(i, j) = v;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

class SnfWorker {
 public:
  explicit SnfWorker(const IntMatrix& a)
      : a_(a), u_(IntMatrix::identity(a.rows())), v_(IntMatrix::identity(a.cols())),
        ui_(IntMatrix::identity(a.rows())), vi_(IntMatrix::identity(a.cols())) {}

  void run() {
    const std::size_t m = a_.rows();
    const std::size_t n = a_.cols();
    for (std::size_t t = 0; t < std::min(m, n); ++t) {
      while (true) {
        std::size_t pi = 0, pj = 0;
        if (!find_pivot(t, pi, pj)) return;
        if (pi != t) swap_rows(t, pi);
        if (pj != t) swap_cols(t, pj);

        bool residue = false;
        for (std::size_t i = t + 1; i < m; ++i) {
          if (a_(i, t) == 0) continue;
          mpz_class q;
          mpz_tdiv_q(q.get_mpz_t(), a_(i, t).get_mpz_t(), a_(t, t).get_mpz_t());
          if (q != 0) add_row(i, t, -q);
          if (a_(i, t) != 0) residue = true;
        }
        for (std::size_t j = t + 1; j < n; ++j) {
          if (a_(t, j) == 0) continue;
          mpz_class q;
          mpz_tdiv_q(q.get_mpz_t(), a_(t, j).get_mpz_t(), a_(t, t).get_mpz_t());
          if (q != 0) add_col(j, t, -q);
          if (a_(t, j) != 0) residue = true;
        }
        if (residue) continue;

        // Trailing block must be divisible by the pivot.
        bool clean = true;
        for (std::size_t i = t + 1; i < m && clean; ++i) {
          for (std::size_t j = t + 1; j < n; ++j) {
            if (!mpz_divisible_p(a_(i, j).get_mpz_t(), a_(t, t).get_mpz_t())) {
              add_row(t, i, 1);
              clean = false;
              break;
            }
          }
        }
        if (clean) break;
      }
      if (a_(t, t) < 0) negate_row(t);
    }
  }

  SNFWithInverses result() && {
    return {std::move(u_), std::move(a_), std::move(v_), std::move(ui_), std::move(vi_)};
  }

 private:
  bool find_pivot(std::size_t t, std::size_t& pi, std::size_t& pj) const {
    bool found = false;
    mpz_class best;
    for (std::size_t i = t; i < a_.rows(); ++i) {
      for (std::size_t j = t; j < a_.cols(); ++j) {
        if (a_(i, j) == 0) continue;
        mpz_class v = abs(a_(i, j));
        if (!found || v < best) {
          found = true;
          best = v;
          pi = i;
          pj = j;
        }
      }
    }
    return found;
  }

  // row_i += c * row_j
  void add_row(std::size_t i, std::size_t j, const mpz_class& c) {
    for (std::size_t k = 0; k < a_.cols(); ++k) a_(i, k) += c * a_(j, k);
    for (std::size_t k = 0; k < u_.cols(); ++k) u_(i, k) += c * u_(j, k);
    for (std::size_t k = 0; k < ui_.rows(); ++k) ui_(k, j) -= c * ui_(k, i);
  }
  // col_i += c * col_j
  void add_col(std::size_t i, std::size_t j, const mpz_class& c) {
    for (std::size_t k = 0; k < a_.rows(); ++k) a_(k, i) += c * a_(k, j);
    for (std::size_t k = 0; k < v_.rows(); ++k) v_(k, i) += c * v_(k, j);
    for (std::size_t k = 0; k < vi_.cols(); ++k) vi_(j, k) -= c * vi_(i, k);
  }
  void swap_rows(std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < a_.cols(); ++k) std::swap(a_(i, k), a_(j, k));
    for (std::size_t k = 0; k < u_.cols(); ++k) std::swap(u_(i, k), u_(j, k));
    for (std::size_t k = 0; k < ui_.rows(); ++k) std::swap(ui_(k, i), ui_(k, j));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < a_.rows(); ++k) std::swap(a_(k, i), a_(k, j));
    for (std::size_t k = 0; k < v_.rows(); ++k) std::swap(v_(k, i), v_(k, j));
    for (std::size_t k = 0; k < vi_.cols(); ++k) std::swap(vi_(i, k), vi_(j, k));
  }
  void negate_row(std::size_t i) {
    for (std::size_t k = 0; k < a_.cols(); ++k) a_(i, k) = -a_(i, k);
    for (std::size_t k = 0; k < u_.cols(); ++k) u_(i, k) = -u_(i, k);
    for (std::size_t k = 0; k < ui_.rows(); ++k) ui_(k, i) = -ui_(k, i);
  }

  IntMatrix a_, u_, v_, ui_, vi_;
};

}  // namespace

SNFWithInverses snf_with_inverses(const IntMatrix& a) {
  SnfWorker w(a);
  w.run();
  return std::move(w).result();
}

SNFResult snf(const IntMatrix& a) {
  auto r = snf_with_inverses(a);
  return {std::move(r.U), std::move(r.D), std::move(r.V)};
}

std::vector<mpz_class> snf_diagonal(const IntMatrix& d) {
  std::vector<mpz_class> diag;
  for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i) diag.push_back(d(i, i));
  return diag;
}

bool verify_snf(const IntMatrix& a, const SNFResult& r) {
  if (r.U.rows() != a.rows() || r.V.cols() != a.cols()) return false;
  if (!is_unimodular(r.U) || !is_unimodular(r.V)) return false;
  if (r.U * a * r.V != r.D) return false;
  for (std::size_t i = 0; i < r.D.rows(); ++i)
    for (std::size_t j = 0; j < r.D.cols(); ++j)
      if (i != j && r.D(i, j) != 0) return false;
  const auto diag = snf_diagonal(r.D);
  for (std::size_t i = 0; i < diag.size(); ++i) {
    if (diag[i] < 0) return false;
    if (i + 1 < diag.size()) {
      if (diag[i] == 0 && diag[i + 1] != 0) return false;
      if (diag[i] != 0 && !mpz_divisible_p(diag[i + 1].get_mpz_t(), diag[i].get_mpz_t()))
        return false;
    }
  }
  return true;
}

mpz_class AbelianInvariants::order() const {
  if (free_rank) return 0;
  mpz_class o = 1;
  for (const auto& t : torsion) o *= t;
  return o;
}

std::string AbelianInvariants::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < free_rank; ++i) s += (s.empty() ? "" : " x ") + std::string("Z");
  for (const auto& t : torsion) s += (s.empty() ? "" : " x ") + ("Z/" + t.get_str());
  return s.empty() ? "0" : s;
}

AbelianInvariants cokernel_invariants(const IntMatrix& relations) {
  const auto diag = snf_diagonal(snf(relations).D);
  AbelianInvariants inv;
  std::size_t nonzero = 0;
  for (const auto& d : diag) {
    if (d == 0) continue;
    ++nonzero;
    if (d > 1) inv.torsion.push_back(d);
  }
  inv.free_rank = relations.rows() - nonzero;
  return inv;
}

IntMatrix coinvariant_relations(std::size_t n, std::span<const IntMatrix> action_gens) {
  std::vector<IntMatrix> blocks;
  blocks.reserve(action_gens.size());
  const IntMatrix id = IntMatrix::identity(n);
  for (const auto& m : action_gens) {
    if (m.rows() != n || m.cols() != n) {
      fail(ErrorKind::invalid_argument, "action matrix is not " + std::to_string(n) + "x" +
                                            std::to_string(n));
    }
    blocks.push_back(m - id);
  }
  if (blocks.empty()) return IntMatrix(n, 0);
  return hstack<mpz_class>(blocks, n);
}

AbelianInvariants coinvariants(std::size_t n, std::span<const IntMatrix> action_gens) {
  return cokernel_invariants(coinvariant_relations(n, action_gens));
}

IntMatrix symplectic_form(int genus) {
  const auto n = static_cast<std::size_t>(2 * genus);
  IntMatrix j(n, n);
  for (std::size_t i = 0; i < n; i += 2) {
    j(i, i + 1) = 1;
    j(i + 1, i) = -1;
  }
  return j;
}

bool is_symplectic(const IntMatrix& m, int genus) {
  const auto n = static_cast<std::size_t>(2 * genus);
  if (genus < 1 || m.rows() != n || m.cols() != n) {
    fail(ErrorKind::invalid_argument, "is_symplectic needs a 2g x 2g matrix");
  }
  const IntMatrix j = symplectic_form(genus);
  return m.transpose() * j * m == j;
}

// ---------------------------------------------------------------------------
// Rational linear algebra

RowEchelon rref(const RatMatrix& m) {
  RowEchelon e{m, {}};
  RatMatrix& a = e.reduced;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t p = row;
    while (p < a.rows() && a(p, col) == 0) ++p;
    if (p == a.rows()) continue;
    if (p != row)
      for (std::size_t k = 0; k < a.cols(); ++k) std::swap(a(p, k), a(row, k));
    const mpq_class inv = 1 / a(row, col);
    for (std::size_t k = 0; k < a.cols(); ++k) a(row, k) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, col) == 0) continue;
      const mpq_class f = a(i, col);
      for (std::size_t k = 0; k < a.cols(); ++k) a(i, k) -= f * a(row, k);
    }
    e.pivots.push_back(col);
    ++row;
  }
  return e;
}

std::size_t rank(const RatMatrix& m) { return rref(m).pivots.size(); }
std::size_t rank(const IntMatrix& m) { return rank(to_rational(m)); }

RatMatrix kernel(const RatMatrix& m) {
  const auto e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (!is_pivot[j]) free_cols.push_back(j);
  RatMatrix basis(m.cols(), free_cols.size());
  for (std::size_t b = 0; b < free_cols.size(); ++b) {
    const std::size_t f = free_cols[b];
    basis(f, b) = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) basis(e.pivots[r], b) = -e.reduced(r, f);
  }
  return basis;
}

RatMatrix fixed_subspace(std::span<const IntMatrix> action_gens) {
  if (action_gens.empty()) fail(ErrorKind::invalid_argument, "fixed_subspace needs a generator");
  const std::size_t n = action_gens.front().rows();
  std::vector<RatMatrix> blocks;
  const IntMatrix id = IntMatrix::identity(n);
  for (const auto& m : action_gens) {
    if (m.rows() != n || m.cols() != n) fail(ErrorKind::invalid_argument, "unequal dimensions");
    blocks.push_back(to_rational(m - id));
  }
  return kernel(vstack<mpq_class>(blocks, n));
}

RatMatrix averaging_projector(std::span<const IntMatrix> group) {
  if (group.empty()) fail(ErrorKind::not_a_group, "empty matrix list");
  const std::size_t n = group.front().rows();
  std::set<std::vector<std::string>> members;
  auto key = [](const IntMatrix& m) {
    std::vector<std::string> k;
    k.reserve(m.entries().size());
    for (const auto& e : m.entries()) k.push_back(e.get_str());
    return k;
  };
  for (const auto& m : group) {
    if (m.rows() != n || m.cols() != n) fail(ErrorKind::invalid_argument, "unequal dimensions");
    members.insert(key(m));
  }
  for (const auto& a : group)
    for (const auto& b : group)
      if (!members.count(key(a * b)))
        fail(ErrorKind::not_a_group, "matrix list is not closed under multiplication");
  RatMatrix p(n, n);
  for (const auto& m : group) p = p + to_rational(m);
  const mpq_class scale(mpz_class(1), mpz_class(static_cast<unsigned long>(members.size())));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p(i, j) *= scale;
  return p;
}

bool same_column_span(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows() != b.rows()) return false;
  const std::array<RatMatrix, 2> both{a, b};
  const std::size_t joint = rank(hstack<mpq_class>(both, a.rows()));
  return rank(a) == joint && rank(b) == joint;
}

RatMatrix solve_left(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows() != b.rows()) fail(ErrorKind::invalid_argument, "solve_left row mismatch");
  const std::array<RatMatrix, 2> both{a, b};
  const auto e = rref(hstack<mpq_class>(both, a.rows()));
  // Full column rank on the A part, and no pivot in the B part.
  if (e.pivots.size() != a.cols()) fail(ErrorKind::consistency, "system has no unique solution");
  for (std::size_t i = 0; i < a.cols(); ++i)
    if (e.pivots[i] != i) fail(ErrorKind::consistency, "system has no unique solution");
  RatMatrix x(a.cols(), b.cols());
  for (std::size_t i = 0; i < a.cols(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) x(i, j) = e.reduced(i, a.cols() + j);
  if (a * x != b) fail(ErrorKind::consistency, "inconsistent linear system");
  return x;
}

}  // namespace finorb
