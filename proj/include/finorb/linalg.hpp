#pragma once

// Exact integer and rational linear algebra: Smith normal form, abelian
// group invariants, co-invariant modules, symplectic checks and rational
// fixed spaces. Everything is arbitrary precision; there is no floating
// point anywhere in here.

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace finorb {

template <typename Scalar>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<long>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }
  const std::vector<Scalar>& entries() const noexcept { return entries_; }

  Matrix transpose() const;
  Matrix column(std::size_t j) const;
  Matrix columns(std::size_t first, std::size_t count) const;
  Matrix rows_range(std::size_t first, std::size_t count) const;
  bool is_zero() const;
  Scalar trace() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> entries_;
};

using IntMatrix = Matrix<mpz_class>;
using RatMatrix = Matrix<mpq_class>;

template <typename S> Matrix<S> operator*(const Matrix<S>& a, const Matrix<S>& b);
template <typename S> Matrix<S> operator+(const Matrix<S>& a, const Matrix<S>& b);
template <typename S> Matrix<S> operator-(const Matrix<S>& a, const Matrix<S>& b);
template <typename S> Matrix<S> hstack(std::span<const Matrix<S>> blocks, std::size_t rows);
template <typename S> Matrix<S> vstack(std::span<const Matrix<S>> blocks, std::size_t cols);

RatMatrix to_rational(const IntMatrix& m);
/// Throws consistency if some entry is not an integer.
IntMatrix to_integer(const RatMatrix& m);
bool is_integral(const RatMatrix& m);

std::string to_string(const IntMatrix& m);

mpz_class determinant(const IntMatrix& m);
bool is_unimodular(const IntMatrix& m);

/// Reduces each row i modulo moduli[i] into [0, moduli[i]); rows with modulus
/// zero are left untouched.
IntMatrix reduce_rows(const IntMatrix& m, std::span<const mpz_class> moduli);

// ---------------------------------------------------------------------------
// Smith normal form

struct SNFResult {
  IntMatrix U, D, V;  // U * A * V == D
};

struct SNFWithInverses {
  IntMatrix U, D, V;
  IntMatrix U_inv, V_inv;
};

/// Pivot policy: smallest nonzero |entry| in the trailing block, ties broken
/// by row then column. D is diagonal, d_i >= 0 and d_i | d_{i+1}.
SNFResult snf(const IntMatrix& a);
SNFWithInverses snf_with_inverses(const IntMatrix& a);

/// d_0, d_1, ... along the diagonal of D (min(rows, cols) entries).
std::vector<mpz_class> snf_diagonal(const IntMatrix& d);

/// True iff U*A*V == D, U and V unimodular, D diagonal with the divisibility chain.
bool verify_snf(const IntMatrix& a, const SNFResult& r);

struct AbelianInvariants {
  std::size_t free_rank = 0;
  std::vector<mpz_class> torsion;  // each > 1, each dividing the next

  bool trivial() const { return free_rank == 0 && torsion.empty(); }
  bool finite() const { return free_rank == 0; }
  /// Order when finite, 0 otherwise.
  mpz_class order() const;
  std::string to_string() const;
  friend bool operator==(const AbelianInvariants&, const AbelianInvariants&) = default;
};

/// Invariants of Z^rows / (column span of relations).
AbelianInvariants cokernel_invariants(const IntMatrix& relations);

/// Invariants of Z^n / < (M - I) v : M in gens, v in Z^n >. Generators suffice:
/// (MN - I) = (M - I)N + (N - I), so the relation module of the generated
/// group equals the one spanned by the generators' blocks.
AbelianInvariants coinvariants(std::size_t n, std::span<const IntMatrix> action_gens);

/// Stacked relation matrix [M_1 - I | M_2 - I | ...] used by coinvariants.
IntMatrix coinvariant_relations(std::size_t n, std::span<const IntMatrix> action_gens);

/// Standard form for the interleaved basis a_1, b_1, ..., a_g, b_g.
IntMatrix symplectic_form(int genus);
/// M^T J M == J. Throws invalid_argument on a shape other than 2g x 2g.
bool is_symplectic(const IntMatrix& m, int genus);

// ---------------------------------------------------------------------------
// Rational linear algebra

struct RowEchelon {
  RatMatrix reduced;                 // reduced row echelon form
  std::vector<std::size_t> pivots;   // pivot column of each nonzero row
};
RowEchelon rref(const RatMatrix& m);
std::size_t rank(const RatMatrix& m);
std::size_t rank(const IntMatrix& m);

/// Basis (as columns) of the right kernel.
RatMatrix kernel(const RatMatrix& m);

/// Basis of the intersection of ker(M - I) over the generators.
RatMatrix fixed_subspace(std::span<const IntMatrix> action_gens);

/// (1/|Q|) sum of the supplied matrices; throws not_a_group unless the list
/// is closed under multiplication.
RatMatrix averaging_projector(std::span<const IntMatrix> group);

/// Same column span over Q.
bool same_column_span(const RatMatrix& a, const RatMatrix& b);

/// Unique X with A X = B when A has full column rank and the system is
/// consistent; throws consistency otherwise.
RatMatrix solve_left(const RatMatrix& a, const RatMatrix& b);

}  // namespace finorb
