#pragma once

// Exact dense linear algebra. Determinants and square solves go through
// Bareiss' fraction-free elimination: over Q every row is first scaled to
// integers, and every division the recurrence performs is then exact.

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "primlen/error.hpp"
#include "primlen/field.hpp"

namespace primlen {

struct OpCounter {
  std::uint64_t multiplications = 0;
  std::uint64_t divisions = 0;
  std::uint64_t additions = 0;

  OpCounter& operator+=(const OpCounter& o) {
    multiplications += o.multiplications;
    divisions += o.divisions;
    additions += o.additions;
    return *this;
  }
};

class DenseMatrix {
 public:
  DenseMatrix() = default;

  DenseMatrix(std::size_t rows, std::size_t cols, const FieldDescriptor& field)
      : rows_(rows), cols_(cols), field_(field), entries_(rows * cols, FieldScalar::zero(field)) {}

  static DenseMatrix identity(std::size_t n, const FieldDescriptor& field) {
    DenseMatrix m(n, n, field);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = FieldScalar::one(field);
    return m;
  }

  /// Row-major construction from integers, mostly for tests.
  static DenseMatrix from_integers(const FieldDescriptor& field,
                                   const std::vector<std::vector<long long>>& rows) {
    DenseMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size(), field);
    for (std::size_t i = 0; i < m.rows_; ++i) {
      if (rows[i].size() != m.cols_) throw InvalidArgument("ragged matrix rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = FieldScalar::from_integer(field, rows[i][j]);
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  const FieldDescriptor& field() const noexcept { return field_; }

  FieldScalar& operator()(std::size_t i, std::size_t j) { return entries_.at(i * cols_ + j); }
  const FieldScalar& operator()(std::size_t i, std::size_t j) const {
    return entries_.at(i * cols_ + j);
  }

  std::vector<FieldScalar> operator*(std::span<const FieldScalar> x) const {
    if (x.size() != cols_) throw Mismatch("matrix-vector size mismatch");
    std::vector<FieldScalar> out(rows_, FieldScalar::zero(field_));
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * x[j];
    }
    return out;
  }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_) throw Mismatch("matrix product size mismatch");
    DenseMatrix out(a.rows_, b.cols_, a.field_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k).is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += a(i, k) * b(k, j);
      }
    }
    return out;
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  FieldDescriptor field_;
  std::vector<FieldScalar> entries_;
};

namespace detail {

// Integers. With `checked` every division tests its remainder; otherwise the
// faster exact-division routine is used and `exact` is not updated.
struct IntegerDomain {
  using value_type = mpz_class;
  bool checked = true;
  bool exact = true;

  static bool is_zero(const mpz_class& v) { return sgn(v) == 0; }

  void cross(mpz_class& out, const mpz_class& akk, const mpz_class& aij, const mpz_class& aik,
             const mpz_class& akj, const mpz_class& prev, OpCounter& ops) {
    mpz_mul(out.get_mpz_t(), akk.get_mpz_t(), aij.get_mpz_t());
    mpz_submul(out.get_mpz_t(), aik.get_mpz_t(), akj.get_mpz_t());
    ops.multiplications += 2;
    ops.additions += 1;
    if (prev != 1) divide(out, prev, ops);
  }

  // out = (c0·aij + c1·arj − t·avj) / prev
  void combine(mpz_class& out, const mpz_class& c0, const mpz_class& aij, const mpz_class& c1,
               const mpz_class& arj, const mpz_class& t, const mpz_class& avj, const mpz_class& prev,
               OpCounter& ops) {
    mpz_mul(out.get_mpz_t(), c0.get_mpz_t(), aij.get_mpz_t());
    mpz_addmul(out.get_mpz_t(), c1.get_mpz_t(), arj.get_mpz_t());
    mpz_submul(out.get_mpz_t(), t.get_mpz_t(), avj.get_mpz_t());
    ops.multiplications += 3;
    ops.additions += 2;
    if (prev != 1) divide(out, prev, ops);
  }

  void divide(mpz_class& v, const mpz_class& by, OpCounter& ops) {
    if (checked) {
      mpz_class r;
      mpz_tdiv_qr(v.get_mpz_t(), r.get_mpz_t(), v.get_mpz_t(), by.get_mpz_t());
      if (sgn(r) != 0) exact = false;
    } else {
      mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), by.get_mpz_t());
    }
    ops.divisions += 1;
  }
};

// Residues modulo a word-sized prime.
struct ModularDomain {
  using value_type = std::uint64_t;
  std::uint64_t p;
  bool exact = true;

  static bool is_zero(std::uint64_t v) { return v == 0; }

  void cross(std::uint64_t& out, std::uint64_t akk, std::uint64_t aij, std::uint64_t aik,
             std::uint64_t akj, std::uint64_t prev, OpCounter& ops) {
    const auto a = FieldScalar::mul_mod(akk, aij, p);
    const auto b = FieldScalar::mul_mod(aik, akj, p);
    out = (a + p - b) % p;
    ops.multiplications += 2;
    ops.additions += 1;
    if (prev != 1) divide(out, prev, ops);
  }

  void combine(std::uint64_t& out, std::uint64_t c0, std::uint64_t aij, std::uint64_t c1, std::uint64_t arj,
               std::uint64_t t, std::uint64_t avj, std::uint64_t prev, OpCounter& ops) {
    const auto a = FieldScalar::mul_mod(c0, aij, p);
    const auto b = FieldScalar::mul_mod(c1, arj, p);
    const auto c = FieldScalar::mul_mod(t, avj, p);
    out = ((a + b) % p + p - c) % p;
    ops.multiplications += 3;
    ops.additions += 2;
    if (prev != 1) divide(out, prev, ops);
  }

  void divide(std::uint64_t& v, std::uint64_t by, OpCounter& ops) {
    v = FieldScalar::mul_mod(v, FieldScalar::pow_mod(by, p - 2, p), p);
    ops.divisions += 1;
  }
};

template <class Domain>
using Rows = std::vector<std::vector<typename Domain::value_type>>;

// Two-step Bareiss forward elimination on the leading n columns of `a` (which
// may carry extra right-hand-side columns). Columns r, r+1 are cleared together:
// with p the previous pivot and t_i = (a_rr·a_i,r+1 − a_ir·a_r,r+1)/p,
//   a_ij <- (c0·a_ij + c1_i·a_rj − t_i·a_vj) / p,
//   c0 = t_v,  c1_i = (a_vr·a_i,r+1 − a_v,r+1·a_ir) / p,
// where v is the second pivot row. Every quotient is a minor of the input, so
// over the integers each division is exact. The result matches the one-step
// form row by row: row r+1 holds stage r+1 values, later rows stage r+2.
// Returns false when singular.
template <class Domain>
bool bareiss_forward(Domain& dom, Rows<Domain>& a, std::size_t n, int& sign, OpCounter& ops) {
  using T = typename Domain::value_type;
  const std::size_t cols = n == 0 ? 0 : a.front().size();
  T prev = T(1);
  sign = 1;
  std::vector<T> t(n);
  for (std::size_t r = 0; r < n; r += 2) {
    if (Domain::is_zero(a[r][r])) {
      std::size_t i = r + 1;
      while (i < n && Domain::is_zero(a[i][r])) ++i;
      if (i == n) return false;
      std::swap(a[r], a[i]);
      sign = -sign;
    }
    if (r + 1 == n) break;
    const std::size_t v = r + 1;

    std::size_t piv = n;
    for (std::size_t i = v; i < n; ++i) {
      dom.cross(t[i], a[r][r], a[i][v], a[i][r], a[r][v], prev, ops);
      if (piv == n && !Domain::is_zero(t[i])) piv = i;
    }
    if (piv == n) return false;
    if (piv != v) {
      std::swap(a[v], a[piv]);
      std::swap(t[v], t[piv]);
      sign = -sign;
    }

    for (std::size_t i = v + 1; i < n; ++i) {
      T c1;
      dom.cross(c1, a[v][r], a[i][v], a[v][v], a[i][r], prev, ops);
      for (std::size_t j = v + 1; j < cols; ++j) {
        T out;
        dom.combine(out, t[v], a[i][j], c1, a[r][j], t[i], a[v][j], prev, ops);
        a[i][j] = std::move(out);
      }
      a[i][r] = T(0);
      a[i][v] = T(0);
    }
    // row v to stage r+1
    for (std::size_t j = v + 1; j < cols; ++j) {
      T out;
      dom.cross(out, a[r][r], a[v][j], a[v][r], a[r][j], prev, ops);
      a[v][j] = std::move(out);
    }
    a[v][r] = T(0);
    a[v][v] = t[v];
    prev = t[v];
  }
  return true;
}

// Fraction-free back substitution: returns y = D·x with D the last pivot.
template <class Domain>
std::vector<typename Domain::value_type> bareiss_back(Domain& dom, const Rows<Domain>& a,
                                                      std::size_t n, OpCounter& ops) {
  using T = typename Domain::value_type;
  std::vector<T> y(n);
  const T& det = a[n - 1][n - 1];
  for (std::size_t ii = n; ii-- > 0;) {
    T acc;
    if constexpr (std::is_same_v<T, mpz_class>) {
      acc = det * a[ii][n];
      for (std::size_t j = ii + 1; j < n; ++j) acc -= a[ii][j] * y[j];
    } else {
      acc = FieldScalar::mul_mod(det, a[ii][n], dom.p);
      for (std::size_t j = ii + 1; j < n; ++j) {
        acc = (acc + dom.p - FieldScalar::mul_mod(a[ii][j], y[j], dom.p)) % dom.p;
      }
    }
    ops.multiplications += 1 + (n - ii - 1);
    ops.additions += n - ii - 1;
    dom.divide(acc, a[ii][ii], ops);
    y[ii] = std::move(acc);
  }
  return y;
}

// Scales row entries to integers; returns the multiplier used.
inline mpz_class clear_row(std::span<const FieldScalar> row, std::vector<mpz_class>& out,
                           OpCounter& ops) {
  mpz_class l = 1;
  for (const auto& s : row) {
    const auto& den = s.rational().get_den();
    if (den != 1) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
  }
  out.clear();
  out.reserve(row.size());
  for (const auto& s : row) {
    const auto& q = s.rational();
    if (l == 1) {
      out.push_back(q.get_num());
    } else {
      out.push_back(q.get_num() * (l / q.get_den()));
      ops.multiplications += 1;
    }
  }
  return l;
}

}  // namespace detail

struct EliminationOptions {
  /// Test the remainder of every Bareiss division over Q (the fraction-free
  /// property). Disabling it skips the test, not the division.
  bool check_divisions = true;
};

struct DeterminantResult {
  FieldScalar value;
  OpCounter ops;
  bool fraction_free = true;  // every Bareiss division was exact
};

inline DeterminantResult bareiss_determinant(const DenseMatrix& a, EliminationOptions opts = {}) {
  if (!a.is_square()) throw InvalidArgument("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  const auto& field = a.field();
  DeterminantResult result{FieldScalar::one(field), {}, true};
  if (n == 0) return result;
  int sign = 1;

  if (field.is_rationals()) {
    detail::IntegerDomain dom;
    dom.checked = opts.check_divisions;
    detail::Rows<detail::IntegerDomain> rows(n);
    mpz_class scale = 1;
    std::vector<FieldScalar> row(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) row[j] = a(i, j);
      scale *= detail::clear_row(row, rows[i], result.ops);
    }
    const bool regular = detail::bareiss_forward(dom, rows, n, sign, result.ops);
    result.fraction_free = dom.exact;
    if (!regular) {
      result.value = FieldScalar::zero(field);
      return result;
    }
    mpz_class det = rows[n - 1][n - 1];
    if (sign < 0) det = -det;
    result.value = FieldScalar::from_rational(field, det, scale);
    return result;
  }

  detail::ModularDomain dom{field.modulus()};
  detail::Rows<detail::ModularDomain> rows(n, std::vector<std::uint64_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = a(i, j).residue();
  }
  if (!detail::bareiss_forward(dom, rows, n, sign, result.ops)) {
    result.value = FieldScalar::zero(field);
    return result;
  }
  auto det = FieldScalar::from_integer(field, static_cast<long long>(rows[n - 1][n - 1]));
  result.value = sign < 0 ? -det : det;
  return result;
}

struct SolveResult {
  std::vector<FieldScalar> x;
  OpCounter ops;
  bool fraction_free = true;
};

/// Exact solution of A·x = b for square nonsingular A.
inline SolveResult solve_square(const DenseMatrix& a, std::span<const FieldScalar> b,
                                EliminationOptions opts = {}) {
  if (!a.is_square()) throw InvalidArgument("solve_square needs a square matrix");
  const std::size_t n = a.rows();
  if (b.size() != n) throw Mismatch("right-hand side length differs from matrix size");
  const auto& field = a.field();
  SolveResult result;
  if (n == 0) return result;
  int sign = 1;

  if (field.is_rationals()) {
    detail::IntegerDomain dom;
    dom.checked = opts.check_divisions;
    // Each matrix row is cleared on its own; the right-hand side is then put
    // over one common denominator so it never inflates the matrix entries.
    detail::Rows<detail::IntegerDomain> rows(n);
    std::vector<FieldScalar> row(n);
    std::vector<mpq_class> rhs(n);
    mpz_class common = 1;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) row[j] = a(i, j);
      const mpz_class l = detail::clear_row(row, rows[i], result.ops);
      rhs[i] = b[i].rational() * l;
      if (l != 1) result.ops.multiplications += 1;
      const auto& den = rhs[i].get_den();
      if (den != 1) mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), den.get_mpz_t());
    }
    for (std::size_t i = 0; i < n; ++i) {
      rows[i].push_back(rhs[i].get_num() * (common / rhs[i].get_den()));
      if (common != 1) result.ops.multiplications += 1;
    }
    if (!detail::bareiss_forward(dom, rows, n, sign, result.ops)) throw SingularMatrix();
    auto y = detail::bareiss_back(dom, rows, n, result.ops);
    const mpz_class den = rows[n - 1][n - 1] * common;
    result.x.reserve(n);
    for (auto& yi : y) result.x.push_back(FieldScalar::from_rational(field, yi, den));
    result.ops.divisions += n;
    result.fraction_free = dom.exact;
    return result;
  }

  detail::ModularDomain dom{field.modulus()};
  detail::Rows<detail::ModularDomain> rows(n, std::vector<std::uint64_t>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = a(i, j).residue();
    rows[i][n] = b[i].residue();
  }
  if (!detail::bareiss_forward(dom, rows, n, sign, result.ops)) throw SingularMatrix();
  auto y = detail::bareiss_back(dom, rows, n, result.ops);
  const auto det = FieldScalar::from_integer(field, static_cast<long long>(rows[n - 1][n - 1]));
  for (auto yi : y) {
    result.x.push_back(FieldScalar::from_integer(field, static_cast<long long>(yi)) / det);
  }
  result.ops.divisions += n;
  return result;
}

/// Rows indexed by exponents, columns by nodes: entry (j, k) = alphas[k]^exponents[j].
inline DenseMatrix vandermonde_power_matrix(std::span<const FieldScalar> alphas,
                                            std::span<const std::uint64_t> exponents) {
  if (alphas.empty()) throw InvalidArgument("no nodes");
  const auto& field = alphas.front().field();
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    for (std::size_t j = i + 1; j < alphas.size(); ++j) {
      if (alphas[i] == alphas[j]) throw InvalidArgument("duplicate Vandermonde node");
    }
  }
  for (std::size_t j = 1; j < exponents.size(); ++j) {
    if (exponents[j] <= exponents[j - 1]) {
      throw InvalidArgument("Vandermonde exponents must be strictly increasing");
    }
  }
  DenseMatrix m(exponents.size(), alphas.size(), field);
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    FieldScalar power = FieldScalar::one(field);
    std::uint64_t at = 0;
    for (std::size_t j = 0; j < exponents.size(); ++j) {
      power *= alphas[k].pow(exponents[j] - at);
      at = exponents[j];
      m(j, k) = power;
    }
  }
  return m;
}

/// Rank by plain Gaussian elimination; meant for the small d×d matrices of automorphisms.
inline std::size_t rank(DenseMatrix m) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(p, j));
    const FieldScalar inv = m(r, c).inverse();
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (m(i, c).is_zero()) continue;
      const FieldScalar f = m(i, c) * inv;
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    ++r;
  }
  return r;
}

/// Gauss-Jordan inverse; throws SingularMatrix.
inline DenseMatrix inverse(const DenseMatrix& a) {
  if (!a.is_square()) throw InvalidArgument("inverse of a non-square matrix");
  const std::size_t n = a.rows();
  DenseMatrix m = a;
  DenseMatrix inv = DenseMatrix::identity(n, a.field());
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c).is_zero()) ++p;
    if (p == n) throw SingularMatrix();
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(m(c, j), m(p, j));
      std::swap(inv(c, j), inv(p, j));
    }
    const FieldScalar s = m(c, c).inverse();
    for (std::size_t j = 0; j < n; ++j) {
      m(c, j) *= s;
      inv(c, j) *= s;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || m(i, c).is_zero()) continue;
      const FieldScalar f = m(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) -= f * m(c, j);
        inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

}  // namespace primlen
