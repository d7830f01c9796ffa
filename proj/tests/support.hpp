#pragma once

// Seeded generators and independent oracles shared by the unit tests and the
// acceptance runner. The oracles deliberately avoid the library's own
// algorithms: cofactor expansion, rational Gauss-Jordan on mpq_class,
// factorial multinomials, point evaluation, and a matrix-free model of the
// free metabelian Lie algebra.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "primlen/field.hpp"
#include "primlen/linalg.hpp"
#include "primlen/metalie.hpp"
#include "primlen/multipoly.hpp"

namespace primlen::testing {

using Rng = std::mt19937_64;

inline long long uniform(Rng& rng, long long lo, long long hi) {
  return std::uniform_int_distribution<long long>(lo, hi)(rng);
}

inline FieldScalar random_scalar(Rng& rng, const FieldDescriptor& f, long long bound = 100) {
  const auto num = uniform(rng, -bound, bound);
  if (!f.is_rationals()) return FieldScalar::from_integer(f, num);
  return FieldScalar::from_rational(f, mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(uniform(rng, 1, bound))));
}

inline FieldScalar random_nonzero(Rng& rng, const FieldDescriptor& f, long long bound = 100) {
  for (;;) {
    auto s = random_scalar(rng, f, bound);
    if (!s.is_zero()) return s;
  }
}

inline Monomial random_monomial(Rng& rng, std::size_t d, std::uint64_t degree) {
  Monomial m(d);
  for (std::uint64_t k = 0; k < degree; ++k) m.exponents[uniform(rng, 0, static_cast<long long>(d) - 1)]++;
  return m;
}

/// Up to `terms` random terms of degree <= n plus one term of degree exactly n.
inline Polynomial random_poly(Rng& rng, std::size_t d, std::uint64_t n, const FieldDescriptor& f,
                              int terms = 6, long long bound = 100) {
  Polynomial p(d, f);
  for (int t = 0; t < terms; ++t) {
    p.add_term(random_monomial(rng, d, uniform(rng, 0, static_cast<long long>(n))), random_scalar(rng, f, bound));
  }
  const auto m = random_monomial(rng, d, n);
  // adding to an existing coefficient could cancel it (always, over F2)
  if (p.coefficient(m).is_zero()) p.add_term(m, random_nonzero(rng, f, bound));
  return p;
}

inline LieElement random_lie(Rng& rng, std::size_t d, std::size_t max_len, const FieldDescriptor& f,
                             int terms = 6, long long bound = 5) {
  LieElement u(d, f);
  for (int t = 0; t < terms; ++t) {
    std::vector<std::uint32_t> w(uniform(rng, 1, static_cast<long long>(max_len)));
    for (auto& i : w) i = static_cast<std::uint32_t>(uniform(rng, 0, static_cast<long long>(d) - 1));
    u.add_word(w, random_scalar(rng, f, bound));
  }
  return u;
}

// ---------------------------------------------------------------------------
// Linear algebra oracles

inline FieldScalar cofactor_determinant(const DenseMatrix& a) {
  const auto n = a.rows();
  const auto& f = a.field();
  if (n == 0) return FieldScalar::one(f);
  if (n == 1) return a(0, 0);
  FieldScalar det = FieldScalar::zero(f);
  for (std::size_t c = 0; c < n; ++c) {
    DenseMatrix minor(n - 1, n - 1, f);
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t j = 0, jj = 0; j < n; ++j) {
        if (j != c) minor(i - 1, jj++) = a(i, j);
      }
    }
    const auto term = a(0, c) * cofactor_determinant(minor);
    det = (c % 2 == 0) ? det + term : det - term;
  }
  return det;
}

/// Gauss-Jordan with partial pivoting on plain rationals. Empty when singular.
inline std::vector<mpq_class> rational_solve(std::vector<std::vector<mpq_class>> a, std::vector<mpq_class> b) {
  const auto n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return {};
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const mpq_class factor = a[r][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[r][j] -= factor * a[c][j];
      b[r] -= factor * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

inline mpz_class factorial(unsigned long k) {
  mpz_class out = 1;
  for (unsigned long i = 2; i <= k; ++i) out *= i;
  return out;
}

inline mpz_class factorial_multinomial(const Monomial& a) {
  mpz_class out = factorial(static_cast<unsigned long>(a.degree()));
  for (auto e : a.exponents) out /= factorial(e);
  return out;
}

// ---------------------------------------------------------------------------
// Polynomial evaluation oracle

inline FieldScalar evaluate(const Polynomial& f, const std::vector<FieldScalar>& point) {
  FieldScalar acc = FieldScalar::zero(f.field());
  for (const auto& [m, c] : f.terms()) {
    FieldScalar t = c;
    for (std::size_t i = 0; i < m.arity(); ++i) t *= point[i].pow(m.exponents[i]);
    acc += t;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Free metabelian Lie algebra model.
//
// x_i is sent to the pair (t_i, a_i), where the t_i span an abelian algebra
// acting on the free module over K[t_1..t_d] with basis a_1..a_d, and
//   [(s, m), (s', m')] = (0, m·s' - m'·s).
// This representation is faithful, so two Lie elements are equal exactly
// when their images are.

struct LieModel {
  std::size_t d = 0;
  FieldDescriptor field;
  std::vector<FieldScalar> linear;                               // coefficients of t_i
  std::map<std::pair<std::size_t, std::vector<std::uint32_t>>, FieldScalar> module;  // (a_j, t^e)

  LieModel(std::size_t d_, const FieldDescriptor& f) : d(d_), field(f), linear(d_, FieldScalar::zero(f)) {}

  static LieModel generator(std::size_t d, const FieldDescriptor& f, std::size_t i) {
    LieModel g(d, f);
    g.linear[i] = FieldScalar::one(f);
    g.module[{i, std::vector<std::uint32_t>(d, 0)}] = FieldScalar::one(f);
    return g;
  }

  void add_module(std::size_t j, const std::vector<std::uint32_t>& e, const FieldScalar& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = module.try_emplace({j, e}, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) module.erase(it);
    }
  }

  LieModel& add_scaled(const LieModel& o, const FieldScalar& s) {
    for (std::size_t i = 0; i < d; ++i) linear[i] += s * o.linear[i];
    for (const auto& [k, c] : o.module) add_module(k.first, k.second, s * c);
    return *this;
  }

  friend bool operator==(const LieModel& a, const LieModel& b) {
    return a.linear == b.linear && a.module == b.module;
  }
};

inline LieModel model_bracket(const LieModel& u, const LieModel& v) {
  LieModel out(u.d, u.field);
  // m_u · s_v
  for (const auto& [k, c] : u.module) {
    for (std::size_t i = 0; i < v.d; ++i) {
      if (v.linear[i].is_zero()) continue;
      auto e = k.second;
      e[i]++;
      out.add_module(k.first, e, c * v.linear[i]);
    }
  }
  // - m_v · s_u
  for (const auto& [k, c] : v.module) {
    for (std::size_t i = 0; i < u.d; ++i) {
      if (u.linear[i].is_zero()) continue;
      auto e = k.second;
      e[i]++;
      out.add_module(k.first, e, -(c * u.linear[i]));
    }
  }
  return out;
}

/// Left-normed bracket of the given images.
inline LieModel model_word(const std::vector<LieModel>& images, const std::vector<std::uint32_t>& w) {
  LieModel acc = images.at(w.at(0));
  for (std::size_t k = 1; k < w.size(); ++k) acc = model_bracket(acc, images.at(w[k]));
  return acc;
}

inline std::vector<LieModel> model_generators(std::size_t d, const FieldDescriptor& f) {
  std::vector<LieModel> g;
  for (std::size_t i = 0; i < d; ++i) g.push_back(LieModel::generator(d, f, i));
  return g;
}

inline LieModel model_of(const LieElement& u, const std::vector<LieModel>& images) {
  LieModel out(u.arity(), u.field());
  for (const auto& [w, c] : u.terms()) out.add_scaled(model_word(images, w.indices), c);
  return out;
}

inline LieModel model_of(const LieElement& u) { return model_of(u, model_generators(u.arity(), u.field())); }

}  // namespace primlen::testing
