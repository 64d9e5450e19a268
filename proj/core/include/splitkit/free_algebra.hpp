#pragma once

// Truncated free associative algebra over n non-commuting letters A_1..A_n.
// Words store letters in application order: a word (1,2) is "A_1 applied
// first, then A_2", and mul(p, q) concatenates p-words on the left. Storage
// is dense: with n <= 7 and D <= 4 there are at most 2801 words.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "splitkit/errors.hpp"
#include "splitkit/rational.hpp"

namespace splitkit {

using Word = std::vector<int>;  // letters in 1..n; empty word = unit

inline constexpr int kMinDegree = 2;
inline constexpr int kMaxDegree = 4;
inline constexpr int kMaxLetters = 7;

namespace detail {

inline void check_n_d(int n, int D) {
  if (n < 1 || n > kMaxLetters)
    throw ValidationError("letter count must be in 1.." + std::to_string(kMaxLetters) +
                          ", got " + std::to_string(n));
  if (D < kMinDegree || D > kMaxDegree)
    throw ValidationError("truncation degree must be in " + std::to_string(kMinDegree) +
                          ".." + std::to_string(kMaxDegree) + ", got " + std::to_string(D));
}

// Index layout: degree-d words occupy a contiguous block of size n^d, in
// lexicographic order; index within block of (l_1..l_d) is sum (l_i-1)*n^(d-i).
struct WordIndex {
  int n = 0;
  int D = 0;
  std::array<std::size_t, kMaxDegree + 2> offset{};  // offset[d] = start of degree-d block
  std::array<std::size_t, kMaxDegree + 1> block{};   // block[d] = n^d

  WordIndex() = default;
  WordIndex(int n_, int D_) : n(n_), D(D_) {
    check_n_d(n, D);
    block[0] = 1;
    offset[0] = 0;
    for (int d = 1; d <= D; ++d) {
      block[d] = block[d - 1] * static_cast<std::size_t>(n);
      offset[d] = offset[d - 1] + block[d - 1];
    }
    offset[D + 1] = offset[D] + block[D];
  }

  std::size_t size() const { return offset[D + 1]; }

  std::size_t index(const Word& w) const {
    int d = static_cast<int>(w.size());
    if (d > D) throw ValidationError("word exceeds truncation degree");
    std::size_t i = 0;
    for (int letter : w) {
      if (letter < 1 || letter > n) throw ValidationError("letter out of range");
      i = i * static_cast<std::size_t>(n) + static_cast<std::size_t>(letter - 1);
    }
    return offset[d] + i;
  }

  Word word(std::size_t idx) const {
    int d = degree(idx);
    std::size_t i = idx - offset[d];
    Word w(static_cast<std::size_t>(d));
    for (int pos = d - 1; pos >= 0; --pos) {
      w[static_cast<std::size_t>(pos)] = static_cast<int>(i % static_cast<std::size_t>(n)) + 1;
      i /= static_cast<std::size_t>(n);
    }
    return w;
  }

  int degree(std::size_t idx) const {
    for (int d = 0; d <= D; ++d)
      if (idx < offset[d + 1]) return d;
    throw ValidationError("word index out of range");
  }
};

}  // namespace detail

template <class T>
struct FreePoly {
  int n = 0;
  int D = 0;
  std::vector<T> coeffs;  // dense over all words of degree 0..D

  FreePoly() = default;
  FreePoly(int n_, int D_) : n(n_), D(D_), coeffs(detail::WordIndex(n_, D_).size(), T(0)) {}

  static FreePoly zero(int n, int D) { return FreePoly(n, D); }
  static FreePoly unit(int n, int D) {
    FreePoly p(n, D);
    p.coeffs[0] = T(1);
    return p;
  }

  detail::WordIndex index() const { return detail::WordIndex(n, D); }

  T& at(const Word& w) { return coeffs[index().index(w)]; }
  const T& at(const Word& w) const { return coeffs[index().index(w)]; }

  FreePoly& operator+=(const FreePoly& o) {
    require_compatible(o);
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
    return *this;
  }
  FreePoly& operator-=(const FreePoly& o) {
    require_compatible(o);
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= o.coeffs[i];
    return *this;
  }
  FreePoly& operator*=(const T& s) {
    for (auto& c : coeffs) c *= s;
    return *this;
  }

  void require_compatible(const FreePoly& o) const {
    if (n != o.n || D != o.D)
      throw ValidationError("free-algebra operands disagree in n or D");
  }
};

// All n^d words of degree exactly d, lexicographic, each exactly once.
inline std::vector<Word> enumerate_words(int n, int d) {
  if (d < 1 || d > kMaxDegree)
    throw ValidationError("degree out of range: " + std::to_string(d));
  detail::check_n_d(n, std::max(d, kMinDegree));
  detail::WordIndex ix(n, d < kMinDegree ? kMinDegree : d);
  std::vector<Word> out;
  out.reserve(ix.block[d]);
  for (std::size_t i = 0; i < ix.block[d]; ++i) out.push_back(ix.word(ix.offset[d] + i));
  return out;
}

template <class T>
FreePoly<T> mul(const FreePoly<T>& p, const FreePoly<T>& q) {
  p.require_compatible(q);
  detail::WordIndex ix(p.n, p.D);
  FreePoly<T> r(p.n, p.D);
  for (int a = 0; a <= p.D; ++a) {
    for (std::size_t iu = 0; iu < ix.block[a]; ++iu) {
      const T& pu = p.coeffs[ix.offset[a] + iu];
      if (pu == T(0)) continue;
      for (int b = 0; a + b <= p.D; ++b) {
        std::size_t base = ix.offset[a + b] + iu * ix.block[b];
        for (std::size_t iv = 0; iv < ix.block[b]; ++iv) {
          const T& qv = q.coeffs[ix.offset[b] + iv];
          if (qv == T(0)) continue;
          r.coeffs[base + iv] += pu * qv;
        }
      }
    }
  }
  return r;
}

// exp(c * A_letter) truncated at degree D.
template <class T>
FreePoly<T> exp_single(int letter, const T& c, int n, int D) {
  detail::check_n_d(n, D);
  if (letter < 1 || letter > n) throw ValidationError("letter out of range");
  FreePoly<T> p(n, D);
  T term(1);
  Word w;
  p.at(w) = term;
  for (int m = 1; m <= D; ++m) {
    term *= c;
    term /= T(m);
    w.push_back(letter);
    p.at(w) = term;
  }
  return p;
}

// log(p) = sum_{m=1..D} (-1)^(m+1)/m (p-1)^m; requires unit coefficient exactly 1.
template <class T>
FreePoly<T> log_truncated(const FreePoly<T>& p) {
  if (!(p.coeffs[0] == T(1)))
    throw ValidationError("log requires unit coefficient exactly 1");
  FreePoly<T> q = p;
  q.coeffs[0] = T(0);
  FreePoly<T> power = q;
  FreePoly<T> out(p.n, p.D);
  for (int m = 1; m <= p.D; ++m) {
    if (m > 1) power = mul(power, q);
    T w = T(m % 2 == 1 ? 1 : -1) / T(m);
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += w * power.coeffs[i];
  }
  return out;
}

// exp(p) for p with zero constant term; inverse of log_truncated up to degree D.
template <class T>
FreePoly<T> exp_truncated(const FreePoly<T>& p) {
  if (!(p.coeffs[0] == T(0)))
    throw ValidationError("exp requires zero constant term");
  FreePoly<T> power = FreePoly<T>::unit(p.n, p.D);
  FreePoly<T> out = power;
  T factorial(1);
  for (int m = 1; m <= p.D; ++m) {
    power = mul(power, p);
    factorial *= T(m);
    for (std::size_t i = 0; i < out.coeffs.size(); ++i)
      out.coeffs[i] += power.coeffs[i] / factorial;
  }
  return out;
}

// ---- Lyndon machinery ------------------------------------------------------

// A word is Lyndon iff it is strictly smaller than every proper suffix.
inline bool is_lyndon(const Word& w) {
  if (w.empty()) return false;
  for (std::size_t i = 1; i < w.size(); ++i)
    if (!std::lexicographical_compare(w.begin(), w.end(), w.begin() + static_cast<std::ptrdiff_t>(i), w.end()))
      return false;
  return true;
}

// Necklace count (1/d) * sum_{e|d} mu(e) n^(d/e).
inline std::size_t lyndon_count(int n, int d) {
  auto mobius = [](int m) {
    int result = 1;
    for (int f = 2; f * f <= m; ++f) {
      if (m % f == 0) {
        m /= f;
        if (m % f == 0) return 0;
        result = -result;
      }
    }
    if (m > 1) result = -result;
    return result;
  };
  long long total = 0;
  for (int e = 1; e <= d; ++e) {
    if (d % e != 0) continue;
    long long p = 1;
    for (int i = 0; i < d / e; ++i) p *= n;
    total += mobius(e) * p;
  }
  return static_cast<std::size_t>(total / d);
}

inline std::vector<Word> lyndon_words(int n, int d) {
  std::vector<Word> out;
  for (const Word& w : enumerate_words(n, d))
    if (is_lyndon(w)) out.push_back(w);
  return out;
}

// Standard (right) factorization w = u v, v = lexicographically smallest
// proper suffix; both factors are Lyndon when w is.
inline std::pair<Word, Word> standard_factorization(const Word& w) {
  if (w.size() < 2) throw ValidationError("factorization needs degree >= 2");
  std::size_t best = 1;
  for (std::size_t i = 2; i < w.size(); ++i)
    if (std::lexicographical_compare(w.begin() + static_cast<std::ptrdiff_t>(i), w.end(),
                                     w.begin() + static_cast<std::ptrdiff_t>(best), w.end()))
      best = i;
  return {Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(best)),
          Word(w.begin() + static_cast<std::ptrdiff_t>(best), w.end())};
}

struct LyndonBasisElement {
  Word word;
  std::string bracketing;        // e.g. "[1,[1,2]]"
  FreePoly<Rational> expansion;  // fully expanded commutator, homogeneous
};

namespace detail {

inline FreePoly<Rational> bracket_expansion(const Word& w, int n, int D, std::string* repr) {
  if (w.size() == 1) {
    if (repr) *repr = std::to_string(w[0]);
    FreePoly<Rational> p(n, D);
    p.at(w) = 1;
    return p;
  }
  auto [u, v] = standard_factorization(w);
  std::string ru, rv;
  FreePoly<Rational> pu = bracket_expansion(u, n, D, repr ? &ru : nullptr);
  FreePoly<Rational> pv = bracket_expansion(v, n, D, repr ? &rv : nullptr);
  if (repr) *repr = "[" + ru + "," + rv + "]";
  FreePoly<Rational> r = mul(pu, pv);
  r -= mul(pv, pu);
  return r;
}

}  // namespace detail

inline std::vector<LyndonBasisElement> lyndon_basis(int n, int d) {
  detail::check_n_d(n, std::max(d, kMinDegree));
  if (d < 1 || d > kMaxDegree)
    throw ValidationError("degree out of range: " + std::to_string(d));
  int D = std::max(d, kMinDegree);
  std::vector<LyndonBasisElement> out;
  for (const Word& w : lyndon_words(n, d)) {
    LyndonBasisElement e;
    e.word = w;
    e.expansion = detail::bracket_expansion(w, n, D, &e.bracketing);
    out.push_back(std::move(e));
  }
  return out;
}

// ---- Least-squares projection onto the bracket basis -----------------------

template <class T>
struct LieProjection {
  std::vector<T> coeffs;
  long double residual = 0;  // Euclidean norm of h - sum coeffs[i]*basis[i]
};

namespace detail {

template <class T>
T abs_val(const T& x) {
  using std::abs;
  return abs(x);
}

// Gaussian elimination with max-|pivot| selection; exact for Rational.
template <class T>
std::vector<T> solve_dense(std::vector<std::vector<T>> A, std::vector<T> b) {
  const std::size_t m = b.size();
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < m; ++r)
      if (abs_val(A[r][col]) > abs_val(A[piv][col])) piv = r;
    if (A[piv][col] == T(0)) throw ValidationError("singular normal equations in lie_project");
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col || A[r][col] == T(0)) continue;
      T f = A[r][col] / A[col][col];
      for (std::size_t cc = col; cc < m; ++cc) A[r][cc] -= f * A[col][cc];
      b[r] -= f * b[col];
    }
  }
  std::vector<T> x(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = b[i] / A[i][i];
  return x;
}

inline long double sqrt_to_ld(const Rational& x) { return std::sqrt(to_long_double(x)); }
inline long double sqrt_to_ld(long double x) { return std::sqrt(x); }
inline long double sqrt_to_ld(double x) { return std::sqrt(static_cast<long double>(x)); }

}  // namespace detail

// Coefficient conversion used when projecting floating-point polynomials
// against the exact rational basis expansions.
template <class T>
T convert_coeff(const Rational& x) {
  if constexpr (std::is_same_v<T, Rational>)
    return x;
  else
    return rational_to<T>(x);
}

// Least-squares coefficients of h against the basis expansions (degree-d
// homogeneous component), plus the residual norm. Exact in rational mode.
template <class T>
LieProjection<T> lie_project(const FreePoly<T>& h, const std::vector<LyndonBasisElement>& basis) {
  if (basis.empty()) throw ValidationError("empty basis in lie_project");
  int d = static_cast<int>(basis.front().word.size());
  detail::WordIndex ix(h.n, h.D);
  if (d > h.D) throw ValidationError("basis degree exceeds truncation degree");
  for (std::size_t i = 0; i < h.coeffs.size(); ++i)
    if (!(h.coeffs[i] == T(0)) && ix.degree(i) != d)
      throw ValidationError("lie_project input is not homogeneous of the basis degree");

  const std::size_t off = ix.offset[d];
  const std::size_t len = ix.block[d];
  const std::size_t m = basis.size();
  std::vector<std::vector<T>> E(m, std::vector<T>(len, T(0)));
  detail::WordIndex bix = basis.front().expansion.index();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < len; ++j)
      E[i][j] = convert_coeff<T>(basis[i].expansion.coeffs[bix.offset[d] + j]);

  std::vector<std::vector<T>> G(m, std::vector<T>(m, T(0)));
  std::vector<T> rhs(m, T(0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      T s(0);
      for (std::size_t k = 0; k < len; ++k) s += E[i][k] * E[j][k];
      G[i][j] = s;
      G[j][i] = s;
    }
    T s(0);
    for (std::size_t k = 0; k < len; ++k) s += E[i][k] * h.coeffs[off + k];
    rhs[i] = s;
  }
  LieProjection<T> out;
  out.coeffs = detail::solve_dense(G, rhs);
  T res2(0);
  for (std::size_t k = 0; k < len; ++k) {
    T v = h.coeffs[off + k];
    for (std::size_t i = 0; i < m; ++i) v -= out.coeffs[i] * E[i][k];
    res2 += v * v;
  }
  out.residual = detail::sqrt_to_ld(res2);
  return out;
}

}  // namespace splitkit
