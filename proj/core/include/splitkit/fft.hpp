#pragma once

// Radix-2 complex FFT over a caller-chosen real type, with precomputed
// bit-reversal table and twiddle factors. Specialize FftTraits to use a
// scalar type beyond double / long double.

#include <cmath>
#include <cstddef>
#include <vector>

#include "splitkit/errors.hpp"

namespace splitkit {

template <class R>
struct FftTraits;

template <>
struct FftTraits<double> {
  static double pi() { return 3.141592653589793238462643383279502884; }
  static double cos_at(double x) { return std::cos(x); }
  static double sin_at(double x) { return std::sin(x); }
};

template <>
struct FftTraits<long double> {
  static long double pi() { return 3.141592653589793238462643383279502884L; }
  static long double cos_at(long double x) { return std::cos(x); }
  static long double sin_at(long double x) { return std::sin(x); }
};

template <class R>
class Fft {
 public:
  explicit Fft(std::size_t n) : n_(n) {
    if (n < 2 || (n & (n - 1)) != 0)
      throw ValidationError("transform size must be a power of two, at least 2");
    rev_.resize(n);
    int bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (int b = 0; b < bits; ++b)
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
      rev_[i] = r;
    }
    // twiddles w_len^j = exp(-2*pi*i*j/len) for each stage, packed end to end
    wre_.reserve(n - 1);
    wim_.reserve(n - 1);
    for (std::size_t len = 2; len <= n; len <<= 1)
      for (std::size_t j = 0; j < len / 2; ++j) {
        R ang = R(-2) * FftTraits<R>::pi() * R(j) / R(len);
        wre_.push_back(FftTraits<R>::cos_at(ang));
        wim_.push_back(FftTraits<R>::sin_at(ang));
      }
  }

  std::size_t size() const { return n_; }

  void forward(std::vector<R>& re, std::vector<R>& im) const { transform(re, im, false); }

  // Includes the 1/n factor.
  void inverse(std::vector<R>& re, std::vector<R>& im) const {
    transform(re, im, true);
    R inv = R(1) / R(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      re[i] *= inv;
      im[i] *= inv;
    }
  }

 private:
  void transform(std::vector<R>& re, std::vector<R>& im, bool inv) const {
    if (re.size() != n_ || im.size() != n_)
      throw ValidationError("transform input length mismatch");
    for (std::size_t i = 0; i < n_; ++i)
      if (rev_[i] > i) {
        std::swap(re[i], re[rev_[i]]);
        std::swap(im[i], im[rev_[i]]);
      }
    std::size_t toff = 0;
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t half = len / 2;
      for (std::size_t start = 0; start < n_; start += len)
        for (std::size_t j = 0; j < half; ++j) {
          R wr = wre_[toff + j];
          R wi = inv ? -wim_[toff + j] : wim_[toff + j];
          std::size_t a = start + j, b = a + half;
          R tr = re[b] * wr - im[b] * wi;
          R ti = re[b] * wi + im[b] * wr;
          re[b] = re[a] - tr;
          im[b] = im[a] - ti;
          re[a] += tr;
          im[a] += ti;
        }
      toff += half;
    }
  }

  std::size_t n_;
  std::vector<std::size_t> rev_;
  std::vector<R> wre_, wim_;
};

}  // namespace splitkit
