// Independent reference values for the unit and acceptance tests. Nothing
// here calls into the library.
#pragma once

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <vector>

namespace oracle {

using Big = boost::multiprecision::cpp_bin_float_50;

// Monomial coefficients of C_d^alpha from the explicit sum
//   C_d(t) = sum_k (-1)^k Gamma(d - k + alpha) / (Gamma(alpha) k! (d - 2k)!) (2t)^(d - 2k).
inline std::vector<Big> gegenbauer_monomials(double alpha_d, int d) {
  const Big alpha = alpha_d;
  std::vector<Big> coeff(static_cast<std::size_t>(d) + 1, Big(0));
  for (int k = 0; 2 * k <= d; ++k) {
    const int p = d - 2 * k;
    Big term = boost::math::tgamma(Big(d - k) + alpha) / boost::math::tgamma(alpha);
    term /= boost::math::factorial<Big>(static_cast<unsigned>(k));
    term /= boost::math::factorial<Big>(static_cast<unsigned>(p));
    term *= boost::multiprecision::pow(Big(2), p);
    if (k % 2 == 1) term = -term;
    coeff[static_cast<std::size_t>(p)] += term;
  }
  return coeff;
}

inline double gegenbauer(double alpha, int d, double t) {
  const auto c = gegenbauer_monomials(alpha, d);
  Big acc = 0;
  for (int p = d; p >= 0; --p) acc = acc * Big(t) + c[static_cast<std::size_t>(p)];
  return static_cast<double>(acc);
}

// Integral of t^m (1 - t^2)^(alpha - 1/2) over [-1, 1]: B((m + 1)/2, alpha + 1/2) for even m.
inline Big moment(double alpha, int m) {
  if (m % 2 == 1) return Big(0);
  return boost::math::beta(Big(m + 1) / 2, Big(alpha) + Big(0.5));
}

// Weighted inner product of two polynomials given by monomial coefficients.
inline Big weighted_inner(double alpha, const std::vector<Big>& a, const std::vector<Big>& b) {
  Big acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      if ((i + j) % 2 == 0) acc += a[i] * b[j] * moment(alpha, static_cast<int>(i + j));
  return acc;
}

// p_{alpha,k} = pi 2^(1 - 2 alpha) Gamma(k + 2 alpha) / (k! (k + alpha) Gamma(alpha)^2).
inline double norm_closed_form(double alpha, int k) {
  const Big a = alpha;
  Big v = boost::math::constants::pi<Big>() * boost::multiprecision::pow(Big(2), 1 - 2 * a);
  v *= boost::math::tgamma(Big(k) + 2 * a);
  v /= boost::math::factorial<Big>(static_cast<unsigned>(k)) * (Big(k) + a) *
       boost::multiprecision::pow(boost::math::tgamma(a), 2);
  return static_cast<double>(v);
}

// Gegenbauer coefficients of t^m: <t^m, C_k> / <C_k, C_k>, exact up to rounding.
inline std::vector<double> power_coefficients(double alpha, int m, int d_max) {
  std::vector<Big> tm(static_cast<std::size_t>(m) + 1, Big(0));
  tm.back() = 1;
  std::vector<double> out;
  for (int k = 0; k <= d_max; ++k) {
    const auto ck = gegenbauer_monomials(alpha, k);
    out.push_back(static_cast<double>(weighted_inner(alpha, tm, ck) / weighted_inner(alpha, ck, ck)));
  }
  return out;
}

// Addition theorem constants in the normalization
//   C_k^a(cos th cos ta + sin th sin ta cos g)
//     = sum_i c_{k,i} (sin th sin ta)^i C_{k-i}^{a+i}(cos th) C_{k-i}^{a+i}(cos ta) C_i^{a-1/2}(cos g),
// with c_{k,i} = 2^(2i) (k - i)! ((a)_i)^2 / (2a)_{k+i} * (2a + 2i - 1) / (2a - 1).
inline double addition_constant(double alpha, int k, int i) {
  const Big a = alpha;
  auto rising = [](Big x, int n) {
    Big v = 1;
    for (int j = 0; j < n; ++j) v *= x + j;
    return v;
  };
  Big v = boost::multiprecision::pow(Big(2), 2 * i);
  v *= boost::math::factorial<Big>(static_cast<unsigned>(k - i));
  v *= boost::multiprecision::pow(rising(a, i), 2);
  v /= rising(2 * a, k + i);
  v *= (2 * a + 2 * i - 1) / (2 * a - 1);
  return static_cast<double>(v);
}

// Delsarte bounds at theta = pi/3, d_max = 12 from tests/oracles/delsarte_oracle.py
// (scipy HiGHS on a 2000-point grid).
inline constexpr double kDelsarteN3 = 13.158330;
inline constexpr double kDelsarteN4 = 25.558426;
inline constexpr double kDelsarteN8 = 239.999697;

}  // namespace oracle
