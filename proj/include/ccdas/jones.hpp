#pragma once
// 2x2 complex Jones matrix, row-major {xx, xy; yx, yy}.
#include <cmath>
#include <complex>

#include "ccdas/rng.hpp"

namespace ccdas {

struct JonesMatrix {
  std::complex<double> xx{}, xy{}, yx{}, yy{};

  JonesMatrix operator*(const JonesMatrix& o) const {
    return {xx * o.xx + xy * o.yx, xx * o.xy + xy * o.yy,
            yx * o.xx + yy * o.yx, yx * o.xy + yy * o.yy};
  }
  JonesMatrix operator*(std::complex<double> c) const {
    return {c * xx, c * xy, c * yx, c * yy};
  }
  JonesMatrix transpose() const { return {xx, yx, xy, yy}; }
  std::complex<double> det() const { return xx * yy - xy * yx; }
  double frobenius_sq() const {
    return std::norm(xx) + std::norm(xy) + std::norm(yx) + std::norm(yy);
  }
  static JonesMatrix identity() { return {1.0, 0.0, 0.0, 1.0}; }

  bool is_unitary(double tol = 1e-12) const {
    const JonesMatrix h{std::conj(xx), std::conj(yx), std::conj(xy), std::conj(yy)};
    const JonesMatrix p = h * *this;
    return std::abs(p.xx - 1.0) < tol && std::abs(p.yy - 1.0) < tol &&
           std::abs(p.xy) < tol && std::abs(p.yx) < tol;
  }
};

// Haar-distributed U(2) sample; consumes counters 4k..4k+3 of the stream.
inline JonesMatrix haar_unitary(const CounterRng& rng, std::uint64_t k) {
  const double th = std::asin(std::sqrt(rng.uniform(4 * k)));
  const double ph = 2.0 * M_PI * rng.uniform(4 * k + 1);
  const double ps = 2.0 * M_PI * rng.uniform(4 * k + 2);
  const double ch = 2.0 * M_PI * rng.uniform(4 * k + 3);
  const std::complex<double> g = std::polar(1.0, ph);
  return {g * std::polar(std::cos(th), ps), g * std::polar(std::sin(th), ch),
          g * -std::polar(std::sin(th), -ch), g * std::polar(std::cos(th), -ps)};
}

}  // namespace ccdas
