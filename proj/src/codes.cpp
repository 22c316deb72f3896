#include "ccdas/codes.hpp"

#include <ostream>
#include <stdexcept>

namespace ccdas {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

BinarySequence::BinarySequence(std::vector<int> symbols) : sym_(std::move(symbols)) {
  if (sym_.size() < 4 || !power_of_two(static_cast<int>(sym_.size())))
    throw std::invalid_argument("sequence length must be a power of two >= 4");
  for (int s : sym_)
    if (s != 1 && s != -1)
      throw std::invalid_argument("sequence symbols must be +1 or -1");
}

std::vector<std::int64_t> correlate_int(std::span<const int> a, std::span<const int> b,
                                        CorrelationMode mode) {
  const int la = static_cast<int>(a.size());
  const int lb = static_cast<int>(b.size());
  if (la == 0 || lb == 0) throw std::invalid_argument("empty sequence");
  if (mode == CorrelationMode::periodic) {
    if (la != lb)
      throw std::invalid_argument("periodic correlation needs equal lengths");
    std::vector<std::int64_t> out(la, 0);
    for (int k = 0; k < la; ++k) {
      std::int64_t s = 0;
      for (int n = 0; n < la; ++n) s += std::int64_t(a[n]) * b[((n - k) % la + la) % la];
      out[k] = s;
    }
    return out;
  }
  std::vector<std::int64_t> out(la + lb - 1, 0);
  for (int k = -(lb - 1); k < la; ++k) {
    std::int64_t s = 0;
    const int n0 = std::max(0, k);
    const int n1 = std::min(la, lb + k);
    for (int n = n0; n < n1; ++n) s += std::int64_t(a[n]) * b[n - k];
    out[k + lb - 1] = s;
  }
  return out;
}

CorrelationResult correlate(std::span<const std::complex<double>> a,
                            std::span<const std::complex<double>> b,
                            CorrelationMode mode) {
  const int la = static_cast<int>(a.size());
  const int lb = static_cast<int>(b.size());
  if (la == 0 || lb == 0) throw std::invalid_argument("empty sequence");
  CorrelationResult r;
  r.mode = mode;
  if (mode == CorrelationMode::periodic) {
    if (la != lb)
      throw std::invalid_argument("periodic correlation needs equal lengths");
    r.min_lag = 0;
    r.values.resize(la);
    for (int k = 0; k < la; ++k) {
      std::complex<double> s = 0.0;
      for (int n = 0; n < la; ++n) s += a[n] * std::conj(b[((n - k) % la + la) % la]);
      r.values[k] = s;
    }
    return r;
  }
  r.min_lag = -(lb - 1);
  r.values.resize(la + lb - 1);
  for (int k = -(lb - 1); k < la; ++k) {
    std::complex<double> s = 0.0;
    const int n0 = std::max(0, k);
    const int n1 = std::min(la, lb + k);
    for (int n = n0; n < n1; ++n) s += a[n] * std::conj(b[n - k]);
    r.values[k + lb - 1] = s;
  }
  return r;
}

GolaySet generate_golay_set(int n) {
  if (n < 4 || !power_of_two(n))
    throw std::invalid_argument("Golay set length must be a power of two >= 4");
  std::vector<int> a1{1, -1, -1, -1};
  std::vector<int> b1{-1, 1, -1, -1};
  std::vector<int> a2{-1, -1, 1, -1};
  std::vector<int> b2{1, 1, 1, -1};
  auto doubl = [](std::vector<int>& a, std::vector<int>& b) {
    std::vector<int> na(a), nb(a);
    na.insert(na.end(), b.begin(), b.end());
    for (int v : b) nb.push_back(-v);
    a = std::move(na);
    b = std::move(nb);
  };
  while (static_cast<int>(a1.size()) < n) {
    doubl(a1, b1);
    doubl(a2, b2);
  }
  return GolaySet{BinarySequence(std::move(a1)), BinarySequence(std::move(b1)),
                  BinarySequence(std::move(a2)), BinarySequence(std::move(b2))};
}

GolayVerification verify_golay_set(const GolaySet& set) {
  const int n = set.length();
  if (set.b1.size() != n || set.a2.size() != n || set.b2.size() != n)
    throw std::invalid_argument("set members must share one length");
  auto corr = [](const BinarySequence& x, const BinarySequence& y) {
    return correlate_int(x.symbols(), y.symbols(), CorrelationMode::aperiodic);
  };
  auto add = [](std::vector<std::int64_t> u, const std::vector<std::int64_t>& v) {
    for (size_t i = 0; i < u.size(); ++i) u[i] += v[i];
    return u;
  };

  const int peak = n - 1;  // lag 0 of 2n-1 aperiodic lags
  GolayVerification v;

  auto s1 = add(corr(set.a1, set.a1), corr(set.b1, set.b1));
  auto s2 = add(corr(set.a2, set.a2), corr(set.b2, set.b2));
  auto ca = add(corr(set.a1, set.a2), corr(set.b1, set.b2));
  auto cb = add(corr(set.a1, set.b1), corr(set.a2, set.b2));

  auto delta_check = [&](const std::vector<std::int64_t>& s) {
    if (s[peak] != 2 * std::int64_t(n)) return false;
    for (int i = 0; i < 2 * n - 1; ++i)
      if (i != peak && s[i] != 0) return false;
    return true;
  };
  auto zero_check = [](const std::vector<std::int64_t>& s) {
    for (auto x : s)
      if (x != 0) return false;
    return true;
  };
  v.pair1_complementary = delta_check(s1);
  v.pair2_complementary = delta_check(s2);
  v.cross_a_orthogonal = zero_check(ca);
  v.cross_b_orthogonal = zero_check(cb);
  for (int i = 0; i < 2 * n - 1; ++i) {
    for (const auto* s : {&s1, &s2, &ca, &cb}) {
      if (i == peak && (s == &s1 || s == &s2)) continue;
      v.max_sidelobe = std::max(v.max_sidelobe, std::abs((*s)[i]));
    }
  }
  return v;
}

void write_sequence_dump(std::ostream& os, const std::string& name,
                         const BinarySequence& seq) {
  os << name << ' ' << seq.size() << '\n';
  for (int i = 0; i < seq.size(); ++i) {
    if (i) os << ' ';
    os << (seq[i] > 0 ? "+1" : "-1");
  }
  os << '\n';
}

void write_golay_dump(std::ostream& os, const GolaySet& set) {
  write_sequence_dump(os, "g_a1", set.a1);
  write_sequence_dump(os, "g_b1", set.b1);
  write_sequence_dump(os, "g_a2", set.a2);
  write_sequence_dump(os, "g_b2", set.b2);
}

}  // namespace ccdas
