#pragma once
// Complementary (Golay) sequence pairs and their correlation identities.
//
// A pair (a, b) is complementary when the aperiodic autocorrelations sum to
// a delta: a(x)a + b(x)b = 2*N*delta(lag).  Two pairs are mutually orthogonal
// when their cross-correlations cancel at every lag.  Both properties are
// integer-exact, so everything here stays in integer arithmetic.
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ccdas {

enum class CorrelationMode { aperiodic, periodic };

// +1/-1 sequence, length a power of two >= 4
class BinarySequence {
 public:
  explicit BinarySequence(std::vector<int> symbols);

  int size() const { return static_cast<int>(sym_.size()); }
  int operator[](int i) const { return sym_[i]; }
  const std::vector<int>& symbols() const { return sym_; }

 private:
  std::vector<int> sym_;
};

// Two mutually orthogonal complementary pairs of one length
struct GolaySet {
  BinarySequence a1, b1, a2, b2;
  int length() const { return a1.size(); }
};

struct GolayVerification {
  bool pair1_complementary = false;
  bool pair2_complementary = false;
  bool cross_a_orthogonal = false;   // a1(x)a2 + b1(x)b2 == 0
  bool cross_b_orthogonal = false;   // a1(x)b1 + a2(x)b2 == 0
  std::int64_t max_sidelobe = 0;     // worst |value| over all off-peak lags of the four sums
  bool all() const {
    return pair1_complementary && pair2_complementary && cross_a_orthogonal &&
           cross_b_orthogonal;
  }
};

// Correlation values over consecutive lags starting at min_lag.
// a(x)b at lag k is sum_n a(n) * conj(b(n-k)).
// Aperiodic: lags -(Lb-1) .. La-1.  Periodic: lags 0 .. L-1, equal lengths only.
struct CorrelationResult {
  std::vector<std::complex<double>> values;
  CorrelationMode mode = CorrelationMode::aperiodic;
  int min_lag = 0;

  int lag(int i) const { return min_lag + i; }
  const std::complex<double>& at_lag(int k) const { return values.at(k - min_lag); }
};

// Exact integer correlation of +/-1 (or any small-integer) sequences.
// Accumulates in 64-bit; same lag layout as CorrelationResult.
std::vector<std::int64_t> correlate_int(std::span<const int> a, std::span<const int> b,
                                        CorrelationMode mode);

// General direct correlation used by verification paths and small inputs.
CorrelationResult correlate(std::span<const std::complex<double>> a,
                            std::span<const std::complex<double>> b,
                            CorrelationMode mode);

// Recursive doubling from the length-4 base set:
//   a1' = [a1, b1]   b1' = [a1, -b1]   (same for pair 2)
GolaySet generate_golay_set(int n);

// Re-derives every identity by direct integer correlation; independent of how
// the set was produced.
GolayVerification verify_golay_set(const GolaySet& set);

// Text dump, one "name length" header line then the symbols as "+1 -1 ..."
void write_sequence_dump(std::ostream& os, const std::string& name,
                         const BinarySequence& seq);
void write_golay_dump(std::ostream& os, const GolaySet& set);

}  // namespace ccdas
