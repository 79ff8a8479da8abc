#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "paircorr/config.hpp"
#include "paircorr/test_function.hpp"

namespace paircorr {

/// Raised when a materialized enumeration would exceed the atom cap.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::uint64_t requested, std::uint64_t cap)
      : std::runtime_error(what), requested_(requested), cap_(cap) {}
  std::uint64_t requested() const { return requested_; }
  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t requested_;
  std::uint64_t cap_;
};

inline constexpr std::uint64_t kDefaultAtomCap = 100'000'000;

enum class Side { PositiveOnly, Symmetric };

struct EnumerationOptions {
  unsigned threads = 1;
  std::uint64_t atom_cap = kDefaultAtomCap;
};

/// (m+p)^alpha - m^alpha as m^alpha * expm1(alpha * log1p(p/m)), given
/// m_pow_alpha = m^alpha. Shared by the enumerator and the brute-force oracle.
inline double power_difference(double m_pow_alpha, double alpha, double m, double p) {
  return m_pow_alpha * std::expm1(alpha * std::log1p(p / m));
}

/// Window-restricted view of R_N^{alpha,+} (or of R_N^alpha when Symmetric):
/// the positive scaled differences phi(N)((m+p)^alpha - m^alpha) <= A, each
/// carrying mass weight = 1/psi(N). Symmetric measures keep only the
/// positive atoms; the negative half is their mirror image.
struct AtomMeasure {
  double weight = 0.0;
  std::vector<double> atoms;
  Side side = Side::PositiveOnly;
  CorrelationConfig config;

  std::size_t size() const { return atoms.size(); }
  bool empty() const { return atoms.empty(); }
  /// Full support multiset (positive atoms followed by their negations when Symmetric).
  std::vector<double> support_points() const;
};

AtomMeasure symmetrize(AtomMeasure positive);

/// Largest p >= 0 with phi(N)((m+p)^alpha - m^alpha) <= A, uncapped by N - m.
/// Closed form corrected by a short local scan so the boundary is exact for
/// the arithmetic used by the enumerator.
std::uint64_t p_bound_exact(const CorrelationConfig& config, std::uint64_t m);

/// Number of positive atoms in the window: sum over m of min(p_bound, N - m).
std::uint64_t count_window_atoms(const CorrelationConfig& config, unsigned threads = 1);

/// Windowed enumeration of R_N^{alpha,+} in O(N + atoms) work.
AtomMeasure enumerate_window(const CorrelationConfig& config, const EnumerationOptions& options = {});

/// Test oracle: direct double loop over all pairs m < n <= N.
inline constexpr std::uint64_t kBruteForceMaxN = 20000;
AtomMeasure brute_force_measure(const CorrelationConfig& config);

/// weight * sum f(atom); Symmetric adds the same sum for mirror(f).
double evaluate(const AtomMeasure& measure, const TestFunction& f, unsigned threads = 1);

/// Same functional computed on the fly, without materializing atoms.
double evaluate_streaming(const CorrelationConfig& config, const TestFunction& f, Side side, unsigned threads = 1);

/// Bin edges, strictly increasing. Bins are [e_i, e_{i+1}); the last bin is closed.
class BinLayout {
 public:
  /// Uniform bins of the given width over [lo, hi]. A final partial bin is
  /// kept when the width does not divide the range. Symmetric ranges get
  /// edges that are exact negatives of each other.
  static BinLayout uniform(double lo, double hi, double width);
  /// Edges on multiples of spacing/subdivisions, so every multiple of
  /// `spacing` is an edge (bit-identical to k * spacing).
  static BinLayout snapped(double lo, double hi, double spacing, unsigned subdivisions);
  static BinLayout from_edges(std::vector<double> edges);

  const std::vector<double>& edges() const { return edges_; }
  std::size_t bins() const { return edges_.size() - 1; }
  double lo() const { return edges_.front(); }
  double hi() const { return edges_.back(); }
  double width(std::size_t i) const { return edges_[i + 1] - edges_[i]; }
  /// edges[i] == -edges[n - i] for all i.
  bool mirror_symmetric() const { return mirror_symmetric_; }
  std::optional<std::size_t> locate(double x) const;

 private:
  explicit BinLayout(std::vector<double> edges);
  std::vector<double> edges_;
  bool mirror_symmetric_ = false;
};

struct Histogram {
  std::vector<double> edges;
  std::vector<std::uint64_t> counts;
  std::vector<double> masses;  // weight * count per bin
  double weight = 0.0;
  std::uint64_t total_pairs_visited = 0;  // positive in-window atoms enumerated
  std::uint64_t out_of_range = 0;         // support points outside [lo, hi]
  std::uint64_t n = 0;
  double alpha = 0.0;
  std::string scaling;
  Side side = Side::PositiveOnly;

  std::size_t bins() const { return counts.size(); }
  double width(std::size_t i) const { return edges[i + 1] - edges[i]; }
  double density(std::size_t i) const { return masses[i] / width(i); }
  std::uint64_t total_count() const;
  double total_mass() const;
};

Histogram histogram(const AtomMeasure& measure, const BinLayout& bins);

/// Histogram built during enumeration in constant memory; agrees exactly
/// with histogram(enumerate_window(config)) for the same layout.
Histogram stream_histogram(const CorrelationConfig& config, const BinLayout& bins, Side side, unsigned threads = 1);

/// (1/N^(2-alpha-beta)) * Card(F_N intersected with (a/N^beta, b/N^beta)),
/// F_N the signed differences n^alpha - m^alpha, n != m.
double count_in_shrinking_window(double alpha, double beta, std::uint64_t n, double a, double b,
                                 unsigned threads = 1);

/// Lower bound alpha phi(N) / (2N)^(1-alpha) on every positive atom.
double empirical_repulsion_gap(const CorrelationConfig& config);

}  // namespace paircorr
