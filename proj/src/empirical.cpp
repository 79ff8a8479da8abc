#include "paircorr/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "paircorr/detail/compensated_sum.hpp"
#include "paircorr/detail/parallel.hpp"

namespace paircorr {

namespace {

constexpr std::uint64_t kBlockSize = 1u << 14;
constexpr std::uint64_t kUncapped = std::uint64_t{1} << 62;

struct WindowSpec {
  double alpha;
  double phi;
  double window;
  std::uint64_t n;
};

WindowSpec spec_of(const CorrelationConfig& config) {
  return {config.alpha(), config.phi(), config.window(), config.n()};
}

std::uint64_t p_bound_capped(const WindowSpec& w, std::uint64_t m, double m_pow, std::uint64_t cap) {
  const double md = static_cast<double>(m);
  auto diff = [&](std::uint64_t p) {
    return w.phi * power_difference(m_pow, w.alpha, md, static_cast<double>(p));
  };
  double closed = std::pow(w.window / w.phi + m_pow, 1.0 / w.alpha) - md;
  if (!(closed >= 0.0)) closed = 0.0;
  if (closed >= static_cast<double>(cap) + 2.0) {
    if (diff(cap) <= w.window) return cap;
    closed = static_cast<double>(cap);
  }
  auto p = std::min(cap, static_cast<std::uint64_t>(std::floor(closed)));
  while (p > 0 && diff(p) > w.window) --p;
  while (p < cap && diff(p + 1) <= w.window) ++p;
  return p;
}

// Calls visit(atom) for every positive in-window atom with base index m in [begin, end).
template <class Visit>
void visit_range(const WindowSpec& w, std::uint64_t begin, std::uint64_t end, Visit&& visit) {
  for (std::uint64_t m = begin; m < end; ++m) {
    const double md = static_cast<double>(m);
    const double m_pow = std::pow(md, w.alpha);
    const std::uint64_t last = p_bound_capped(w, m, m_pow, w.n - m);
    for (std::uint64_t p = 1; p <= last; ++p) {
      visit(w.phi * power_difference(m_pow, w.alpha, md, static_cast<double>(p)));
    }
  }
}

void check_support(const CorrelationConfig& config, const TestFunction& f) {
  if (f.lo() < -config.window() || f.hi() > config.window()) {
    throw PreconditionError("test function support " + f.describe() +
                            " exceeds the enumerated window [-A, A]; atoms outside it were never enumerated");
  }
}

struct BlockHistogram {
  std::vector<std::uint64_t> counts;
  std::uint64_t visited = 0;
  std::uint64_t out_of_range = 0;
};

void bin_atom(const BinLayout& bins, Side side, double x, BlockHistogram& h) {
  const auto idx = bins.locate(x);
  if (idx) {
    ++h.counts[*idx];
  } else {
    ++h.out_of_range;
  }
  if (side == Side::Symmetric) {
    if (idx && bins.mirror_symmetric()) {
      ++h.counts[bins.bins() - 1 - *idx];
    } else if (const auto neg = bins.locate(-x)) {
      ++h.counts[*neg];
    } else {
      ++h.out_of_range;
    }
  }
}

Histogram finish_histogram(const BinLayout& bins, const CorrelationConfig& config, Side side,
                           const std::vector<BlockHistogram>& blocks) {
  Histogram h;
  h.edges = bins.edges();
  h.counts.assign(bins.bins(), 0);
  for (const auto& b : blocks) {
    if (b.counts.empty()) continue;
    for (std::size_t i = 0; i < h.counts.size(); ++i) h.counts[i] += b.counts[i];
    h.total_pairs_visited += b.visited;
    h.out_of_range += b.out_of_range;
  }
  h.weight = 1.0 / config.psi();
  h.masses.resize(h.counts.size());
  for (std::size_t i = 0; i < h.counts.size(); ++i) h.masses[i] = h.weight * static_cast<double>(h.counts[i]);
  h.n = config.n();
  h.alpha = config.alpha();
  h.scaling = config.scaling_label();
  h.side = side;
  return h;
}

}  // namespace

std::vector<double> AtomMeasure::support_points() const {
  std::vector<double> out(atoms);
  if (side == Side::Symmetric) {
    out.reserve(2 * atoms.size());
    for (double x : atoms) out.push_back(-x);
  }
  return out;
}

AtomMeasure symmetrize(AtomMeasure positive) {
  positive.side = Side::Symmetric;
  return positive;
}

std::uint64_t p_bound_exact(const CorrelationConfig& config, std::uint64_t m) {
  if (m < 1) throw PreconditionError("p_bound_exact needs m >= 1");
  const double m_pow = std::pow(static_cast<double>(m), config.alpha());
  return p_bound_capped(spec_of(config), m, m_pow, kUncapped);
}

std::uint64_t count_window_atoms(const CorrelationConfig& config, unsigned threads) {
  const WindowSpec w = spec_of(config);
  const auto partial = detail::map_blocks<std::uint64_t>(
      1, w.n, kBlockSize, threads, [&](std::uint64_t begin, std::uint64_t end) {
        std::uint64_t count = 0;
        for (std::uint64_t m = begin; m < end; ++m) {
          const double m_pow = std::pow(static_cast<double>(m), w.alpha);
          count += p_bound_capped(w, m, m_pow, w.n - m);
        }
        return count;
      });
  std::uint64_t total = 0;
  for (auto c : partial) total += c;
  return total;
}

AtomMeasure enumerate_window(const CorrelationConfig& config, const EnumerationOptions& options) {
  const std::uint64_t expected = count_window_atoms(config, options.threads);
  if (expected > options.atom_cap) {
    throw ResourceError("window holds " + std::to_string(expected) + " atoms, above the cap of " +
                            std::to_string(options.atom_cap) + "; use the streaming histogram mode",
                        expected, options.atom_cap);
  }
  const WindowSpec w = spec_of(config);
  auto blocks = detail::map_blocks<std::vector<double>>(1, w.n, kBlockSize, options.threads,
                                                        [&](std::uint64_t begin, std::uint64_t end) {
                                                          std::vector<double> out;
                                                          visit_range(w, begin, end,
                                                                      [&](double x) { out.push_back(x); });
                                                          return out;
                                                        });
  AtomMeasure measure{1.0 / config.psi(), {}, Side::PositiveOnly, config};
  measure.atoms.reserve(expected);
  for (auto& b : blocks) {
    measure.atoms.insert(measure.atoms.end(), b.begin(), b.end());
    std::vector<double>().swap(b);
  }
  return measure;
}

AtomMeasure brute_force_measure(const CorrelationConfig& config) {
  if (config.n() > kBruteForceMaxN) {
    throw ResourceError("brute force oracle is limited to N <= " + std::to_string(kBruteForceMaxN), config.n(),
                        kBruteForceMaxN);
  }
  const double alpha = config.alpha();
  const double phi = config.phi();
  const double window = config.window();
  AtomMeasure measure{1.0 / config.psi(), {}, Side::PositiveOnly, config};
  for (std::uint64_t m = 1; m < config.n(); ++m) {
    const double md = static_cast<double>(m);
    const double m_pow = std::pow(md, alpha);
    for (std::uint64_t n = m + 1; n <= config.n(); ++n) {
      const double x = phi * power_difference(m_pow, alpha, md, static_cast<double>(n - m));
      if (x <= window) measure.atoms.push_back(x);
    }
  }
  return measure;
}

double evaluate(const AtomMeasure& measure, const TestFunction& f, unsigned threads) {
  check_support(measure.config, f);
  const bool both = measure.side == Side::Symmetric;
  const TestFunction g = mirror(f);
  auto sum_over = [&](const TestFunction& h) {
    const auto partial = detail::map_blocks<detail::CompensatedSum>(
        0, measure.atoms.size(), 1u << 16, threads, [&](std::uint64_t begin, std::uint64_t end) {
          detail::CompensatedSum acc;
          for (std::uint64_t i = begin; i < end; ++i) acc.add(h(measure.atoms[i]));
          return acc;
        });
    detail::CompensatedSum total;
    for (const auto& p : partial) total.merge(p);
    return total.value();
  };
  double total = sum_over(f);
  if (both) total += sum_over(g);
  return measure.weight * total;
}

double evaluate_streaming(const CorrelationConfig& config, const TestFunction& f, Side side, unsigned threads) {
  check_support(config, f);
  const WindowSpec w = spec_of(config);
  const TestFunction g = mirror(f);
  const bool both = side == Side::Symmetric;
  struct Pair {
    detail::CompensatedSum pos, neg;
  };
  const auto partial = detail::map_blocks<Pair>(1, w.n, kBlockSize, threads,
                                                [&](std::uint64_t begin, std::uint64_t end) {
                                                  Pair acc;
                                                  visit_range(w, begin, end, [&](double x) {
                                                    acc.pos.add(f(x));
                                                    if (both) acc.neg.add(g(x));
                                                  });
                                                  return acc;
                                                });
  detail::CompensatedSum pos, neg;
  for (const auto& p : partial) {
    pos.merge(p.pos);
    neg.merge(p.neg);
  }
  return (pos.value() + (both ? neg.value() : 0.0)) / config.psi();
}

BinLayout::BinLayout(std::vector<double> edges) : edges_(std::move(edges)) {
  if (edges_.size() < 2) throw ConfigError("bin layout needs at least one bin");
  for (std::size_t i = 0; i + 1 < edges_.size(); ++i) {
    if (!(edges_[i] < edges_[i + 1])) throw ConfigError("bin edges must be strictly increasing");
  }
  const std::size_t n = edges_.size() - 1;
  mirror_symmetric_ = true;
  for (std::size_t i = 0; i <= n; ++i) {
    if (edges_[i] != -edges_[n - i]) {
      mirror_symmetric_ = false;
      break;
    }
  }
}

BinLayout BinLayout::from_edges(std::vector<double> edges) { return BinLayout(std::move(edges)); }

BinLayout BinLayout::uniform(double lo, double hi, double width) {
  if (!(lo < hi) || !(width > 0.0)) throw ConfigError("uniform bins need lo < hi and width > 0");
  const double ratio = (hi - lo) / width;
  auto n = static_cast<std::size_t>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, ratio)) {
    n = static_cast<std::size_t>(std::ceil(ratio));
  }
  n = std::max<std::size_t>(n, 1);
  std::vector<double> edges(n + 1);
  for (std::size_t i = 0; i <= n; ++i) edges[i] = std::min(hi, lo + static_cast<double>(i) * width);
  edges[n] = hi;
  if (lo == -hi) {
    for (std::size_t i = 0; i <= n / 2; ++i) edges[n - i] = -edges[i];
    if (n % 2 == 0) edges[n / 2] = 0.0;
  }
  return BinLayout(std::move(edges));
}

BinLayout BinLayout::snapped(double lo, double hi, double spacing, unsigned subdivisions) {
  if (!(lo < hi) || !(spacing > 0.0) || subdivisions == 0) {
    throw ConfigError("snapped bins need lo < hi, spacing > 0, subdivisions >= 1");
  }
  const double w = spacing / subdivisions;
  const auto first = static_cast<std::int64_t>(std::floor(lo / w));
  const auto last = static_cast<std::int64_t>(std::ceil(hi / w));
  std::vector<double> edges;
  edges.reserve(static_cast<std::size_t>(last - first + 1));
  for (std::int64_t j = first; j <= last; ++j) {
    const std::int64_t sub = static_cast<std::int64_t>(subdivisions);
    const double e = (j % sub == 0) ? static_cast<double>(j / sub) * spacing
                                    : static_cast<double>(j) * spacing / static_cast<double>(subdivisions);
    edges.push_back(e);
  }
  return BinLayout(std::move(edges));
}

std::optional<std::size_t> BinLayout::locate(double x) const {
  if (!(x >= edges_.front() && x <= edges_.back())) return std::nullopt;
  if (x == edges_.back()) return bins() - 1;
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
  return static_cast<std::size_t>(it - edges_.begin()) - 1;
}

std::uint64_t Histogram::total_count() const {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

double Histogram::total_mass() const {
  detail::CompensatedSum acc;
  for (double m : masses) acc.add(m);
  return acc.value();
}

Histogram histogram(const AtomMeasure& measure, const BinLayout& bins) {
  BlockHistogram block;
  block.counts.assign(bins.bins(), 0);
  for (double x : measure.atoms) bin_atom(bins, measure.side, x, block);
  block.visited = measure.atoms.size();
  return finish_histogram(bins, measure.config, measure.side, {block});
}

Histogram stream_histogram(const CorrelationConfig& config, const BinLayout& bins, Side side, unsigned threads) {
  const WindowSpec w = spec_of(config);
  const auto blocks = detail::map_blocks<BlockHistogram>(1, w.n, kBlockSize, threads,
                                                         [&](std::uint64_t begin, std::uint64_t end) {
                                                           BlockHistogram h;
                                                           h.counts.assign(bins.bins(), 0);
                                                           visit_range(w, begin, end, [&](double x) {
                                                             ++h.visited;
                                                             bin_atom(bins, side, x, h);
                                                           });
                                                           return h;
                                                         });
  return finish_histogram(bins, config, side, blocks);
}

double count_in_shrinking_window(double alpha, double beta, std::uint64_t n, double a, double b, unsigned threads) {
  if (!(a < b)) throw PreconditionError("count_in_shrinking_window needs a < b");
  if (!(beta > 0.0 && beta < 1.0)) throw PreconditionError("beta must lie in (0,1)");
  if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("alpha must lie in (0,1)");
  if (n < 1) throw PreconditionError("N must be >= 1");
  const double nd = static_cast<double>(n);
  const WindowSpec w{alpha, std::pow(nd, beta), std::max(std::abs(a), std::abs(b)), n};
  const auto partial = detail::map_blocks<std::uint64_t>(1, n, kBlockSize, threads,
                                                         [&](std::uint64_t begin, std::uint64_t end) {
                                                           std::uint64_t count = 0;
                                                           visit_range(w, begin, end, [&](double x) {
                                                             if (a < x && x < b) ++count;
                                                             if (a < -x && -x < b) ++count;
                                                           });
                                                           return count;
                                                         });
  std::uint64_t total = 0;
  for (auto c : partial) total += c;
  return static_cast<double>(total) / std::pow(nd, 2.0 - alpha - beta);
}

double empirical_repulsion_gap(const CorrelationConfig& config) {
  const double nd = static_cast<double>(config.n());
  return config.alpha() * config.phi() / std::pow(2.0 * nd, 1.0 - config.alpha());
}

}  // namespace paircorr
