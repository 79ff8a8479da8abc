#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "paircorr/density.hpp"
#include "paircorr/empirical.hpp"

using namespace paircorr;

namespace {

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

CorrelationConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> a(0.2, 0.9), u(0.0, 1.0), w(1.5, 10.0);
  std::uniform_int_distribution<std::uint64_t> n(1, 3000);
  const double alpha = a(rng);
  const double pick = u(rng);
  ScalingSpec s = pick < 0.33 ? ScalingSpec(PowerBeta{(1.0 - alpha) * (0.2 + 0.7 * u(rng))})
                  : pick < 0.66 ? ScalingSpec(ScaledPower{0.3 + 3.0 * u(rng)})
                                : ScalingSpec(PowerBeta{(1.0 - alpha) + alpha * 0.5 * u(rng)});
  return CorrelationConfig(alpha, s, n(rng), w(rng));
}

}  // namespace

TEST_CASE("three-term example") {
  const CorrelationConfig c(0.5, PowerBeta{0.5}, 3, 2.0);
  const auto m = enumerate_window(c);
  REQUIRE(m.size() == 3);
  const auto atoms = sorted(m.atoms);
  const double r3 = std::sqrt(3.0);
  CHECK(atoms[0] == doctest::Approx(r3 * (r3 - std::sqrt(2.0))).epsilon(1e-15));
  CHECK(atoms[1] == doctest::Approx(r3 * (std::sqrt(2.0) - 1.0)).epsilon(1e-15));
  CHECK(atoms[2] == doctest::Approx(r3 * (r3 - 1.0)).epsilon(1e-15));
  CHECK(atoms[0] == doctest::Approx(0.55051).epsilon(1e-5));
  CHECK(m.weight == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(sorted(brute_force_measure(c).atoms) == atoms);

  const auto h = histogram(m, BinLayout::uniform(0.0, 1.5, 0.5));
  REQUIRE(h.bins() == 3);
  CHECK(h.masses[0] == 0.0);
  CHECK(h.masses[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(h.masses[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("N = 1 is empty") {
  const CorrelationConfig c(0.5, PowerBeta{0.5}, 1, 2.0);
  CHECK(enumerate_window(c).empty());
  CHECK(brute_force_measure(c).empty());
  CHECK(count_window_atoms(c) == 0);
}

TEST_CASE("p-bound") {
  const CorrelationConfig c(0.5, PowerBeta{0.5}, 100, 2.0);
  CHECK(p_bound_exact(c, 99) == 4);
  CHECK(oracle::p_bound_scan(0.5, 10.0, 2.0, 99, 1000) == 4);

  const CorrelationConfig big(0.5, PowerBeta{0.5}, 1'000'000, 8.0);
  CHECK(p_bound_exact(big, 1) == oracle::p_bound_scan(0.5, 1000.0, 8.0, 1, 100));
  CHECK(p_bound_exact(big, 1) == 0);

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint64_t> mdist(1, 5000);
  for (int i = 0; i < 40; ++i) {
    const auto cfg = random_config(rng);
    const auto m = mdist(rng);
    const auto ours = p_bound_exact(cfg, m);
    const auto ref = oracle::p_bound_scan(cfg.alpha(), cfg.phi(), cfg.window(), m, ours + 3);
    // agreement up to a boundary tie within double rounding
    CHECK(ours <= ref + 1);
    CHECK(ref <= ours + 1);
    if (ours != ref) {
      const double edge = static_cast<double>(oracle::scaled_difference(cfg.alpha(), cfg.phi(), m, std::max(ours, ref)));
      CHECK(std::abs(edge - cfg.window()) <= 1e-12 * cfg.window());
    }
  }
  CHECK_THROWS_AS(p_bound_exact(c, 0), PreconditionError);
}

TEST_CASE("enumeration equals the brute-force oracle") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 25; ++i) {
    const auto c = random_config(rng);
    const auto fast = enumerate_window(c);
    const auto slow = brute_force_measure(c);
    CHECK(fast.size() == count_window_atoms(c));
    CHECK(sorted(fast.atoms) == sorted(slow.atoms));
  }
}

TEST_CASE("cancellation-safe difference against 50 digits") {
  for (std::uint64_t m : {10ull, 1000ull, 999'999ull}) {
    for (std::uint64_t p : {1ull, 3ull, 50ull}) {
      const double mpow = std::pow(static_cast<double>(m), 0.5);
      const double ours = 1000.0 * power_difference(mpow, 0.5, static_cast<double>(m), static_cast<double>(p));
      const double ref = static_cast<double>(oracle::scaled_difference(0.5, 1000.0, m, p));
      CHECK(ours == doctest::Approx(ref).epsilon(1e-14));
    }
  }
}

TEST_CASE("level repulsion and vanishing") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 20; ++i) {
    const auto c = random_config(rng);
    const auto m = enumerate_window(c);
    if (!m.empty()) CHECK(*std::min_element(m.atoms.begin(), m.atoms.end()) >= empirical_repulsion_gap(c));
  }
  const CorrelationConfig v(0.5, PowerBeta{0.9}, 5000, 4.0);
  REQUIRE(empirical_repulsion_gap(v) > 4.0);
  CHECK(enumerate_window(v).empty());
  CHECK(evaluate_streaming(v, TestFunction::bump_symmetric(4.0), Side::Symmetric) == 0.0);
}

TEST_CASE("resource cap") {
  const CorrelationConfig c(0.5, PowerBeta{0.5}, 10000, 8.0);
  EnumerationOptions o;
  o.atom_cap = 10;
  CHECK_THROWS_AS(enumerate_window(c, o), ResourceError);
  try {
    enumerate_window(c, o);
  } catch (const ResourceError& e) {
    CHECK(e.requested() == count_window_atoms(c));
    CHECK(e.cap() == 10);
  }
}

TEST_CASE("evaluate: materialized, streaming, symmetric") {
  const CorrelationConfig c(0.4, ScaledPower{1.2}, 4000, 3.0);
  const auto m = enumerate_window(c);
  const auto f = TestFunction::bump_on(-2.0, 2.9, 1.7);
  double direct = 0.0;
  for (double x : m.atoms) direct += f(x);
  direct *= m.weight;
  CHECK(evaluate(m, f) == doctest::Approx(direct).epsilon(1e-13));
  CHECK(evaluate_streaming(c, f, Side::PositiveOnly) == doctest::Approx(direct).epsilon(1e-13));

  const auto s = symmetrize(m);
  double both = 0.0;
  for (double x : s.support_points()) both += f(x);
  both *= m.weight;
  CHECK(evaluate(s, f) == doctest::Approx(both).epsilon(1e-13));
  CHECK(evaluate_streaming(c, f, Side::Symmetric) == doctest::Approx(both).epsilon(1e-13));
  CHECK_THROWS_AS(evaluate(m, TestFunction::bump_symmetric(3.5)), PreconditionError);
}

TEST_CASE("histograms") {
  const CorrelationConfig c(0.5, PowerBeta{0.5}, 20000, 4.0);
  const auto m = enumerate_window(c);
  const auto layout = BinLayout::uniform(-4.0, 4.0, 0.05);
  CHECK(layout.mirror_symmetric());

  const auto hs = stream_histogram(c, layout, Side::Symmetric);
  const auto hm = histogram(symmetrize(m), layout);
  CHECK(hs.counts == hm.counts);
  CHECK(hs.masses == hm.masses);
  // mirror symmetry, exact
  for (std::size_t i = 0; i < hs.bins(); ++i) CHECK(hs.counts[i] == hs.counts[hs.bins() - 1 - i]);
  // conservation: integer counts exactly, masses within rounding
  CHECK(hs.total_count() + hs.out_of_range == 2 * m.size());
  CHECK(hs.total_mass() == doctest::Approx(hs.weight * static_cast<double>(hs.total_count())).epsilon(1e-14));

  // single bin [0, A] holds every positive atom
  const auto one = histogram(m, BinLayout::from_edges({0.0, 4.0}));
  CHECK(one.counts[0] == m.size());

  // thread count does not change anything
  CHECK(stream_histogram(c, layout, Side::Symmetric, 4).masses == hs.masses);

  // snapped edges are exact multiples
  const auto snapped = BinLayout::snapped(0.0, 4.0, 0.5, 10);
  for (int k = 0; k <= 8; ++k) {
    CHECK(std::find(snapped.edges().begin(), snapped.edges().end(), 0.5 * k) != snapped.edges().end());
  }
  CHECK(layout.locate(4.0).value() == layout.bins() - 1);
  CHECK_FALSE(layout.locate(4.5).has_value());
}

TEST_CASE("repulsion zone bins are empty") {
  const CorrelationConfig c(0.5, PowerBeta{0.5}, 100000, 8.0);
  const auto h = stream_histogram(c, BinLayout::uniform(0.0, 8.0, 0.05), Side::PositiveOnly);
  const double gap = empirical_repulsion_gap(c);
  for (std::size_t i = 0; i < h.bins(); ++i) {
    if (h.edges[i + 1] <= gap) CHECK(h.counts[i] == 0);
  }
}

TEST_CASE("shrinking windows") {
  const double v5 = count_in_shrinking_window(0.5, 0.5, 100000, 0.4, 0.8);
  const double v6 = count_in_shrinking_window(0.5, 0.5, 1000000, 0.4, 0.8);
  CHECK(std::abs(v6 - 0.609375) < std::abs(v5 - 0.609375) + 1e-4);
  CHECK(v6 == doctest::Approx(0.609375).epsilon(1e-3));
  CHECK(count_in_shrinking_window(0.5, 0.5, 100000, 0.05, 0.3) == 0.0);
  CHECK(count_in_shrinking_window(0.5, 0.8, 100000, 0.5, 3.0) == 0.0);
  // the same count read through the measure
  const CorrelationConfig c(0.5, PowerBeta{0.5}, 100000, 1.5);
  const auto h = stream_histogram(c, BinLayout::from_edges({-0.8, -0.4, 0.4, 0.8}), Side::Symmetric);
  CHECK(count_in_shrinking_window(0.5, 0.5, 100000, 0.4, 0.8) ==
        doctest::Approx(h.masses[2]).epsilon(1e-12));
}

TEST_CASE("work bound for phi = N^(1-alpha)") {
  for (std::uint64_t n : {10000ull, 100000ull, 1000000ull}) {
    const CorrelationConfig c(0.5, ScaledPower{1.0}, n, 8.0);
    const double ratio = static_cast<double>(count_window_atoms(c)) / static_cast<double>(n);
    CHECK(ratio < 2.0 * 8.0 / (0.5 * 1.5));
  }
}
