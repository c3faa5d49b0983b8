#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "boxsim/ensemble.hpp"

using namespace boxsim;

TEST_SUITE_BEGIN("ensemble");

namespace {

const TrapSpec kWedge = TrapSpec::wedge(std::numbers::pi / 4.0);
const TrapSpec kHarm = TrapSpec::harmonic();

struct Moments {
  double mean = 0.0, var = 0.0, kurt_excess = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double m = 0.0;
  for (double x : xs) m += x;
  m /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double x : xs) {
    const double d = x - m;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m4 /= n;
  return {m, m2, m4 / (m2 * m2) - 3.0};
}

// Inverse CDF of Gamma(2,1), used only by the goodness-of-fit oracle.
double gamma2_quantile(double q) {
  double lo = 0.0, hi = 60.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double cdf = 1.0 - (1.0 + mid) * std::exp(-mid);
    (cdf < q ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("wedge canonical moments at 10^6 draws") {
  const SamplerSpec spec{kWedge, 100e-6, 0xC0FFEE};
  const int n = 1000000;
  std::vector<double> ys(n), kes(n), xs(n);
  for (int k = 0; k < n; ++k) {
    const PhaseState s = sample_initial(spec, k);
    ys[k] = s.r.y();
    xs[k] = s.r.x();
    kes[k] = 0.5 * s.p.squaredNorm();
  }
  const Moments my = moments(ys);
  CHECK(my.mean == doctest::Approx(2.0).epsilon(0.0025));   // +-0.005 absolute
  CHECK(std::abs(my.mean - 2.0) < 0.005);
  CHECK(std::abs(my.var - 2.0) < 0.02);
  const Moments mk = moments(kes);
  CHECK(std::abs(mk.mean - 1.0) < 0.005);
  const Moments mx = moments(xs);
  CHECK(std::abs(mx.mean) < 3.0 * std::sqrt(mx.var / n));
}

TEST_CASE("harmonic canonical moments and momentum gaussianity at 10^6 draws") {
  const SamplerSpec spec{kHarm, 100e-6, 0xC0FFEE};
  const int n = 1000000;
  std::vector<double> xs(n), pxs(n), pys(n);
  for (int k = 0; k < n; ++k) {
    const PhaseState s = sample_initial(spec, k);
    xs[k] = s.r.x();
    pxs[k] = s.p.x();
    pys[k] = s.p.y();
  }
  CHECK(std::abs(moments(xs).var - 1.0) < 0.005);
  CHECK(std::abs(moments(pxs).kurt_excess) < 0.02);
  CHECK(std::abs(moments(pys).kurt_excess) < 0.02);
}

TEST_CASE("all wedge samples satisfy the wall constraint exactly") {
  const SamplerSpec spec{kWedge, 100e-6, 1234};
  for (int k = 0; k < 100000; ++k) {
    const PhaseState s = sample_initial(spec, k);
    CHECK(std::abs(s.r.x()) <= s.r.y() * kWedge.tan_alpha);
    CHECK(s.r.y() > 0.0);
  }
}

TEST_CASE("chi-square goodness of fit of the wedge height against y e^-y") {
  const SamplerSpec spec{kWedge, 100e-6, 0xC0FFEE};
  const int n = 1000000;
  const int bins = 50;
  std::vector<double> edges(bins + 1);
  edges[0] = 0.0;
  for (int b = 1; b < bins; ++b)
    edges[b] = gamma2_quantile(static_cast<double>(b) / bins);
  edges[bins] = 1e30;
  std::vector<long> counts(bins, 0);
  for (int k = 0; k < n; ++k) {
    const double y = sample_initial(spec, k).r.y();
    const auto it = std::upper_bound(edges.begin(), edges.end(), y);
    ++counts[std::min<std::ptrdiff_t>(bins - 1, it - edges.begin() - 1)];
  }
  const double expected = static_cast<double>(n) / bins;
  double chi2 = 0.0;
  for (long c : counts) {
    const double d = c - expected;
    chi2 += d * d / expected;
  }
  // 0.999 quantile of chi^2 with 49 dof
  CHECK(chi2 < 85.35056460859305);
}

TEST_CASE("height-boltzmann mode draws the height from e^-y") {
  SamplerSpec spec{kWedge, 100e-6, 0xC0FFEE, WedgeEnsemble::HeightBoltzmann};
  const int n = 400000;
  std::vector<double> ys(n);
  for (int k = 0; k < n; ++k) ys[k] = sample_initial(spec, k).r.y();
  const Moments m = moments(ys);
  CHECK(std::abs(m.mean - 1.0) < 0.006);
  CHECK(std::abs(m.var - 1.0) < 0.02);
}

TEST_CASE("sampling is a pure function of (seed, index)") {
  const SamplerSpec spec{kWedge, 100e-6, 0xFEED};
  for (int k : {0, 1, 17, 100000}) {
    const PhaseState a = sample_initial(spec, k);
    const PhaseState b = sample_initial(spec, k);
    CHECK(a.r.x() == b.r.x());
    CHECK(a.r.y() == b.r.y());
    CHECK(a.p.x() == b.p.x());
    CHECK(a.p.y() == b.p.y());
  }
  // different seeds decorrelate
  const SamplerSpec other{kWedge, 100e-6, 0xFEED + 1};
  CHECK(sample_initial(spec, 0).r.y() != sample_initial(other, 0).r.y());
  CHECK_THROWS_AS(sample_initial(spec, -1), std::invalid_argument);
}

TEST_CASE("initial area: harmonic closed forms") {
  const SamplerSpec spec{kHarm, 100e-6, 1};
  // eps = e^-2 gives r = 2 and A = 4 pi
  CHECK(initial_area(spec, std::exp(-2.0)) ==
        doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-12));
  CHECK(initial_area(spec, 0.01) ==
        doctest::Approx(28.935137649661859).epsilon(1e-12));
}

TEST_CASE("initial area: wedge root and limits") {
  const SamplerSpec spec{kWedge, 100e-6, 1};
  // independent bisection oracle for (1+y)e^-y = eps
  auto oracle = [](double eps) {
    double lo = 0.0, hi = 80.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      ((1.0 + mid) * std::exp(-mid) > eps ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  const double y01 = oracle(0.01);
  CHECK(y01 == doctest::Approx(6.63835206799381).epsilon(1e-9));
  CHECK(initial_area(spec, 0.01) ==
        doctest::Approx(y01 * y01 * kWedge.tan_alpha).epsilon(1e-9));
  CHECK(initial_area(spec, 0.01) == doctest::Approx(44.0677).epsilon(1e-4));
  // eps -> 1 collapses the region
  CHECK(initial_area(spec, 1.0 - 1e-6) < 1e-5);
  CHECK_THROWS_AS(initial_area(spec, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(initial_area(spec, 1.0), std::invalid_argument);
  // strictly decreasing in eps
  CHECK(initial_area(spec, 0.02) < initial_area(spec, 0.01));
}

TEST_SUITE_END();
