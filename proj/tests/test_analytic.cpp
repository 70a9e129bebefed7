// Copyright 2026 The hbac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Expected constants below were evaluated at 50 significant digits from the
// raw power-form expressions ((1+e)^k - (1-e)^k) / ((1+e)^k + (1-e)^k),
// (1-Q)Q^{i-1}/(1-Q^{2d}) and e / (1 - ((1-e)/(1+e))^{2^{n-1}}), not from the
// tanh / expm1 forms used by the library.

#include <cmath>

#include "doctest.h"

#include "hbac/analytic.hpp"
#include "hbac/engine.hpp"

using namespace hbac;
using doctest::Approx;

namespace {

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

/// Direct power form, fine for small k.
double power_form(double k, double e) {
  const double up = std::pow(1 + e, k), down = std::pow(1 - e, k);
  return (up - down) / (up + down);
}

}  // namespace

TEST_CASE("steady_state") {
  SUBCASE("eps_b = 0 is uniform") {
    for (Index d : {1, 2, 5}) {
      const auto ss = steady_state(SystemConfig(d, 2, 0.0));
      CHECK(ss.q_ratio == 1.0);
      for (Index i = 0; i < 2 * d; ++i) CHECK(ss.a[i] == Approx(1.0 / (2 * d)).epsilon(1e-15));
    }
  }
  SUBCASE("d = 2, m = 1, eps_b = 0.1") {
    const auto ss = steady_state(SystemConfig(2, 1, 0.1));
    CHECK(rel_close(ss.q_ratio, 9.0 / 11.0, 1e-15));
    const double want[] = {0.32945544554455445545, 0.26955445544554455446, 0.22054455445544554455,
                           0.18044554455445544554};
    for (Index i = 0; i < 4; ++i) CHECK(rel_close(ss.a[i], want[i], 1e-14));
  }
  SUBCASE("eps_b -> 1 concentrates on A_1") {
    const auto ss = steady_state(SystemConfig(3, 1, 1.0 - 1e-12));
    CHECK(ss.a[0] == Approx(1.0).epsilon(1e-9));
    for (Index i = 1; i < 6; ++i) CHECK(ss.a[i] < 1e-9);
  }
  SUBCASE("structure: strictly decreasing, ratio Q, equality condition") {
    for (Index d : {1, 2, 3, 8, 32})
      for (Index m : {1, 2, 4})
        for (double eps : {1e-6, 0.01, 0.3, 0.9}) {
          const SystemConfig cfg(d, m, eps);
          const auto ss = steady_state(cfg);
          CHECK(std::abs(ss.a.probs().sum() - 1.0) <= 1e-12);
          const double lo = std::pow(1 - eps, double(m)), hi = std::pow(1 + eps, double(m));
          for (Index i = 0; i + 1 < 2 * d; ++i) {
            CHECK(ss.a[i + 1] < ss.a[i]);
            if (ss.a[i + 1] < 1e-290) continue;  // denormal tail
            CHECK(rel_close(ss.a[i + 1] / ss.a[i], ss.q_ratio, 1e-12));
            CHECK(rel_close(ss.a[i] * lo, ss.a[i + 1] * hi, 1e-12));
          }
        }
  }
}

TEST_CASE("asymptotic_polarization") {
  CHECK(rel_close(asymptotic_polarization(SystemConfig(2, 1, 0.1)), 0.19801980198019801980, 1e-15));
  CHECK(rel_close(asymptotic_polarization(SystemConfig(2, 1, 0.1)), 2 * 0.1 / (1 + 0.01), 1e-15));
  CHECK(asymptotic_polarization(SystemConfig(7, 3, 0.0)) == 0.0);
  const double big = asymptotic_polarization(SystemConfig(64, 1, 1e-4));
  CHECK(rel_close(big, 0.0063999126414307583688, 1e-13));
  CHECK(rel_close(big, 64 * 1e-4, 1e-4));
  CHECK(rel_close(asymptotic_polarization(SystemConfig(3, 1, 0.05)), 0.14900744416873449132, 1e-14));
  CHECK(rel_close(asymptotic_polarization(SystemConfig(4, 1, 0.01)), 0.039980011593243937705, 1e-14));

  SUBCASE("tanh form equals the power form at small md") {
    for (Index d : {1, 2, 3, 4, 6})
      for (Index m : {1, 2, 3})
        for (double eps : {0.001, 0.1, 0.5, 0.95})
          CHECK(rel_close(asymptotic_polarization(SystemConfig(d, m, eps)),
                          power_form(double(d * m), eps), 1e-13));
  }
  SUBCASE("huge md stays finite") {
    const SystemConfig cfg(Index{1} << 20, 1, 0.9);
    CHECK(asymptotic_polarization(cfg) == 1.0);
  }
  SUBCASE("strictly increasing in d, m and eps_b") {
    for (double eps : {1e-4, 0.01, 0.1})
      for (Index m : {1, 2})
        for (Index d = 1; d < 8; ++d) {
          CHECK(asymptotic_polarization(SystemConfig(d + 1, m, eps)) >
                asymptotic_polarization(SystemConfig(d, m, eps)));
          CHECK(asymptotic_polarization(SystemConfig(d, m + 1, eps)) >
                asymptotic_polarization(SystemConfig(d, m, eps)));
          CHECK(asymptotic_polarization(SystemConfig(d, m, eps * 1.5)) >
                asymptotic_polarization(SystemConfig(d, m, eps)));
        }
  }
  SUBCASE("low-polarization regime: eps_inf ~ m d eps_b within 1%") {
    for (Index d : {2, 3, 4, 8, 16, 64})
      for (Index m : {1, 2, 3})
        for (double eps = 1e-6; eps < 0.5; eps *= 1.7) {
          if (double(m * d) * eps > 0.05) continue;
          CHECK(std::abs(asymptotic_polarization(SystemConfig(d, m, eps)) / (double(m * d) * eps) - 1) < 0.01);
        }
  }
}

TEST_CASE("delta_max") {
  SUBCASE("md ln((1+e)/(1-e)) = ln 3 gives 0.5") {
    // 2 e2x = 3 with x = md atanh(e): atanh(e) = ln(3)/(2 md)
    const Index d = 4, m = 1;
    const double eps = std::tanh(std::log(3.0) / (2.0 * d * m));
    CHECK(delta_max(SystemConfig(d, m, eps)) == Approx(0.5).epsilon(1e-14));
  }
  CHECK(rel_close(delta_max(SystemConfig(2, 1, 0.1)), 0.80198019801980198020, 1e-15));

  SUBCASE("complement identity") {
    for (Index d : {1, 2, 8, 64, 1024})
      for (Index m : {1, 3})
        for (double eps : {1e-5, 0.01, 0.2, 0.6}) {
          const SystemConfig cfg(d, m, eps);
          const double dm = delta_max(cfg), ep = asymptotic_polarization(cfg);
          if (dm > 1e-300 && ep > 1e-300) CHECK(std::abs(dm + ep - 1.0) <= 1e-12);
        }
  }
  SUBCASE("doubling d squares the exponential factor") {
    for (double eps : {0.003, 0.05, 0.2})
      for (Index d : {1, 2, 4, 8}) {
        const double f1 = 2 / delta_max(SystemConfig(d, 1, eps)) - 1;
        const double f2 = 2 / delta_max(SystemConfig(2 * d, 1, eps)) - 1;
        CHECK(rel_close(f2, f1 * f1, 1e-12));
      }
  }
  SUBCASE("large exponents underflow gracefully instead of producing NaN") {
    const double v = delta_max(SystemConfig(Index{1} << 20, 2, 0.5));
    CHECK(v == 0.0);
    const double tiny = delta_max(SystemConfig(200, 1, 0.9));
    CHECK(std::isfinite(tiny));
    CHECK(tiny > 0.0);
    CHECK(rel_close(tiny, 2 * std::exp(-400 * std::atanh(0.9)), 1e-9));
  }
}

TEST_CASE("per_qubit_polarization") {
  const SystemConfig cfg(4, 1, 0.1);
  CHECK(per_qubit_polarization(cfg, 1) == Approx(0.1).epsilon(1e-15));
  CHECK(rel_close(per_qubit_polarization(cfg, 2), 0.19801980198019801980, 1e-14));
  CHECK(rel_close(per_qubit_polarization(cfg, 3), 0.38109612300726346571, 1e-14));
  CHECK(per_qubit_polarization(cfg, 3) == asymptotic_polarization(cfg));
  for (Index d : {1, 2, 8, 32}) {
    const SystemConfig c(d, 2, 0.07);
    CHECK(per_qubit_polarization(c, c.scratch_qubits() + 1) == asymptotic_polarization(c));
    CHECK(rel_close(per_qubit_polarization(c, 1), power_form(2, 0.07), 1e-14));
  }
  CHECK_THROWS_AS(per_qubit_polarization(SystemConfig(3, 1, 0.1), 1), std::invalid_argument);
  CHECK_THROWS_AS(per_qubit_polarization(cfg, 0), std::invalid_argument);
  CHECK_THROWS_AS(per_qubit_polarization(cfg, 4), std::invalid_argument);
  CHECK(per_qubit_polarizations(cfg).size() == 3);
}

TEST_CASE("steady_temperature_ratio") {
  CHECK(steady_temperature_ratio(SystemConfig(2, 1, 0.1), 1.0) == 0.5);
  CHECK(steady_temperature_ratio(SystemConfig(16, 1, 0.1), 1.0) == 1.0 / 16);
  CHECK_THROWS_AS(steady_temperature_ratio(SystemConfig(2, 1, 0.1), 0.0), std::invalid_argument);

  SUBCASE("a target at T_steady is polarized to eps_infinity") {
    for (Index d : {2, 3, 8})
      for (Index m : {1, 2})
        for (double eps : {0.01, 0.2})
          for (double gap : {0.5, 1.0, 3.0}) {
            const SystemConfig cfg(d, m, eps);
            // Units with dE_b = 1, k = 1: 1 / (2 T_b) = atanh(eps_b).
            const double t_bath = 1 / (2 * std::atanh(eps));
            const double t_steady = steady_temperature_ratio(cfg, gap) * t_bath;
            CHECK(rel_close(std::tanh(gap / (2 * t_steady)), asymptotic_polarization(cfg), 1e-12));
          }
  }
}

TEST_CASE("transition_marker") {
  for (Index d : {2, 4, 8, 16, 32, 64}) {
    const auto [eps, lim] = transition_marker<double>(d, 1);
    CHECK(eps == 1.0 / d);
    CHECK(lim == asymptotic_polarization(SystemConfig(d, 1, eps)));
    CHECK(rel_close(lim, power_form(double(d), 1.0 / d), 1e-12));
  }
  CHECK(transition_marker<double>(2, 1).second == Approx(0.8));
  CHECK_THROWS_AS(transition_marker<double>(1, 1), std::invalid_argument);
}

TEST_CASE("bound_comparison") {
  SUBCASE("n = 3, eps_b = 0.01") {
    const auto b = bound_comparison(3, 0.01);
    CHECK(rel_close(b.p_max, 0.13006249500049995000, 1e-12));
    CHECK(rel_close(b.schulman_bound, 0.13010152025303540455, 1e-12));
    CHECK(b.p_max <= b.schulman_bound);
  }
  SUBCASE("eps_b -> 1") {
    const auto b = bound_comparison(4, 0.999999);
    CHECK(b.p_max == Approx(1.0).epsilon(1e-5));
    CHECK(b.schulman_bound == 1.0);
  }
  SUBCASE("p_max equals A_1 (1 + eps_b) / 2 with d = 2^{n-2}, m = 1") {
    for (int n = 2; n <= 10; ++n)
      for (double eps = 1e-6; eps < 0.99; eps *= 2.3) {
        const auto b = bound_comparison(n, eps);
        const auto ss = steady_state(SystemConfig(Index{1} << (n - 2), 1, eps));
        CHECK(rel_close(b.p_max, ss.a[0] * (1 + eps) / 2, 1e-12));
      }
  }
  SUBCASE("domination on a log grid") {
    for (int n : {3, 4, 5, 6})
      for (int i = 0; i < 400; ++i) {
        const double eps = std::exp(std::log(1e-6) + i / 399.0 * (std::log(0.999) - std::log(1e-6)));
        const auto b = bound_comparison(n, eps);
        CHECK(b.p_max <= b.schulman_bound + 1e-12);
      }
  }
  CHECK_THROWS_AS(bound_comparison(1, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(bound_comparison(3, 0.0), std::invalid_argument);
}

TEST_CASE("three-qubit round map and closed form") {
  CHECK(three_qubit_round_map(0.0, 0.0) == 0.0);
  for (double eps : {0.01, 0.1, 0.5}) {
    const double fixed = 2 * eps / (1 + eps * eps);
    CHECK(three_qubit_round_map(fixed, eps) == Approx(fixed).epsilon(1e-15));
  }
  CHECK(three_qubit_round_map(0.1, 0.1) == Approx(0.1495).epsilon(1e-15));
  CHECK_THROWS_AS(three_qubit_round_map(1.5, 0.1), std::invalid_argument);

  CHECK(polarization_after_rounds(0, 0.1) == Approx(0.1).epsilon(1e-15));
  CHECK(polarization_after_rounds(1, 0.1) == Approx(0.1495).epsilon(1e-15));
  CHECK(polarization_after_rounds(100000, 0.1) == Approx(2 * 0.1 / 1.01).epsilon(1e-15));
  for (double eps : {0.05, 0.1, 0.3}) {
    double e = eps;
    for (long j = 0; j <= 50; ++j) {
      CHECK(std::abs(polarization_after_rounds(j, eps) - e) <= 1e-15);
      e = three_qubit_round_map(e, eps);
    }
  }
}

TEST_CASE("steps_exact_3qubit") {
  const double eps = 0.1;
  const double gap = 2 * eps / (1 + eps * eps) - eps;
  const double q = (1 - eps * eps) / 2;
  CHECK(steps_exact_3qubit(gap, eps) == Approx(0.0));
  CHECK(steps_exact_3qubit(q * gap, eps) == Approx(2.0).epsilon(1e-14));
  CHECK(rel_close(steps_exact_3qubit(0.01, eps), 6.4920150398976235816, 1e-13));
  CHECK(rounds_exact_3qubit(0.01, eps) == 4);
  CHECK(rounds_exact_3qubit(q * gap, eps) == 1);
  CHECK(rounds_exact_3qubit(gap, eps) == 0);

  CHECK_THROWS_AS(steps_exact_3qubit(0.0, eps), std::domain_error);
  CHECK_THROWS_AS(steps_exact_3qubit(-0.01, eps), std::domain_error);
  CHECK_THROWS_AS(steps_exact_3qubit(gap * 1.01, eps), std::domain_error);
  CHECK_THROWS_AS(steps_exact_3qubit(0.01, 0.0), std::invalid_argument);

  const auto r = steps_report(0.01, 0.1);
  CHECK(r.rounds_exact_3qubit == 4);
  CHECK(r.iterations_exact_3qubit == 9);
  CHECK_FALSE(r.upper_bound_n_qubit.has_value());

  SUBCASE("rounds hit the closed-form threshold exactly") {
    for (double e : {0.05, 0.1, 0.3})
      for (double drel : {0.3, 0.1, 0.03, 0.01, 1e-4}) {
        const double delta = drel * 2 * e / (1 + e * e);
        const long j = rounds_exact_3qubit(delta, e);
        const double limit = 2 * e / (1 + e * e);
        CHECK(polarization_after_rounds(j, e) >= limit - delta - 1e-15);
        if (j > 0) CHECK(polarization_after_rounds(j - 1, e) < limit - delta);
        CHECK(std::abs(j - std::ceil(steps_exact_3qubit(delta, e) / 2)) <= 1);
      }
  }
}

TEST_CASE("steps_upper_bound") {
  SUBCASE("single stage reduces to the three-qubit count") {
    for (int np : {2, 3}) {
      const auto r = steps_upper_bound(np, 0.1, std::vector<double>{0.01});
      REQUIRE(r.levels.size() == 1);
      CHECK(*r.upper_bound_n_qubit == r.steps_exact_3qubit);
    }
  }
  SUBCASE("n' = 4, eps_b = 0.1, deltas (0.01, 0.01)") {
    const auto r = steps_upper_bound(4, 0.1, std::vector<double>{0.01, 0.01});
    REQUIRE(r.intermediate_eps.size() == 3);
    CHECK(r.intermediate_eps[0] == 0.1);
    CHECK(rel_close(r.intermediate_eps[1], 0.18801980198019801980, 1e-14));
    CHECK(rel_close(r.intermediate_eps[2], 0.35319996020307528388, 1e-13));
    CHECK(rel_close(r.levels[0].steps, 6.4920150398976235816, 1e-13));
    CHECK(rel_close(r.levels[1].steps, 7.8537324984029851825, 1e-13));
    CHECK(rel_close(*r.upper_bound_n_qubit, 50.986549498964918781, 1e-13));
    CHECK(*r.eps_reached == r.intermediate_eps[2]);
    CHECK(r.levels[1].cumulative == *r.upper_bound_n_qubit);
    // A shared delta gives the same report.
    const auto shared = steps_upper_bound(5, 0.1, std::vector<double>{0.01});
    CHECK(*shared.upper_bound_n_qubit == *r.upper_bound_n_qubit);
  }
  SUBCASE("vanishing deltas approach the h-fold composition of f") {
    const auto r = steps_upper_bound(6, 0.05, std::vector<double>{1e-12});
    double e = 0.05;
    for (int k = 0; k < 3; ++k) e = 2 * e / (1 + e * e);
    CHECK(*r.eps_reached == Approx(e).epsilon(1e-10));
    CHECK(*r.upper_bound_n_qubit > 1e3);
  }
  SUBCASE("invalid input") {
    CHECK_THROWS_AS(steps_upper_bound(1, 0.1, std::vector<double>{0.01}), std::invalid_argument);
    CHECK_THROWS_AS(steps_upper_bound(4, 0.1, std::vector<double>{0.01, 0.01, 0.01}),
                    std::invalid_argument);
    CHECK_THROWS_AS(steps_upper_bound(4, 0.1, std::vector<double>{0.01, 0.5}), std::domain_error);
  }
}

TEST_CASE("eps_max_swap_scheme") {
  CHECK(eps_max_swap_scheme(SystemConfig(2, 1, 0.1)) == Approx(0.1).epsilon(1e-15));
  CHECK(rel_close(eps_max_swap_scheme(SystemConfig(4, 1, 0.1)), 0.19801980198019801980, 1e-14));
  for (Index d : {2, 4, 8, 16}) {
    const SystemConfig cfg(d, 1, 0.03);
    CHECK(eps_max_swap_scheme(cfg) == per_qubit_polarization(cfg, cfg.scratch_qubits()));
  }
  CHECK_THROWS_AS(eps_max_swap_scheme(SystemConfig(3, 1, 0.1)), std::invalid_argument);
}
