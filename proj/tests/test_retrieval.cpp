#include <cmath>
#include <vector>

#include "doctest.h"
#include "ewsn/errors.hpp"
#include "ewsn/retrieval.hpp"
#include "testutil.hpp"

using ewsn::ModelParams;
using ewsn::RetrievalQuery;

namespace {

ModelParams params(int n, int b, double lambda_e, double mu = 0.4) {
  ModelParams p;
  p.n_sensors = n;
  p.battery_cap = b;
  p.harvest_rate = lambda_e;
  p.broadcast_rate = mu;
  return p;
}

// Deliberately wrong-signed variant of the closed form: carries
// (-1)^(N-k) where the implementation carries (-1)^(j-k). Used as a
// negative control for the quadrature gate.
double closed_form_sign_flipped(const RetrievalQuery& q) {
  const auto form = ewsn::survival_form(q.params);
  const int n = q.params.n_sensors;
  const double w = form.weight_fast;
  auto binom = [](int a, int b) {
    double c = 1.0;
    for (int i = 1; i <= b; ++i) c = c * (a - b + i) / i;
    return c;
  };
  double acc = 0.0;
  for (int j = 0; j < q.samples_needed; ++j) {
    for (int k = 0; k <= j; ++k) {
      const int m = n - k;
      const double sign = ((n - k) % 2 == 0) ? 1.0 : -1.0;
      for (int v = 0; v <= m; ++v) {
        acc += binom(n, j) * binom(j, k) * sign * binom(m, v) * std::pow(w, v) *
               std::pow(1.0 - w, m - v) /
               (form.rate_harvest * (m - v) + form.rate_broadcast * v);
      }
    }
  }
  return acc;
}

}  // namespace

TEST_CASE("query validation rejects s outside [1, N]") {
  CHECK_THROWS_AS(ewsn::retrieval_cdf({params(10, 4, 0.2), 11}, 1.0),
                  ewsn::ValidationError);
  CHECK_THROWS_AS(ewsn::expected_time_closed_form({params(10, 4, 0.2), 0}),
                  ewsn::ValidationError);
}

TEST_CASE("retrieval cdf: extreme ranks reduce to powers") {
  const ModelParams p = params(5, 2, 0.2);
  for (double t : {0.5, 2.0, 8.0}) {
    const double s_t = ewsn::broadcast_wait_survival(p, t);
    CHECK(ewsn::retrieval_cdf({p, 5}, t) ==
          doctest::Approx(std::pow(1.0 - s_t, 5)).epsilon(1e-12));
    CHECK(ewsn::retrieval_cdf({p, 1}, t) ==
          doctest::Approx(1.0 - std::pow(s_t, 5)).epsilon(1e-12));
  }
}

TEST_CASE("retrieval cdf agrees with the Kronecker path") {
  const RetrievalQuery q{params(4, 1, 0.2), 2};
  CHECK(ewsn::retrieval_cdf(q, 2.0) ==
        doctest::Approx(ewsn::retrieval_cdf_matrix(q, 2.0)).epsilon(1e-9));
  for (int s = 1; s <= 4; ++s) {
    const RetrievalQuery qs{params(4, 1, 0.2), s};
    for (double t : {0.5, 1.0, 2.0, 5.0, 15.0}) {
      CHECK(std::abs(ewsn::retrieval_cdf(qs, t) -
                     ewsn::retrieval_cdf_matrix(qs, t)) < 1e-9);
    }
  }
}

TEST_CASE("retrieval cdf monotonicity in t, s and N") {
  const ModelParams p = params(6, 2, 0.1);
  double prev = -1.0;
  for (int i = 0; i <= 30; ++i) {
    const double value = ewsn::retrieval_cdf({p, 3}, 2.0 * i);
    CHECK(value >= prev - 1e-13);
    prev = value;
  }
  for (double t : {1.0, 4.0, 10.0}) {
    for (int s = 1; s < 6; ++s) {
      CHECK(ewsn::retrieval_cdf({p, s}, t) >=
            ewsn::retrieval_cdf({p, s + 1}, t) - 1e-12);
    }
    for (int n : {6, 8, 12}) {
      CHECK(ewsn::retrieval_cdf({params(n, 2, 0.1), 3}, t) <=
            ewsn::retrieval_cdf({params(n + 2, 2, 0.1), 3}, t) + 1e-12);
    }
  }
}

TEST_CASE("expected time: single-sensor mean absorption") {
  CHECK(ewsn::expected_time_closed_form({params(1, 1, 0.2), 1}) ==
        doctest::Approx(35.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("expected time: saturated batteries give exponential spacings") {
  // Deep battery with surplus harvesting: the empty probability vanishes,
  // every wait is exponential at mu/N, and the first of N such waits has
  // mean 1/mu.
  const ModelParams p = params(5, 250, 0.3);
  CHECK(ewsn::expected_time_closed_form({p, 1}) ==
        doctest::Approx(1.0 / 0.4).epsilon(1e-9));
}

TEST_CASE("closed form matches quadrature across the sweep grid") {
  for (int n : {2, 5, 10, 20}) {
    for (int s : {1, 2, 5}) {
      if (s > n) continue;
      for (int b : {1, 4, 16}) {
        for (double lambda_e : {0.02, 0.03, 0.1, 0.2}) {
          const RetrievalQuery q{params(n, b, lambda_e), s};
          const double closed = ewsn::expected_time_closed_form(q);
          const double integral = ewsn::expected_time_quadrature(q);
          CHECK(closed == doctest::Approx(integral).epsilon(1e-7));
        }
      }
    }
  }
}

TEST_CASE("sign-flipped closed form fails the quadrature gate") {
  const RetrievalQuery q{params(5, 1, 0.2), 2};
  const double integral = ewsn::expected_time_quadrature(q);
  const double flipped = closed_form_sign_flipped(q);
  CHECK(std::abs(flipped - integral) / integral > 1e-3);
  CHECK(ewsn::expected_time_closed_form(q) ==
        doctest::Approx(integral).epsilon(1e-8));
}

TEST_CASE("matrix moment matches the closed form") {
  const RetrievalQuery q{params(6, 2, 0.2), 3};
  CHECK(ewsn::expected_time_matrix(q) ==
        doctest::Approx(ewsn::expected_time_closed_form(q)).epsilon(1e-8));
}

TEST_CASE("quadrature handles the equal-rate point and is continuous") {
  ModelParams p = params(10, 4, 0.04);  // harvest equals mu/N
  const double at = ewsn::expected_time_quadrature({p, 2});
  CHECK(std::isfinite(at));
  for (double shift : {1.0 - 1e-6, 1.0 + 1e-6}) {
    ModelParams near = p;
    near.harvest_rate = 0.04 * shift;
    const double off = ewsn::expected_time_quadrature({near, 2});
    CHECK(std::abs(off - at) / at < 1e-4);
  }
  // The closed form delegates at the flagged point.
  CHECK(ewsn::expected_time_closed_form({p, 2}) == doctest::Approx(at));
}

TEST_CASE("log-space closed form covers networks beyond 60 sensors") {
  for (int n : {70, 100}) {
    const RetrievalQuery q{params(n, 4, 0.2), 2};
    CHECK(ewsn::expected_time_closed_form(q) ==
          doctest::Approx(ewsn::expected_time_quadrature(q)).epsilon(1e-7));
  }
}

TEST_CASE("binomial identity: exact evaluations") {
  CHECK(ewsn::binomial_identity(7, 0) == 1.0);
  CHECK(ewsn::binomial_identity(5, 1) == 1.0);
  CHECK(ewsn::binomial_identity(20, 7) == 1.0);
  for (int n = 1; n <= 30; ++n) {
    for (int k = 0; k < n; ++k) {
      CHECK(ewsn::binomial_identity(n, k) == 1.0);
    }
  }
  CHECK_THROWS_AS(ewsn::binomial_identity(4, 4), ewsn::ValidationError);
  CHECK_THROWS_AS(ewsn::binomial_identity(4, -1), ewsn::ValidationError);
}

TEST_CASE("asymptotic limits: direct sums") {
  CHECK(ewsn::limit_infinite_harvest(10, 1, 0.4) == doctest::Approx(2.5));
  CHECK(ewsn::limit_infinite_harvest(10, 2, 0.4) ==
        doctest::Approx(2.5 + 1.0 / 0.36).epsilon(1e-12));
  CHECK(ewsn::limit_infinite_harvest(2, 2, 1.0) == doctest::Approx(3.0));

  CHECK(ewsn::limit_infinite_battery(10, 1, 0.2, 0.4) ==
        doctest::Approx(1.0 / 0.4).epsilon(1e-12));
  CHECK(ewsn::limit_infinite_battery(10, 2, 0.03, 0.4) ==
        doctest::Approx(1.0 / 0.3 + 1.0 / 0.27).epsilon(1e-12));
  // Both branches coincide at the boundary.
  CHECK(ewsn::limit_infinite_battery(10, 2, 0.04, 0.4) ==
        doctest::Approx(ewsn::limit_infinite_harvest(10, 2, 0.4)).epsilon(1e-12));

  CHECK(ewsn::limit_infinite_network(2, 0.4) == doctest::Approx(5.0));
  CHECK(ewsn::limit_infinite_network(1, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("growing harvest rate converges to its limit") {
  const double limit = ewsn::limit_infinite_harvest(10, 2, 0.4);
  double prev_err = 1e300;
  for (double lambda_e : {1.0, 10.0, 100.0}) {
    const double value =
        ewsn::expected_time_closed_form({params(10, 4, lambda_e), 2});
    const double err = std::abs(value - limit) / limit;
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 1e-6);
}

TEST_CASE("growing battery converges to its limit in both regimes") {
  for (double lambda_e : {0.03, 0.2}) {
    const double limit = ewsn::limit_infinite_battery(10, 2, lambda_e, 0.4);
    double prev_err = 1e300;
    for (int b = 1; b <= 64; b *= 2) {
      const double value =
          ewsn::expected_time_closed_form({params(10, b, lambda_e), 2});
      const double err = std::abs(value - limit) / limit;
      CHECK(err <= prev_err + 1e-12);
      prev_err = err;
    }
    CHECK(prev_err < 0.01);
  }
}

TEST_CASE("growing network approaches s/mu from above") {
  const double limit = ewsn::limit_infinite_network(2, 0.4);
  double prev = 1e300;
  for (int n : {20, 50, 100}) {
    const double value = ewsn::expected_time_closed_form({params(n, 4, 0.2), 2});
    CHECK(value > limit);
    CHECK(value < prev);
    prev = value;
  }
  CHECK((prev - limit) / limit < 0.02);
}

TEST_CASE("order-statistic increments telescope") {
  const ModelParams p = params(5, 2, 0.2);
  double total = 0.0;
  double prev = 0.0;
  for (int s = 1; s <= 5; ++s) {
    const double m_s = ewsn::expected_time_matrix({p, s});
    total += m_s - prev;
    prev = m_s;
    // Each rank also agrees with the scalar integral route.
    CHECK(m_s ==
          doctest::Approx(ewsn::expected_time_quadrature({p, s})).epsilon(1e-7));
  }
  CHECK(total == doctest::Approx(ewsn::expected_time_matrix({p, 5})).epsilon(1e-12));
}

TEST_CASE("expected time decreases in N, B, harvest and broadcast rates") {
  for (int n : {3, 5, 8, 12}) {
    CHECK(ewsn::expected_time_closed_form({params(n, 2, 0.2), 2}) >
          ewsn::expected_time_closed_form({params(n + 1, 2, 0.2), 2}));
  }
  for (int b : {1, 2, 4, 8}) {
    CHECK(ewsn::expected_time_closed_form({params(10, b, 0.03), 2}) >
          ewsn::expected_time_closed_form({params(10, b + 1, 0.03), 2}));
  }
  for (double lambda_e : {0.02, 0.03, 0.1}) {
    CHECK(ewsn::expected_time_closed_form({params(10, 4, lambda_e), 2}) >
          ewsn::expected_time_closed_form({params(10, 4, lambda_e + 0.01), 2}));
  }
  for (double mu : {0.3, 0.4, 0.5}) {
    CHECK(ewsn::expected_time_closed_form({params(10, 4, 0.2, mu), 2}) >
          ewsn::expected_time_closed_form({params(10, 4, 0.2, mu + 0.1), 2}));
  }
}
