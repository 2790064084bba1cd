#include <cmath>

#include "doctest.h"
#include "ewsn/errors.hpp"
#include "ewsn/model.hpp"
#include "testutil.hpp"

using ewsn::ModelParams;

namespace {

ModelParams base_params() {
  ModelParams p;
  p.n_sensors = 1;
  p.battery_cap = 1;
  p.harvest_rate = 0.2;
  p.broadcast_rate = 0.4;
  return p;
}

}  // namespace

TEST_CASE("model params validation") {
  ModelParams p = base_params();
  CHECK_NOTHROW(p.validate());
  p.n_sensors = 0;
  CHECK_THROWS_AS(p.validate(), ewsn::ValidationError);
  p = base_params();
  p.battery_cap = 0;
  CHECK_THROWS_AS(p.validate(), ewsn::ValidationError);
  p = base_params();
  p.harvest_rate = 0.0;
  CHECK_THROWS_AS(p.validate(), ewsn::ValidationError);
  p = base_params();
  p.arrival_rate = -1.0;
  CHECK_THROWS_AS(p.validate(), ewsn::ValidationError);
}

TEST_CASE("steady state: uniform at matched rates") {
  ModelParams p;
  p.n_sensors = 4;
  p.battery_cap = 3;
  p.broadcast_rate = 0.4;
  p.harvest_rate = 0.1;  // equals broadcast_rate / n_sensors
  const auto ss = ewsn::steady_state(p);
  REQUIRE(ss.probs.size() == 4);
  for (double x : ss.probs) CHECK(x == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("steady state: geometric two-level case") {
  const auto ss = ewsn::steady_state(base_params());
  REQUIRE(ss.probs.size() == 2);
  CHECK(ss.probs[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(ss.probs[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(ss.empty_prob() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("steady state: deep battery limit of the empty probability") {
  ModelParams p;
  p.n_sensors = 10;
  p.battery_cap = 1000;
  p.harvest_rate = 0.03;
  p.broadcast_rate = 0.4;  // ratio 0.75 -> empty prob tends to 0.25
  CHECK(ewsn::steady_state(p).empty_prob() ==
        doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("steady state: deep battery with surplus harvesting") {
  ModelParams p;
  p.n_sensors = 10;
  p.battery_cap = 500;
  p.harvest_rate = 0.2;
  p.broadcast_rate = 0.4;  // ratio 5: mass piles up at the top level
  const auto ss = ewsn::steady_state(p);
  CHECK(ss.probs[500] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(ss.empty_prob() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("steady state: normalization and detailed balance") {
  for (int b : {1, 3, 8}) {
    for (double lambda_e : {0.03, 0.1, 0.2, 0.9}) {
      ModelParams p;
      p.n_sensors = 5;
      p.battery_cap = b;
      p.harvest_rate = lambda_e;
      p.broadcast_rate = 0.4;
      const auto ss = ewsn::steady_state(p);
      double total = 0.0;
      for (double x : ss.probs) total += x;
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
      for (int i = 0; i < b; ++i) {
        CHECK(ss.probs[i] * p.harvest_rate ==
              doctest::Approx(ss.probs[i + 1] * p.per_sensor_rate())
                  .epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("required samples") {
  CHECK(ewsn::required_samples({4.0, 1.0}) == 4);
  CHECK(ewsn::required_samples({4.5, 1.0}) == 5);
  CHECK(ewsn::required_samples({1.0, 2.0}) == 1);
  CHECK_THROWS_AS(ewsn::required_samples({0.0, 1.0}), ewsn::ValidationError);
}

TEST_CASE("broadcast wait phase type: two-level network") {
  const auto d = ewsn::broadcast_wait_phase_type(base_params());
  REQUIRE(d.phases() == 2);
  CHECK(d.initial()(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(d.initial()(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(d.sub_generator()(0, 0) == doctest::Approx(-0.2));
  CHECK(d.sub_generator()(0, 1) == doctest::Approx(0.2));
  CHECK(d.sub_generator()(1, 0) == doctest::Approx(0.0));
  CHECK(d.sub_generator()(1, 1) == doctest::Approx(-0.4));
}

TEST_CASE("broadcast wait: saturated battery degenerates to one phase") {
  ModelParams p;
  p.n_sensors = 2;
  p.battery_cap = 300;
  p.harvest_rate = 0.5;
  p.broadcast_rate = 0.4;  // harvest far above mu/N: battery never empty
  const auto d = ewsn::broadcast_wait_phase_type(p);
  CHECK(d.initial()(0) == doctest::Approx(0.0).epsilon(1e-12));
  const double half_life = p.n_sensors * std::log(2.0) / p.broadcast_rate;
  CHECK(ewsn::broadcast_wait_survival(p, half_life) ==
        doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("broadcast wait survival: known values") {
  const ModelParams p = base_params();
  CHECK(ewsn::broadcast_wait_survival(p, 0.0) == 1.0);
  const double expected =
      -(1.0 / 3.0) * std::exp(-2.0) + (4.0 / 3.0) * std::exp(-1.0);
  CHECK(ewsn::broadcast_wait_survival(p, 5.0) ==
        doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("survival form: mixture weight and flags") {
  const auto form = ewsn::survival_form(base_params());
  CHECK(form.weight_fast == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
  CHECK(form.rate_broadcast == doctest::Approx(0.4));
  CHECK(form.rate_harvest == doctest::Approx(0.2));
  CHECK_FALSE(form.equal_rate);

  ModelParams deep;
  deep.n_sensors = 2;
  deep.battery_cap = 300;
  deep.harvest_rate = 0.5;
  deep.broadcast_rate = 0.4;
  CHECK(ewsn::survival_form(deep).weight_fast ==
        doctest::Approx(1.0).epsilon(1e-10));

  ModelParams equal;
  equal.n_sensors = 10;
  equal.battery_cap = 4;
  equal.harvest_rate = 0.04;
  equal.broadcast_rate = 0.4;
  CHECK(ewsn::survival_form(equal).equal_rate);
}

TEST_CASE("survival matches the phase-type path on a grid") {
  for (double lambda_e : {0.03, 0.2, 0.4, 0.1}) {
    ModelParams p;
    p.n_sensors = 4;
    p.battery_cap = 3;
    p.harvest_rate = lambda_e;
    p.broadcast_rate = 0.4;  // includes the equal-rate point lambda_e = 0.1
    const auto d = ewsn::broadcast_wait_phase_type(p);
    for (int i = 0; i <= 100; ++i) {
      const double t = 60.0 * i / 100.0;
      const double scalar = ewsn::broadcast_wait_survival(p, t);
      const double matrix = 1.0 - ewsn::phase_type_cdf(d, t);
      CHECK(scalar == doctest::Approx(matrix).epsilon(1e-10));
    }
  }
}

TEST_CASE("survival is continuous across the equal-rate boundary") {
  ModelParams p;
  p.n_sensors = 10;
  p.battery_cap = 4;
  p.broadcast_rate = 0.4;
  const double matched = p.broadcast_rate / p.n_sensors;

  ModelParams at = p;
  at.harvest_rate = matched;
  for (double shift : {1.0 - 1e-6, 1.0 + 1e-6}) {
    ModelParams near = p;
    near.harvest_rate = matched * shift;
    for (int i = 1; i <= 50; ++i) {
      const double t = 120.0 * i / 50.0;
      CHECK(std::abs(ewsn::broadcast_wait_survival(near, t) -
                     ewsn::broadcast_wait_survival(at, t)) < 1e-5);
    }
  }
}

TEST_CASE("mean broadcast wait equals the absorption-time expression") {
  for (double lambda_e : {0.05, 0.2, 0.5}) {
    ModelParams p;
    p.n_sensors = 3;
    p.battery_cap = 2;
    p.harvest_rate = lambda_e;
    p.broadcast_rate = 0.4;
    const double horizon =
        50.0 * std::max(p.n_sensors / p.broadcast_rate, 1.0 / lambda_e);
    const double mean = testutil::simpson(
        [&](double t) { return ewsn::broadcast_wait_survival(p, t); }, 0.0,
        horizon, 4000);
    const double expected = p.n_sensors / p.broadcast_rate +
                            ewsn::steady_state(p).empty_prob() / lambda_e;
    CHECK(mean == doctest::Approx(expected).epsilon(1e-7));
  }
}

TEST_CASE("survival decreases pointwise in the harvest rate") {
  ModelParams lo;
  lo.n_sensors = 6;
  lo.battery_cap = 3;
  lo.broadcast_rate = 0.4;
  for (int step = 0; step < 4; ++step) {
    ModelParams a = lo, b = lo;
    a.harvest_rate = 0.05 + 0.05 * step;
    b.harvest_rate = a.harvest_rate + 0.05;
    for (int i = 1; i <= 30; ++i) {
      const double t = 80.0 * i / 30.0;
      CHECK(ewsn::broadcast_wait_survival(b, t) <=
            ewsn::broadcast_wait_survival(a, t) + 1e-12);
    }
  }
}
