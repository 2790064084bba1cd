#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "ewsn.h"

namespace {

struct ModelHandle {
  ewsn_model* ptr = nullptr;
  ModelHandle(int n, int b, double lambda_e, double mu) {
    REQUIRE(ewsn_model_create(n, b, lambda_e, mu, &ptr) == EWSN_OK);
  }
  ~ModelHandle() { ewsn_model_free(ptr); }
};

ewsn_sim_config sim_config(int s, int64_t reps, double warmup, uint64_t seed) {
  ewsn_sim_config c{};
  c.samples_needed = s;
  c.replications = reps;
  c.warmup_time = warmup;
  c.seed = seed;
  c.arrival_mode = EWSN_ARRIVAL_PASTA_INJECT;
  c.threads = 0;
  return c;
}

}  // namespace

TEST_CASE("model lifecycle and getters") {
  ModelHandle m(10, 4, 0.2, 0.4);
  CHECK(ewsn_model_n_sensors(m.ptr) == 10);
  CHECK(ewsn_model_battery_cap(m.ptr) == 4);
  CHECK(ewsn_model_harvest_rate(m.ptr) == doctest::Approx(0.2));
  CHECK(ewsn_model_broadcast_rate(m.ptr) == doctest::Approx(0.4));
}

TEST_CASE("invalid model parameters surface as status codes") {
  ewsn_model* m = nullptr;
  CHECK(ewsn_model_create(0, 4, 0.2, 0.4, &m) == EWSN_ERR_INVALID);
  CHECK(std::strlen(ewsn_last_error()) > 0);
  CHECK(ewsn_model_create(10, 4, -0.2, 0.4, &m) == EWSN_ERR_INVALID);
  CHECK(ewsn_model_create(10, 4, 0.2, 0.4, nullptr) == EWSN_ERR_INVALID);
  CHECK(std::string(ewsn_status_name(EWSN_ERR_CAPACITY)) == "capacity exceeded");
}

TEST_CASE("steady state through the C surface") {
  ModelHandle m(1, 1, 0.2, 0.4);
  double probs[2] = {0, 0};
  REQUIRE(ewsn_steady_state(m.ptr, probs, 2) == EWSN_OK);
  CHECK(probs[0] == doctest::Approx(2.0 / 3.0));
  CHECK(probs[1] == doctest::Approx(1.0 / 3.0));
  CHECK(ewsn_steady_state(m.ptr, probs, 1) == EWSN_ERR_INVALID);
}

TEST_CASE("survival form and scalar/matrix cdf agreement") {
  ModelHandle m(1, 1, 0.2, 0.4);
  double weight = 0, rb = 0, rh = 0, empty = 0;
  int32_t equal = -1;
  REQUIRE(ewsn_survival_form(m.ptr, &weight, &rb, &rh, &empty, &equal) == EWSN_OK);
  CHECK(weight == doctest::Approx(-1.0 / 3.0));
  CHECK(rb == doctest::Approx(0.4));
  CHECK(rh == doctest::Approx(0.2));
  CHECK(empty == doctest::Approx(2.0 / 3.0));
  CHECK(equal == 0);

  for (double t : {0.5, 2.0, 5.0}) {
    double survival = 0, cdf = 0;
    REQUIRE(ewsn_broadcast_wait_survival(m.ptr, t, &survival) == EWSN_OK);
    REQUIRE(ewsn_broadcast_wait_cdf_matrix(m.ptr, t, &cdf) == EWSN_OK);
    CHECK(1.0 - survival == doctest::Approx(cdf).epsilon(1e-10));
  }
}

TEST_CASE("expected time: all three methods agree") {
  ModelHandle m(6, 2, 0.2, 0.4);
  double closed = 0, quad = 0, matrix = 0;
  REQUIRE(ewsn_expected_time(m.ptr, 2, EWSN_METHOD_CLOSED_FORM, &closed) == EWSN_OK);
  REQUIRE(ewsn_expected_time(m.ptr, 2, EWSN_METHOD_QUADRATURE, &quad) == EWSN_OK);
  REQUIRE(ewsn_expected_time(m.ptr, 2, EWSN_METHOD_MATRIX, &matrix) == EWSN_OK);
  CHECK(closed == doctest::Approx(quad).epsilon(1e-8));
  CHECK(closed == doctest::Approx(matrix).epsilon(1e-8));

  double out = 0;
  CHECK(ewsn_expected_time(m.ptr, 7, EWSN_METHOD_CLOSED_FORM, &out) ==
        EWSN_ERR_INVALID);
}

TEST_CASE("matrix path reports capacity above the dimension cap") {
  ModelHandle m(13, 2, 0.2, 0.4);  // 2^13 states > 4096
  double out = 0;
  CHECK(ewsn_expected_time(m.ptr, 2, EWSN_METHOD_MATRIX, &out) ==
        EWSN_ERR_CAPACITY);
  CHECK(ewsn_retrieval_cdf_matrix(m.ptr, 2, 1.0, &out) == EWSN_ERR_CAPACITY);
}

TEST_CASE("retrieval cdf and moment helpers") {
  ModelHandle m(4, 1, 0.2, 0.4);
  double scalar = 0, matrix = 0, moment = 0, expected = 0;
  REQUIRE(ewsn_retrieval_cdf(m.ptr, 2, 2.0, &scalar) == EWSN_OK);
  REQUIRE(ewsn_retrieval_cdf_matrix(m.ptr, 2, 2.0, &matrix) == EWSN_OK);
  CHECK(scalar == doctest::Approx(matrix).epsilon(1e-9));

  REQUIRE(ewsn_retrieval_moment_matrix(m.ptr, 2, 1, &moment) == EWSN_OK);
  REQUIRE(ewsn_expected_time(m.ptr, 2, EWSN_METHOD_CLOSED_FORM, &expected) == EWSN_OK);
  CHECK(moment == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("required samples and identity") {
  int32_t s = 0;
  REQUIRE(ewsn_required_samples(4.5, 1.0, &s) == EWSN_OK);
  CHECK(s == 5);
  CHECK(ewsn_required_samples(-1.0, 1.0, &s) == EWSN_ERR_INVALID);

  double value = 0;
  REQUIRE(ewsn_binomial_identity(20, 7, &value) == EWSN_OK);
  CHECK(value == 1.0);
  CHECK(ewsn_binomial_identity(4, 4, &value) == EWSN_ERR_INVALID);
}

TEST_CASE("asymptotic limits through the C surface") {
  double value = 0;
  REQUIRE(ewsn_limit_infinite_harvest(10, 2, 0.4, &value) == EWSN_OK);
  CHECK(value == doctest::Approx(2.5 + 1.0 / 0.36));
  REQUIRE(ewsn_limit_infinite_battery(10, 2, 0.03, 0.4, &value) == EWSN_OK);
  CHECK(value == doctest::Approx(1.0 / 0.3 + 1.0 / 0.27));
  REQUIRE(ewsn_limit_infinite_network(2, 0.4, &value) == EWSN_OK);
  CHECK(value == doctest::Approx(5.0));
}

TEST_CASE("simulation round trip through the C surface") {
  ModelHandle m(4, 2, 0.2, 0.4);
  CHECK(ewsn_default_warmup(m.ptr) == doctest::Approx(1000.0));

  const ewsn_sim_config cfg = sim_config(2, 500, 50.0, 2024);
  ewsn_sim_result* a = nullptr;
  ewsn_sim_result* b = nullptr;
  REQUIRE(ewsn_simulate(m.ptr, &cfg, &a) == EWSN_OK);
  REQUIRE(ewsn_simulate(m.ptr, &cfg, &b) == EWSN_OK);

  CHECK(ewsn_sim_result_count(a) == 500);
  CHECK(ewsn_sim_result_seed(a) == 2024);
  CHECK(ewsn_sim_result_mean(a) == ewsn_sim_result_mean(b));
  CHECK(ewsn_sim_result_ci_halfwidth(a) > 0.0);

  std::vector<double> sa(500), sb(500);
  REQUIRE(ewsn_sim_result_samples(a, sa.data(), 500) == EWSN_OK);
  REQUIRE(ewsn_sim_result_samples(b, sb.data(), 500) == EWSN_OK);
  CHECK(sa == sb);
  CHECK(ewsn_sim_result_samples(a, sa.data(), 10) == EWSN_ERR_INVALID);

  double cdf_mid = 0;
  REQUIRE(ewsn_sim_result_empirical_cdf(a, ewsn_sim_result_mean(a), &cdf_mid) == EWSN_OK);
  CHECK(cdf_mid > 0.2);
  CHECK(cdf_mid < 0.9);

  double ks = 0;
  REQUIRE(ewsn_sim_ks_distance(a, m.ptr, 2, &ks) == EWSN_OK);
  CHECK(ks < 1.63 / std::sqrt(500.0));

  char* json = nullptr;
  REQUIRE(ewsn_sim_result_summary_json(a, &json) == EWSN_OK);
  CHECK(std::string(json).find("\"replications\": 500") != std::string::npos);
  ewsn_string_free(json);

  const char* path = "capi_replicates.csv";
  REQUIRE(ewsn_sim_result_write_csv(a, path) == EWSN_OK);
  std::remove(path);
  CHECK(ewsn_sim_result_write_csv(a, "/nonexistent-dir/x.csv") == EWSN_ERR_IO);

  ewsn_sim_result_free(a);
  ewsn_sim_result_free(b);
}

TEST_CASE("battery occupancy through the C surface") {
  ModelHandle m(1, 1, 0.2, 0.4);
  const ewsn_sim_config cfg = sim_config(1, 40, -1.0, 11);
  double probs[2] = {0, 0};
  double tv = 1.0;
  REQUIRE(ewsn_sim_battery_occupancy(m.ptr, &cfg, probs, 2, &tv) == EWSN_OK);
  CHECK(std::abs(probs[0] - 2.0 / 3.0) < 0.03);
  CHECK(tv < 0.03);
  CHECK(ewsn_sim_battery_occupancy(m.ptr, &cfg, probs, 3, &tv) == EWSN_ERR_INVALID);
}
