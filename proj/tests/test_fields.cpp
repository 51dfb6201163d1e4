#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "gb2d/orlicz.hpp"
#include "gb2d/serialize.hpp"
#include "gb2d/state.hpp"
#include "helpers.hpp"

using namespace gb2d;
using namespace gb2d::testing;

namespace {

// Scalar bisection oracle for the Luxemburg norm of the constant field 1 in
// L log L: the root of u ln(e+u) = 1, norm = 1/u*.
double constant_field_norm_oracle() {
  double lo = 0.1, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * std::log(M_E + mid) < 1.0 ? lo : hi) = mid;
  }
  return 1.0 / lo;
}

}  // namespace

TEST_CASE("young function validation") {
  CHECK_THROWS_AS(YoungFunction::l_log_beta(-0.5), InvalidInputError);
  CHECK_THROWS_AS(YoungFunction::exp_alpha(0.5), InvalidInputError);
  YoungFunction::l_log_beta(1.0).validate();
  YoungFunction::l_log_beta(0.0).validate();
  YoungFunction::exp_alpha(2.0).validate();
}

TEST_CASE("luxemburg norm: zero field and the constant-field root oracle") {
  const TorusGrid g(64, 64);
  RealField zero(g);
  CHECK(luxemburg_norm(zero, YoungFunction::l_log_beta(1.0)) == 0.0);

  RealField ones(g);
  for (double& v : ones.values()) v = 1.0;
  const double oracle = constant_field_norm_oracle();
  CHECK(std::abs(llogl_norm(ones) - oracle) < 1e-8);
  // the oracle value itself, frozen: 1/u* with u* = 0.795702811082363
  CHECK(oracle == doctest::Approx(1.2567506185377672).epsilon(1e-10));
}

TEST_CASE("luxemburg norm homogeneity and monotonicity") {
  const TorusGrid g(32, 32);
  std::mt19937_64 rng(10);
  const YoungFunction A = YoungFunction::l_log_beta(1.0);
  for (int trial = 0; trial < 20; ++trial) {
    RealField f = random_field(g, rng, 1.0);
    for (double& v : f.values()) v *= 4.0;
    const double c = 0.3 + 5.0 * (trial / 20.0);
    RealField cf = f;
    for (double& v : cf.values()) v *= c;
    const double nf = luxemburg_norm(f, A);
    CHECK(std::abs(luxemburg_norm(cf, A) - c * nf) < 1e-6 * std::max(1.0, c * nf));

    RealField dominating = f;
    for (double& v : dominating.values()) v = std::abs(v) + 0.25;
    CHECK(nf <= luxemburg_norm(dominating, A) + 1e-8);
  }
}

TEST_CASE("norm-integral bound (gauge norm <= 1 + integral of A(|f|))") {
  const TorusGrid g(32, 32);
  std::mt19937_64 rng(11);
  const YoungFunction A = YoungFunction::l_log_beta(1.0);
  for (int trial = 0; trial < 50; ++trial) {
    RealField f = random_field(g, rng, 1.0);
    for (double& v : f.values()) v *= 0.1 + 3.0 * (trial / 50.0);
    double integral = 0.0;
    for (double v : f.values()) integral += A(std::abs(v));
    integral /= static_cast<double>(g.size());
    CHECK(luxemburg_norm(f, A) <= 1.0 + integral + 1e-6);
  }
}

TEST_CASE("the beta = 0 gauge norm reduces to the L1 norm") {
  const TorusGrid g(32, 32);
  std::mt19937_64 rng(19);
  const RealField f = random_field(g, rng, 1.0);
  double l1 = 0.0;
  for (double v : f.values()) l1 += std::abs(v);
  l1 /= static_cast<double>(g.size());
  CHECK(luxemburg_norm(f, YoungFunction::l_log_beta(0.0)) ==
        doctest::Approx(l1).epsilon(1e-8));
}

TEST_CASE("exp-alpha norms are finite for bounded fields") {
  const TorusGrid g(32, 32);
  std::mt19937_64 rng(12);
  RealField f = random_field(g, rng, 1.0);
  for (double& v : f.values()) v *= 50.0;
  const double n2 = luxemburg_norm(f, YoungFunction::exp_alpha(2.0));
  CHECK(std::isfinite(n2));
  CHECK(n2 > 0.0);
}

TEST_CASE("entropy integral: constants and the dense-quadrature oracle") {
  const TorusGrid g(64, 64);
  RealField ones(g);
  for (double& v : ones.values()) v = 1.0;
  CHECK(std::abs(entropy_density_integral(ones, 1e-12)) < 1e-15);

  RealField es(g);
  for (double& v : es.values()) v = M_E;
  CHECK(entropy_density_integral(es, 1e-12) == doctest::Approx(M_E).epsilon(1e-14));

  // theta = 1 + 0.5 sin(2 pi x1): the integrand depends on x1 only, so a
  // dense 1D quadrature equals the dense 2D product-grid quadrature exactly
  const RealField theta = RealField::from_function(
      g, [](double x1, double) { return 1.0 + 0.5 * std::sin(2 * M_PI * x1); });
  double dense = 0.0;
  const int m = 4096;
  for (int j = 0; j < m; ++j) {
    const double t = 1.0 + 0.5 * std::sin(2 * M_PI * j / m);
    dense += t * std::log(t);
  }
  dense /= m;
  CHECK(std::abs(entropy_density_integral(theta, 1e-12) - dense) < 1e-10);
}

TEST_CASE("entropy integral: clamping and the negative-node hard error") {
  const TorusGrid g(16, 16);
  RealField theta(g);
  for (double& v : theta.values()) v = 1.0;
  theta(0, 0) = 0.0;  // clamped, not an error
  long clamps = 0;
  entropy_density_integral(theta, 1e-12, &clamps);
  CHECK(clamps == 1);
  theta(0, 0) = -1e-8;
  CHECK_THROWS_AS(entropy_density_integral(theta, 1e-12), MonotonicityLostError);
}

TEST_CASE("build_initial: unperturbed state has density exactly L") {
  const TorusGrid g(32, 32);
  const DensityState s = build_initial(g, 1.5, {}, 0);
  CHECK(s.rho_plus_per.max_abs() == 0.0);
  CHECK(s.rho_minus_per.max_abs() == 0.0);
  const HypothesisReport rep = check_hypotheses(s);
  CHECK(rep.h3_margin_plus == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(rep.h3_margin_minus == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(rep.h1_residual == 0.0);
  CHECK(rep.h2_residual == 0.0);
  // the density is the constant 1.5; its L log L norm is 1.5x the
  // constant-field value (homogeneity)
  CHECK(rep.h4_norm_plus ==
        doctest::Approx(1.5 * constant_field_norm_oracle()).epsilon(1e-7));
}

TEST_CASE("build_initial: single-mode margin is L/2 for the plus species") {
  const TorusGrid g(64, 64);
  const double L = 1.0;
  PerturbationSpec spec;
  spec.plus.push_back({1, 0, L / (4.0 * M_PI), 0.0});
  const DensityState s = build_initial(g, L, spec, 0);
  const HypothesisReport rep = check_hypotheses(s);
  CHECK(rep.h3_margin_plus == doctest::Approx(L / 2).epsilon(1e-10));
  CHECK(rep.h3_margin_minus == doctest::Approx(L).epsilon(1e-13));
}

TEST_CASE("build_initial: determinism and (H3) rejection") {
  const TorusGrid g(32, 32);
  PerturbationSpec spec;
  spec.random_modes = 4;
  spec.random_amplitude = 0.05;
  const DensityState a = build_initial(g, 1.0, spec, 42);
  const DensityState b = build_initial(g, 1.0, spec, 42);
  CHECK(max_abs_diff(a.rho_plus_per, b.rho_plus_per) == 0.0);
  CHECK(max_abs_diff(a.rho_minus_per, b.rho_minus_per) == 0.0);
  const DensityState c = build_initial(g, 1.0, spec, 43);
  CHECK(max_abs_diff(a.rho_plus_per, c.rho_plus_per) > 0.0);

  PerturbationSpec bad;
  bad.plus.push_back({1, 0, 1.0, 0.0});  // 2 pi |A| > L
  CHECK_THROWS_AS(build_initial(g, 1.0, bad, 0), InvalidInputError);
}

TEST_CASE("check_hypotheses reports a negative margin without throwing") {
  const TorusGrid g(32, 32);
  RealField plus = RealField::from_function(
      g, [](double x1, double) { return std::sin(2 * M_PI * x1); });
  DensityState s(std::move(plus), RealField(g), 0.5, 0.0, 0.0);
  const HypothesisReport rep = check_hypotheses(s);
  CHECK(rep.h3_margin() < 0.0);
}

TEST_CASE("mollify: constant part unchanged, slope raised to L + eps") {
  const TorusGrid g(32, 32);
  PerturbationSpec spec;  // constant periodic part: zero modes
  DensityState s = build_initial(g, 1.0, spec, 0);
  for (double& v : s.rho_plus_per.values()) v = 0.7;
  const DensityState m = mollify(s, 0.25);
  CHECK(max_abs_diff(m.rho_plus_per, s.rho_plus_per) < 1e-13);
  CHECK(m.slope_L == doctest::Approx(1.25));
  CHECK(m.epsilon == doctest::Approx(0.25));
  CHECK_THROWS_AS(mollify(s, 0.0), InvalidInputError);
  CHECK_THROWS_AS(mollify(s, 1.5), InvalidInputError);
}

TEST_CASE("mollify: single-mode error decreases monotonically as eps -> 0") {
  const TorusGrid g(64, 64);
  PerturbationSpec spec;
  spec.plus.push_back({1, 0, 0.05, 0.0});
  const DensityState s = build_initial(g, 1.0, spec, 0);
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {0.4, 0.2, 0.1, 0.05}) {
    const double err = max_abs_diff(mollify(s, eps).rho_plus_per, s.rho_plus_per);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("mollify: margin >= eps on admissible smooth data") {
  const TorusGrid g(64, 64);
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    PerturbationSpec spec;
    spec.random_modes = 3;
    spec.random_amplitude = 0.02;
    spec.margin_budget = 1.0;  // allow margins down to ~0
    const DensityState s = build_initial(g, 1.0, spec, 100 + trial);
    for (double eps : {0.2, 0.05}) {
      const DensityState m = mollify(s, eps);
      CHECK(check_hypotheses(m).h3_margin() >= eps * (1.0 - 1e-9) - 1e-12);
    }
  }
}

TEST_CASE("mollified entropy converges (L log L continuity of the smoothing)") {
  const TorusGrid g(128, 128);
  const RealField theta = RealField::from_function(g, [](double x1, double x2) {
    return 1.0 + 0.8 * std::sin(2 * M_PI * x1) * std::cos(2 * M_PI * x2) +
           0.15 * std::sin(6 * M_PI * x1);
  });
  const double exact = entropy_density_integral(theta, 1e-12);
  double prev_err = std::numeric_limits<double>::infinity();
  for (double eps : {0.2, 0.1, 0.05, 0.025}) {
    RealField smoothed = mollify_field(theta, eps);
    for (double& v : smoothed.values()) v = std::max(v, 0.0);
    const double err = std::abs(entropy_density_integral(smoothed, 1e-12) - exact);
    CHECK(err < prev_err);
    prev_err = err;
  }
}

TEST_CASE("generalized Hoelder probe: empirical ratio stable across runs and grids") {
  // ||fg||_L1 / (||f||_EXP2 ||g||_{L log^{1/2} L}) over a seeded ensemble.
  // The empirical maxima below were recorded from this exact ensemble and
  // must not be exceeded by more than 5% (fixture stability contract).
  const double fixture[2] = {0.52453296835271412, 0.51117126009430569};
  int gi = 0;
  for (int n : {64, 128}) {
    const TorusGrid g(n, n);
    std::mt19937_64 rng(14);
    double max_ratio = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      RealField f = random_field(g, rng, 1.5);
      RealField h = random_field(g, rng, 1.5);
      for (double& v : f.values()) v *= 2.0;
      for (double& v : h.values()) v *= 3.0;
      double l1 = 0.0;
      for (std::size_t i = 0; i < f.values().size(); ++i)
        l1 += std::abs(f.values()[i] * h.values()[i]);
      l1 /= static_cast<double>(g.size());
      const double nf = luxemburg_norm(f, YoungFunction::exp_alpha(2.0));
      const double nh = luxemburg_norm(h, YoungFunction::l_log_beta(0.5));
      max_ratio = std::max(max_ratio, l1 / (nf * nh));
    }
    CHECK(std::isfinite(max_ratio));
    CHECK(max_ratio <= fixture[gi] * 1.05);
    CHECK(max_ratio >= fixture[gi] * 0.5);  // and it should not collapse either
    ++gi;
  }
}

TEST_CASE("trudinger gamma probe reports a positive finite constant") {
  const TorusGrid g(64, 64);
  std::mt19937_64 rng(15);
  const RealField f = random_field(g, rng, 1.0);
  const double gamma = trudinger_gamma_probe(f);
  CHECK(gamma > 0.0);
  CHECK(std::isfinite(gamma));
}

TEST_CASE("state serialization round-trips bit-exactly with a JSON sidecar") {
  const TorusGrid g(32, 16);
  std::mt19937_64 rng(16);
  PerturbationSpec spec;
  spec.random_modes = 3;
  spec.random_amplitude = 0.03;
  DensityState s = build_initial(TorusGrid(32, 16), 1.0, spec, 77);
  s = mollify(s, 0.1);

  const std::string path = (std::filesystem::temp_directory_path() / "gb2d_test.state").string();
  save_state(s, path);
  const DensityState back = load_state(path);
  CHECK(back.grid().n1() == 32);
  CHECK(back.grid().n2() == 16);
  CHECK(back.slope_L == s.slope_L);
  CHECK(back.epsilon == s.epsilon);
  CHECK(back.time == s.time);
  CHECK(max_abs_diff(back.rho_plus_per, s.rho_plus_per) == 0.0);
  CHECK(max_abs_diff(back.rho_minus_per, s.rho_minus_per) == 0.0);
  CHECK(std::filesystem::exists(path + ".json"));

  // corrupt the magic
  {
    std::FILE* f = std::fopen(path.c_str(), "r+b");
    std::fputc('X', f);
    std::fclose(f);
  }
  CHECK_THROWS(load_state(path));
  std::filesystem::remove(path);
  std::filesystem::remove(path + ".json");
}
