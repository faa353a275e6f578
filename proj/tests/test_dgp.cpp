#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "costrule/dgp.hpp"
#include "costrule/rng.hpp"

#include <cmath>
#include <string>
#include <vector>

using namespace costrule;

TEST_CASE("expit and logit are exact inverses at reference points") {
  CHECK(expit(0.0) == 0.5);
  CHECK(expit(2.0) == doctest::Approx(0.8807970779778823).epsilon(1e-15));
  CHECK(expit(-2.0) + expit(2.0) == doctest::Approx(1.0).epsilon(1e-15));
  for (double x : {-3.0, -0.7, 0.0, 0.4, 2.5})
    CHECK(logit(expit(x)) == doctest::Approx(x).epsilon(1e-12));
}

TEST_CASE("dgp names round-trip") {
  CHECK(dgp_from_string("parametric") == DgpId::parametric);
  CHECK(dgp_from_string("main_study") == DgpId::main_study);
  CHECK(to_string(DgpId::parametric) == "parametric");
  CHECK(to_string(DgpId::main_study) == "main_study");
  CHECK_THROWS(dgp_from_string("nope"));
}

TEST_CASE("parametric conditional means match their closed forms") {
  const double w0 = 0.0;
  CHECK(dgp_truth(DgpId::parametric, NuisanceTarget::muY, 1, {&w0, 1}) ==
        doctest::Approx(0.6681877721681662).epsilon(1e-15));
  CHECK(dgp_truth(DgpId::parametric, NuisanceTarget::muY, 0, {&w0, 1}) ==
        doctest::Approx(0.3318122278318339).epsilon(1e-15));
  CHECK(dgp_truth(DgpId::parametric, NuisanceTarget::muC, 1, {&w0, 1}) ==
        doctest::Approx(0.7310585786300049).epsilon(1e-15));
  const double wm = -0.5;
  CHECK(dgp_truth(DgpId::parametric, NuisanceTarget::muC, 0, {&wm, 1}) ==
        doctest::Approx(0.18242552380635635).epsilon(1e-15));
  const double wp = 0.3;
  CHECK(dgp_truth(DgpId::parametric, NuisanceTarget::muT, 0, {&wp, 1}) ==
        doctest::Approx(0.574442516811659).epsilon(1e-15));
  CHECK(dgp_truth(DgpId::parametric, NuisanceTarget::muT, 1, {&wp, 1}) ==
        dgp_truth(DgpId::parametric, NuisanceTarget::muT, 0, {&wp, 1}));
}

TEST_CASE("three-covariate conditional means match hand-marginalized values") {
  const std::vector<double> wa{0.3, 1.0, -0.5};
  CHECK(dgp_truth(DgpId::main_study, NuisanceTarget::muT, 0, wa) ==
        doctest::Approx(0.6224593312018546).epsilon(1e-15));
  CHECK(dgp_truth(DgpId::main_study, NuisanceTarget::muC, 0, wa) ==
        doctest::Approx(0.3564076393043485).epsilon(1e-15));
  CHECK(dgp_truth(DgpId::main_study, NuisanceTarget::muC, 1, wa) ==
        doctest::Approx(0.7992009836862628).epsilon(1e-15));
  CHECK(dgp_truth(DgpId::main_study, NuisanceTarget::muY, 0, wa) ==
        doctest::Approx(0.652588379043008).epsilon(1e-15));
  CHECK(dgp_truth(DgpId::main_study, NuisanceTarget::muY, 1, wa) ==
        doctest::Approx(0.7321996632504371).epsilon(1e-15));

  const std::vector<double> wb{-0.8, 0.0, 1.2};
  CHECK(dgp_truth(DgpId::main_study, NuisanceTarget::muT, 0, wb) ==
        doctest::Approx(0.11920292202211755).epsilon(1e-15));
  CHECK(dgp_truth(DgpId::main_study, NuisanceTarget::muC, 0, wb) ==
        doctest::Approx(0.7062165498050121).epsilon(1e-15));
  CHECK(dgp_truth(DgpId::main_study, NuisanceTarget::muC, 1, wb) ==
        doctest::Approx(0.9459524225616067).epsilon(1e-15));
  CHECK(dgp_truth(DgpId::main_study, NuisanceTarget::muY, 0, wb) ==
        doctest::Approx(0.40703940522068743).epsilon(1e-15));
  CHECK(dgp_truth(DgpId::main_study, NuisanceTarget::muY, 1, wb) ==
        doctest::Approx(0.39707512759366587).epsilon(1e-15));
}

TEST_CASE("generation is reproducible and exposes the expected covariates") {
  Rng r1(777), r2(777), r3(778);
  const Dataset a = dgp_generate(DgpId::main_study, 50, r1);
  const Dataset b = dgp_generate(DgpId::main_study, 50, r2);
  const Dataset c = dgp_generate(DgpId::main_study, 50, r3);

  CHECK(a.dim_w() == 3);
  CHECK(a.v_index() == std::vector<std::size_t>{0, 1, 2});
  CHECK(a.v_is_full_w());
  bool all_equal = true, any_diff = false;
  for (std::size_t i = 0; i < a.n(); ++i) {
    all_equal = all_equal && a[i].w == b[i].w && a[i].t == b[i].t &&
                a[i].c == b[i].c && a[i].y == b[i].y;
    any_diff = any_diff || a[i].w != c[i].w;
  }
  CHECK(all_equal);
  CHECK(any_diff);

  Rng rp(1);
  const Dataset p = dgp_generate(DgpId::parametric, 10, rp);
  CHECK(p.dim_w() == 1);
  CHECK(p.v_index() == std::vector<std::size_t>{0});
  for (std::size_t i = 0; i < p.n(); ++i) {
    CHECK((p[i].t == 0 || p[i].t == 1));
    CHECK((p[i].c == 0.0 || p[i].c == 1.0));
    CHECK((p[i].y == 0.0 || p[i].y == 1.0));
  }
}

TEST_CASE("generated moments agree with the conditional-mean closures") {
  for (DgpId id : {DgpId::parametric, DgpId::main_study}) {
    Rng rng(2024);
    const std::size_t n = 1000000;
    const Dataset ds = dgp_generate(id, n, rng);
    double rt = 0.0, rc = 0.0, ry = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& o = ds[i];
      rt += o.t - dgp_truth(id, NuisanceTarget::muT, 0, o.w);
      rc += o.c - dgp_truth(id, NuisanceTarget::muC, o.t, o.w);
      ry += o.y - dgp_truth(id, NuisanceTarget::muY, o.t, o.w);
    }
    CHECK(std::abs(rt / n) < 0.004);
    CHECK(std::abs(rc / n) < 0.004);
    CHECK(std::abs(ry / n) < 0.004);
  }
}

TEST_CASE("covariate marginals match their specification") {
  Rng rng(31);
  const std::size_t n = 1000000;
  const Dataset ds = dgp_generate(DgpId::main_study, n, rng);
  double w1 = 0.0, w2 = 0.0, w3 = 0.0, w3sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w1 += ds[i].w[0];
    w2 += ds[i].w[1];
    w3 += ds[i].w[2];
    w3sq += ds[i].w[2] * ds[i].w[2];
  }
  CHECK(std::abs(w1 / n) < 0.003);
  CHECK(w2 / n == doctest::Approx(0.8).epsilon(0.003));
  CHECK(std::abs(w3 / n) < 0.005);
  CHECK(w3sq / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("study defaults carry the published budget settings") {
  const ProblemConfig main_cfg = dgp_default_config(DgpId::main_study);
  CHECK(main_cfg.kappa == 0.68);
  CHECK(main_cfg.alpha == 1.0);
  REQUIRE(main_cfg.y_bounds.has_value());
  CHECK(main_cfg.y_bounds->first == 0.0);
  CHECK(main_cfg.y_bounds->second == 1.0);
  REQUIRE(main_cfg.c_bounds.has_value());

  const ProblemConfig par_cfg = dgp_default_config(DgpId::parametric);
  CHECK(par_cfg.kappa == 0.35);
  CHECK(par_cfg.alpha == 1.0);
}
