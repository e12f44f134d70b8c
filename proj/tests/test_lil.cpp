#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "pssmp/bessel.hpp"
#include "pssmp/lil.hpp"

using namespace pssmp;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

std::vector<double> test_points() {
  // 500 points near each end, all with |log t| > e.
  std::vector<double> t;
  for (int i = 0; i < 500; ++i) t.push_back(std::exp(2.8 + 0.12 * i));
  for (int i = 0; i < 500; ++i) t.push_back(std::exp(-2.8 - 0.12 * i));
  return t;
}

PssmpPath path_from(const std::vector<double>& t, const std::vector<double>& v) {
  PssmpPath p;
  p.times = t;
  p.values = v;
  p.model = LevyModel::brownian_drift(0.5);
  return p;
}

double rel(double got, double want) { return std::fabs(got / want - 1.0); }

}  // namespace

TEST(Gauges, ProductIdentities) {
  const auto tail = [](double u) { return 2.0 * std::pow(u, -1.5); };
  const auto phi = GaugeSpec::logreg_phi(tail);
  const auto theta = GaugeSpec::logreg_theta(tail);
  const auto lphi = GaugeSpec::loglog_phi(0.7, 1.5);
  const auto lPhi = GaugeSpec::loglog_Phi(0.7, 1.5);
  const auto rho = GaugeSpec::sato_rho(KappaKind::Power, 0.4);
  const auto rho_dual = GaugeSpec::sato_rho(KappaKind::Power, 0.4, true);
  for (double t : test_points()) {
    EXPECT_LT(rel(gauge_eval(theta, t) * gauge_eval(phi, t), t * t), 1e-15) << t;
    EXPECT_LT(rel(gauge_eval(lPhi, t) * gauge_eval(lphi, t), t * t), 1e-15) << t;
    EXPECT_LT(rel(gauge_eval(rho_dual, t) * gauge_eval(rho, t), t * t), 1e-15) << t;
  }
}

TEST(Gauges, LogregMatchesClosedForm) {
  for (double lambda : {0.5, 1.0, 3.0}) {
    for (double delta : {0.5, 1.0, 2.0}) {
      const auto numeric = GaugeSpec::logreg_phi([=](double u) { return lambda * std::pow(u, -delta); });
      const auto closed = GaugeSpec::logreg_phi_inverse_exponential(lambda, delta);
      for (double t : test_points()) {
        const double L = std::log(std::fabs(std::log(t)));
        const double want = t * std::pow(lambda / L, 1.0 / delta);
        EXPECT_LT(rel(gauge_eval(closed, t), want), 1e-14);
        EXPECT_LT(rel(gauge_eval(numeric, t), want), 1e-8) << lambda << " " << delta << " " << t;
      }
    }
  }
}

TEST(Gauges, LogregExample) {
  // F(u) = e^{-1/u}: inf{s : e^s > |log t|} = log|log t| = 3 at t = e^{e^3}.
  const auto tail = [](double u) { return 1.0 / u; };
  const double t = std::exp(std::exp(3.0));
  EXPECT_LT(rel(gauge_eval(GaugeSpec::logreg_phi(tail), t), t / 3.0), 1e-8);
  EXPECT_LT(rel(gauge_eval(GaugeSpec::logreg_theta(tail), t), 3.0 * t), 1e-8);
}

TEST(Gauges, PoissonGaugeFromLoglog) {
  const auto phi = GaugeSpec::loglog_phi(0.5, 2.0);
  const auto m = GaugeSpec::poisson_m();
  for (double t : test_points()) {
    const double want = t * std::exp(-std::sqrt(2.0 * std::log(std::fabs(std::log(t)))));
    EXPECT_DOUBLE_EQ(gauge_eval(phi, t), gauge_eval(m, t));
    EXPECT_LT(rel(gauge_eval(phi, t), want), 1e-15);
  }
}

TEST(Gauges, RegvarAndBessel) {
  const auto psi = [](double u) { return std::pow(u, 1.5); };
  const double t = 1e12;
  const double L = std::log(std::log(t));
  EXPECT_LT(rel(gauge_eval(GaugeSpec::regvar_f(psi), t), L / psi(L)), 1e-15);
  EXPECT_LT(rel(gauge_eval(GaugeSpec::regvar_g(psi), t), psi(L) / L), 1e-15);
  EXPECT_LT(rel(gauge_eval(GaugeSpec::besq_loglog(), t), 2.0 * t * L), 1e-15);
  EXPECT_LT(rel(gauge_eval(GaugeSpec::bessel_sqrt(), t), std::sqrt(2.0 * t * L)), 1e-15);
  // The model form uses psi of the Levy process.
  const auto f = GaugeSpec::regvar_f(LevyModel::spectrally_negative_stable(1.5));
  EXPECT_LT(rel(gauge_eval(f, t), L / psi(L)), 1e-12);
}

TEST(Gauges, BesselKappaInverse) {
  for (auto kind : {KappaKind::BesselFirstPassage, KappaKind::BesselLastPassage}) {
    const auto g = GaugeSpec::sato_rho(kind, 0.5);
    for (double level : {0.1, 1.0, 3.0, 20.0}) EXPECT_LT(rel(kappa_eval(g, kappa_inverse(g, level)), level), 1e-10);
  }
  // kappa for U_1 at a = 1/2 is sqrt(2 lambda).
  const auto u = GaugeSpec::sato_rho(KappaKind::BesselLastPassage, 0.5);
  EXPECT_LT(rel(kappa_eval(u, 2.0), 2.0), 1e-12);
  EXPECT_LT(rel(kappa_inverse(u, 2.0), 2.0), 1e-10);
}

TEST(Gauges, PositiveAndGuarded) {
  const std::vector<GaugeSpec> all = {
      GaugeSpec::logreg_phi_inverse_exponential(1.0, 1.0), GaugeSpec::loglog_phi(0.5, 2.0),
      GaugeSpec::loglog_Phi(0.5, 2.0), GaugeSpec::sato_rho(KappaKind::Power, 0.5),
      GaugeSpec::sato_rho(KappaKind::BesselFirstPassage, 0.5), GaugeSpec::poisson_m(),
      GaugeSpec::bessel_sqrt(), GaugeSpec::besq_loglog()};
  for (const auto& g : all) {
    for (double t : test_points()) {
      const double v = gauge_eval(g, t);
      EXPECT_TRUE(std::isfinite(v) && v > 0.0) << g.name << " " << t;
    }
    EXPECT_THROW(gauge_eval(g, std::exp(1.0)), std::domain_error);
    EXPECT_THROW(gauge_eval(g, 2.0), std::domain_error);
    EXPECT_THROW(gauge_eval(g, -1.0), std::domain_error);
  }
}

TEST(Gauges, LoglogMonotoneNearTheEnds) {
  const auto g = GaugeSpec::loglog_phi(0.5, 2.0);
  double prev = 0.0;
  for (double lt = 10.0; lt < 600.0; lt += 1.0) {
    const double v = gauge_eval(g, std::exp(lt));
    EXPECT_GT(v, prev);
    prev = v;
  }
  prev = 0.0;
  for (double lt = -600.0; lt < -10.0; lt += 1.0) {
    const double v = gauge_eval(g, std::exp(lt));
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(Constants, AgainstHighPrecision) {
  using boost::multiprecision::pow;
  auto csp_process = [](Big a) { return a * pow(a - 1, -(a - 1) / a); };
  auto csp_passage = [](Big a) { return (1 / a) * pow(1 - 1 / a, a - 1); };
  for (double a : {1.2, 1.5, 2.0}) {
    EXPECT_LT(rel(lil_constant(LilCase::StableCspProcess, a), static_cast<double>(csp_process(Big(a)))), 1e-12) << a;
    EXPECT_LT(rel(lil_constant(LilCase::StableCspPassage, a), static_cast<double>(csp_passage(Big(a)))), 1e-12) << a;
  }
  EXPECT_LT(rel(lil_constant(LilCase::StableCspProcess, 1.2), 1.56919258321419670948), 1e-14);
  EXPECT_LT(rel(lil_constant(LilCase::StableCspPassage, 1.5), 0.384900179459750509673), 1e-14);
  EXPECT_EQ(lil_constant(LilCase::StableCspProcess, 2.0), 2.0);
  EXPECT_LT(rel(lil_constant(LilCase::RegvarPassage, 1.5), 0.707106781186547524401), 1e-15);
  EXPECT_LT(rel(lil_constant(LilCase::RegvarProcess, 1.5), std::sqrt(2.0)), 1e-15);
  EXPECT_LT(rel(lil_constant(LilCase::SatoPassage, 0.5), 0.25), 1e-15);
  EXPECT_LT(rel(lil_constant(LilCase::BesselPassage), 0.25), 1e-15);
  EXPECT_LT(rel(lil_constant(LilCase::BesselProcess), 4.0), 1e-15);
  EXPECT_EQ(lil_constant(LilCase::Poisson), 1.0);
}

TEST(Constants, BoundaryParametersRejected) {
  EXPECT_THROW(lil_constant(LilCase::StableCspProcess, 1.0), std::domain_error);
  EXPECT_THROW(lil_constant(LilCase::RegvarPassage, 1.0), std::domain_error);
  EXPECT_THROW(lil_constant(LilCase::RegvarProcess, 2.0), std::domain_error);
  EXPECT_THROW(lil_constant(LilCase::SatoPassage, 0.0), std::domain_error);
  EXPECT_THROW(lil_constant(LilCase::SatoProcess, 1.0), std::domain_error);
}

TEST(Empirical, DeterministicPaths) {
  const auto g = GaugeSpec::besq_loglog();
  const WindowGeometry geom{16.0, 2.0, 10};
  std::vector<double> t, v, two, zero;
  for (double x = 15.2; x < 16.0 * 4096.0; x *= 1.01) {
    t.push_back(x);
    v.push_back(gauge_eval(g, x));
    two.push_back(2.0 * gauge_eval(g, x));
    zero.push_back(0.0);
  }
  EXPECT_NEAR(empirical_limsup({path_from(t, v)}, g, End::Infinity, geom).terminal[0], 1.0, 1e-15);
  EXPECT_EQ(empirical_limsup({path_from(t, zero)}, g, End::Infinity, geom).terminal[0], 0.0);
  EXPECT_NEAR(empirical_liminf({path_from(t, v)}, g, End::Infinity, geom).terminal[0], 1.0, 1e-15);
  EXPECT_NEAR(empirical_liminf({path_from(t, two)}, g, End::Infinity, geom).terminal[0], 2.0, 1e-15);
}

TEST(Empirical, RunningMaxAndRelabeling) {
  const BesqParams p{3.0};
  const WindowGeometry geom{16.0, 2.0, 12};
  const auto grid = geometric_grid(8.0, 16.0 * 8192.0, 800);
  std::vector<PssmpPath> paths;
  for (int i = 0; i < 9; ++i) paths.push_back(besq_path_on_grid(p, 0.0, grid, 40 + i));
  const auto rec = empirical_limsup(paths, GaugeSpec::besq_loglog(), End::Infinity, geom);
  for (const auto& run : rec.running)
    for (std::size_t k = 1; k < run.size(); ++k) EXPECT_GE(run[k], run[k - 1]);
  std::vector<PssmpPath> reversed(paths.rbegin(), paths.rend());
  const auto rec2 = empirical_limsup(reversed, GaugeSpec::besq_loglog(), End::Infinity, geom);
  EXPECT_EQ(rec.median, rec2.median);
  EXPECT_EQ(rec.iqr, rec2.iqr);
}

TEST(Empirical, EmptyWindowThrows) {
  const std::vector<double> t = {20.0, 30.0};
  const std::vector<double> v = {1.0, 2.0};
  EXPECT_THROW(empirical_limsup({path_from(t, v)}, GaugeSpec::besq_loglog(), End::Infinity, {16.0, 2.0, 5}),
               std::invalid_argument);
}

TEST(Transfer, IncreasingPath) {
  const auto g = GaugeSpec::besq_loglog();
  std::vector<double> t, v;
  for (double x = 15.2; x < 16.0 * 1024.0; x *= 1.05) {
    t.push_back(x);
    v.push_back(x * x);
  }
  const auto rep = transfer_check({path_from(t, v)}, g, End::Infinity, {16.0, 2.0, 6});
  EXPECT_EQ(rep.x.terminal, rep.j.terminal);
  EXPECT_EQ(rep.x_minus_j.terminal[0], 0.0);
  EXPECT_FALSE(rep.positive_jumps);
}

TEST(Transfer, JBelowXPathByPath) {
  const BesqParams p{3.0};
  const auto grid = geometric_grid(8.0, 16.0 * 8192.0, 800);
  std::vector<PssmpPath> paths;
  for (int i = 0; i < 20; ++i) paths.push_back(besq_path_on_grid(p, 0.0, grid, 70 + i));
  const auto rep = transfer_check(paths, GaugeSpec::besq_loglog(), End::Infinity, {16.0, 2.0, 12});
  for (std::size_t i = 0; i < paths.size(); ++i) {
    EXPECT_LE(rep.j.terminal[i], rep.x.terminal[i]);
    EXPECT_GE(rep.x_minus_j.terminal[i], 0.0);
  }
}

TEST(FirstPassageProcess, ReadsTheRunningMax) {
  const auto p = path_from({0, 1, 2, 3, 4}, {0, 2, 1, 3, 5});
  const auto s = first_passage_process(p, {0.5, 1.5, 2.5, 4.0, 9.0});
  EXPECT_EQ(s.values[0], 1.0);
  EXPECT_EQ(s.values[1], 1.0);
  EXPECT_EQ(s.values[2], 3.0);
  EXPECT_EQ(s.values[3], 4.0);
  EXPECT_TRUE(std::isnan(s.values[4]));
}
