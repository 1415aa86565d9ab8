#include <doctest.h>

#include <cmath>
#include <future>
#include <random>
#include <vector>

#include "richards4/constitutive.hpp"

using namespace richards4;

namespace {

// Reference values from tests/oracles/constitutive_golden.py (mpmath, 40 digits).
constexpr double kExampleS = 0.47475291572496004232;        // S(-1), p_reg = -10
constexpr double kExampleDS = 0.33998233257996803385;       // S'(-1), p_reg = -10
constexpr double kExampleK = 0.0098953515071602630545;      // K_f(0.5)
constexpr double kExamplePmin = -19.610596171570203625;
constexpr double kBenchPmin = -59.843660669394595456;
constexpr double kBenchPsiM2 = -0.20266614236496800112;     // psi(-2)
constexpr double kBenchPsiM1 = -0.20037898575147988045;     // psi(-1)
constexpr double kBenchPsiM03 = -0.16064992152444729424;    // psi(-0.3)
constexpr double kBenchPsiSmall = -0.000099999845029961540207;  // psi(-1e-4)
constexpr double kBenchUlower = -0.2087088588167069504;
constexpr double kBenchKm1 = 0.0075444743753983879289;      // K_f(S(-1))
constexpr double kBenchBprimeM1 = 45.063753372747744071;    // b'(psi(-1))

VanGenuchtenParams example_params() {
  VanGenuchtenParams p;
  p.p_reg = -10.0;
  return p;
}

const SoilModel& bench() {
  static const SoilModel soil;
  return soil;
}

}  // namespace

TEST_CASE("saturation: saturated branch and reference values") {
  const ConstitutiveModel m(example_params());
  CHECK(m.saturation(0.0) == 1.0);
  CHECK(m.saturation(5.0) == doctest::Approx(1.0 + 5.0 * m.params().a_min).epsilon(1e-15));
  CHECK(m.conductivity_saturated(m.saturation(5.0)) == 1.0);
  CHECK(m.saturation(-1.0) == doctest::Approx(kExampleS).epsilon(1e-14));
  CHECK(m.saturation_derivative(-1.0) == doctest::Approx(kExampleDS).epsilon(1e-13));
  CHECK(m.p_min() == doctest::Approx(kExamplePmin).epsilon(1e-13));
  CHECK(ConstitutiveModel().p_min() == doctest::Approx(kBenchPmin).epsilon(1e-13));
  CHECK(m.saturation(m.p_min()) == doctest::Approx(m.params().s_res).epsilon(1e-14));
  CHECK(m.saturation(m.p_min() - 10.0) == doctest::Approx(m.params().s_res).epsilon(1e-14));
}

TEST_CASE("saturation: C1 joint at p_reg and slope floor") {
  const ConstitutiveModel m;
  const double pr = m.params().p_reg;
  const double d = 1e-7;
  CHECK(std::abs(m.saturation(pr + d) - m.saturation(pr - d)) < 1e-8);
  CHECK(std::abs(m.saturation_derivative(pr + d) - m.saturation_derivative(pr - d)) < 1e-9);
  for (double p = m.p_min() + 1e-6; p < 10.0; p += 0.01)
    REQUIRE(m.saturation_derivative(p) >= m.params().a_min);
}

TEST_CASE("saturation and conductivity are monotone") {
  const ConstitutiveModel m;
  double s_prev = m.saturation(m.p_min());
  double k_prev = m.conductivity(m.params().s_res);
  for (int i = 1; i <= 20000; ++i) {
    const double p = m.p_min() + (0.5 - m.p_min()) * i / 20000.0;
    const double s = m.saturation(p);
    REQUIRE(s > s_prev);
    s_prev = s;
  }
  for (int i = 1; i <= 20000; ++i) {
    const double s = m.params().s_res + (1.0 - m.params().s_res) * i / 20000.0;
    const double k = m.conductivity(s);
    REQUIRE(k >= k_prev);
    k_prev = k;
  }
  // Saturated end, where the Mualem slope is replaced by a smooth cap.
  k_prev = m.conductivity(1.0 - 1e-5);
  for (int i = 1; i <= 2000; ++i) {
    const double s = 1.0 - 1e-5 + 1e-5 * i / 2000.0;
    const double k = m.conductivity(s);
    REQUIRE(k >= k_prev);
    REQUIRE(k <= 1.0);
    k_prev = k;
  }
}

TEST_CASE("conductivity: end values, reference value, domain") {
  const ConstitutiveModel m(example_params());
  CHECK(m.conductivity(1.0) == 1.0);
  CHECK(m.conductivity(m.params().s_res) == doctest::Approx(m.k_floor()).epsilon(1e-15));
  CHECK(m.conductivity(0.5) == doctest::Approx(kExampleK).epsilon(1e-13));
  CHECK_NOTHROW(m.conductivity(1.0 + 5e-13));
  CHECK_THROWS_AS(m.conductivity(1.1), DomainError);
  CHECK_THROWS_AS(m.conductivity(0.01), DomainError);
}

TEST_CASE("conductivity derivative matches central differences") {
  const ConstitutiveModel m;
  for (double s : {0.1, 0.3, 0.5, 0.8, 0.95}) {
    const double d = 1e-6;
    const double fd = (m.conductivity(s + d) - m.conductivity(s - d)) / (2 * d);
    CHECK(m.conductivity_derivative(s) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("invalid parameters are rejected at construction") {
  auto with = [](auto edit) {
    VanGenuchtenParams p;
    edit(p);
    return p;
  };
  CHECK_THROWS_AS(ConstitutiveModel(with([](auto& p) { p.n_vg = 0.9; })), InvalidParameter);
  CHECK_THROWS_AS(ConstitutiveModel(with([](auto& p) { p.n_vg = 1.0; })), InvalidParameter);
  CHECK_THROWS_AS(ConstitutiveModel(with([](auto& p) { p.alpha_vg = 0.0; })), InvalidParameter);
  CHECK_THROWS_AS(ConstitutiveModel(with([](auto& p) { p.s_res = 1.0; })), InvalidParameter);
  CHECK_THROWS_AS(ConstitutiveModel(with([](auto& p) { p.s_res = 0.0; })), InvalidParameter);
  CHECK_THROWS_AS(ConstitutiveModel(with([](auto& p) { p.p_reg = 1.0; })), InvalidParameter);
  CHECK_THROWS_AS(ConstitutiveModel(with([](auto& p) { p.a_min = 0.0; })), InvalidParameter);
  CHECK_THROWS_AS(ConstitutiveModel(with([](auto& p) { p.k_floor = 0.0; })), InvalidParameter);
  CHECK_THROWS_AS(KirchhoffTable(ConstitutiveModel(), 0.0), InvalidParameter);
}

TEST_CASE("kirchhoff: identity branch and reference values") {
  const auto& s = bench();
  CHECK(s.kirchhoff(3.7) == 3.7);
  CHECK(s.kirchhoff(0.0) == 0.0);
  CHECK(s.kirchhoff(-2.0) == doctest::Approx(kBenchPsiM2).epsilon(1e-11));
  CHECK(s.kirchhoff(-1.0) == doctest::Approx(kBenchPsiM1).epsilon(1e-11));
  CHECK(s.kirchhoff(-0.3) == doctest::Approx(kBenchPsiM03).epsilon(1e-11));
  CHECK(std::abs(s.kirchhoff(-1e-4) - kBenchPsiSmall) < 1e-12);
  CHECK(s.table().u_lower() == doctest::Approx(kBenchUlower).epsilon(1e-11));
}

TEST_CASE("kirchhoff table invariants") {
  const auto& t = bench().table();
  const auto& p = t.p_samples();
  const auto& u = t.u_samples();
  REQUIRE(p.size() == u.size());
  for (std::size_t i = 1; i < p.size(); ++i) {
    REQUIRE(p[i] > p[i - 1]);
    REQUIRE(u[i] > u[i - 1]);
  }
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] >= 0.0) CHECK(u[i] == p[i]);
  CHECK(t.u_lower() <= u.front());
  CHECK(u.front() < 0.0);
  CHECK(t.interp_order() == 3);
}

TEST_CASE("kirchhoff inverse") {
  const auto& s = bench();
  CHECK(s.kirchhoff_inverse(1.5) == 1.5);
  CHECK(s.kirchhoff_inverse(s.kirchhoff(-2.0)) == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK_THROWS_AS(s.kirchhoff_inverse(s.table().u_lower() - 0.01), DomainError);
  CHECK_THROWS_AS(s.kirchhoff_inverse(s.table().u_lower()), DomainError);
  for (double p : {-55.0, -30.0, -5.0, -0.5, -1e-3, -1e-7}) {
    const double u = s.kirchhoff(p);
    CHECK(std::abs(s.kirchhoff(s.kirchhoff_inverse(u)) - u) <= 1e-12);
  }
}

TEST_CASE("kirchhoff chain rule: psi' = K_f(S(p))") {
  const auto& s = bench();
  const auto& m = s.constitutive();
  const double d = 1e-5;
  for (double p = -50.0; p <= 2.0; p += 0.37) {
    const double fd = (s.kirchhoff(p + d) - s.kirchhoff(p - d)) / (2 * d);
    REQUIRE(std::abs(fd - m.kirchhoff_integrand(p)) <= 1e-6);
  }
}

TEST_CASE("b(u) and b'(u)") {
  const auto& s = bench();
  const auto& m = s.constitutive();
  const double a_min = m.params().a_min;
  CHECK(s.b_of_u(2.0) == doctest::Approx(1.0 + 2.0 * a_min).epsilon(1e-15));
  CHECK(s.evaluate(2.0).k == 1.0);
  const double u1 = s.kirchhoff(-1.0);
  CHECK(s.b_of_u(u1) == doctest::Approx(m.saturation(-1.0)).epsilon(1e-12));
  CHECK(m.conductivity(m.saturation(-1.0)) == doctest::Approx(kBenchKm1).epsilon(1e-13));
  CHECK(s.b_prime(u1) == doctest::Approx(kBenchBprimeM1).epsilon(1e-10));
  const double d = 1e-6;
  CHECK(std::abs(s.b_prime(u1) - (s.b_of_u(u1 + d) - s.b_of_u(u1 - d)) / (2 * d)) < 1e-6 * 45);
  CHECK(s.b_prime(5.0) == a_min);
  const double near_floor = s.table().u_lower() + 1e-6;
  CHECK(s.b_of_u(near_floor) == doctest::Approx(m.params().s_res).epsilon(1e-3));

  double prev = s.b_of_u(s.lower_bound() + 1e-9);
  for (int i = 1; i <= 5000; ++i) {
    const double u = s.lower_bound() + (0.5 - s.lower_bound()) * i / 5000.0;
    const double b = s.b_of_u(u);
    REQUIRE(b > prev);
    REQUIRE(s.b_prime(u) > 0.0);
    prev = b;
  }
}

TEST_CASE("evaluate is consistent with its parts") {
  const auto& s = bench();
  for (double u : {-0.2, -0.15, -0.05, -1e-3, 0.4}) {
    const auto c = s.evaluate(u);
    CHECK(c.b == doctest::Approx(s.b_of_u(u)).epsilon(1e-14));
    CHECK(c.db == doctest::Approx(s.b_prime(u)).epsilon(1e-12));
    CHECK(c.k == doctest::Approx(s.constitutive().conductivity_saturated(c.b)).epsilon(1e-14));
    const double d = 1e-7;
    const double fd = (s.evaluate(u + d).k - s.evaluate(u - d).k) / (2 * d);
    CHECK(c.dk == doctest::Approx(fd).epsilon(1e-5).scale(1e-3));
  }
  // K_f(b(u)) joins the saturated plateau with zero slope.
  CHECK(s.evaluate(0.0).dk == 0.0);
  CHECK(std::abs(s.evaluate(-1e-9).dk) < 1e-6);
  CHECK(s.evaluate(-1e-9).k < 1.0);
}

TEST_CASE("Legendre transform") {
  const auto& s = bench();
  CHECK(s.legendre_B(0.0) == 0.0);
  for (double z : {-3.0, -0.5, 0.25, 2.0}) {
    CHECK(legendre_transform([](double x) { return x; }, z) == doctest::Approx(0.5 * z * z));
    CHECK(legendre_transform([](double) { return 1.0; }, z) == 0.0);
  }
  for (double z : {-0.2, -0.12, -0.02, -1e-4, 0.3, 1.0}) {
    const double ref = legendre_transform([&](double x) { return s.b_of_u(x); }, z, 1e-13);
    CHECK(std::abs(s.legendre_B(z) - ref) <= 1e-11);
    CHECK(s.legendre_B(z) >= 0.0);
  }
  // B' = b' z: decreasing for z < 0, increasing for z > 0.
  double prev = s.legendre_B(s.lower_bound() + 1e-9);
  for (int i = 1; i <= 400; ++i) {
    const double z = s.lower_bound() + (-s.lower_bound()) * i / 400.0;
    const double b = s.legendre_B(z);
    REQUIRE(b <= prev);
    prev = b;
  }
}

TEST_CASE("growth condition certificate") {
  const auto& s = bench();
  CHECK(s.beta_bound() == 1.0);
  CHECK(s.beta() == 1.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(s.lower_bound() + 1e-12, 5.0);
  for (int i = 0; i < 2000; ++i) {
    const double z = dist(rng);
    const double k = s.evaluate(z).k;
    REQUIRE(k * k <= s.beta() * (1.0 + s.legendre_B(z)));
  }
}

TEST_CASE("a shared model gives identical answers from concurrent readers") {
  const auto& s = bench();
  auto work = [&] {
    std::vector<double> out;
    for (int i = 0; i < 200; ++i) out.push_back(s.kirchhoff_inverse(-0.2 + 0.001 * i));
    return out;
  };
  auto a = std::async(std::launch::async, work);
  auto b = std::async(std::launch::async, work);
  CHECK(a.get() == b.get());
}
