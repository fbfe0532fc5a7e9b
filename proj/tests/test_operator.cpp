#include "celliptic/error.hpp"
#include "celliptic/operator.hpp"
#include "celliptic/operator_io.hpp"
#include "celliptic/operator_zoo.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace celliptic;
using celliptic::testing::random_polynomial;
using celliptic::testing::random_vector;
using cd = std::complex<double>;

TEST_CASE("graded-lex index agrees with the enumeration") {
  for (int n = 1; n <= 4; ++n) {
    const auto monos = monomials_up_to(n, 6);
    CHECK(monos.size() == count_monomials_up_to(n, 6));
    for (std::size_t i = 0; i < monos.size(); ++i)
      CHECK(graded_lex_index(monos[i]) == i);
  }
  // 1, x, y, x^2, xy, y^2
  CHECK(graded_lex_index({1, 1}) == 4);
  CHECK(graded_lex_index({0, 2}) == 5);
}

TEST_CASE("validate reports the documented violations") {
  CHECK(validate(zoo::gradient(2)).ok());

  Operator::Terms terms = zoo::gradient(2).terms();
  terms.emplace(MultiIndex{0, 0}, Eigen::MatrixXd::Ones(2, 1));
  const auto mixed = validate(Operator(2, 1, 1, 2, terms));
  REQUIRE_FALSE(mixed.ok());
  CHECK(mixed.violations.front().find("non-homogeneous term") != std::string::npos);

  Operator::Terms zeros{{MultiIndex{1, 0}, Eigen::MatrixXd::Zero(2, 1)},
                        {MultiIndex{0, 1}, Eigen::MatrixXd::Zero(2, 1)}};
  const auto zero = validate(Operator(2, 1, 1, 2, zeros));
  REQUIRE_FALSE(zero.ok());
  CHECK(zero.violations.back() == "zero operator");

  CHECK_FALSE(validate(Operator(1, 1, 1, 1, {{MultiIndex{1}, Eigen::MatrixXd::Ones(1, 1)}})).ok());
}

TEST_CASE("symbol of zoo operators") {
  SUBCASE("gradient at e1") {
    const auto s = symbol(zoo::gradient(2), Eigen::Vector2cd(1.0, 0.0)).matrix;
    CHECK(s.rows() == 2);
    CHECK(std::abs(s(0, 0) - cd(1.0)) == 0.0);
    CHECK(std::abs(s(1, 0)) == 0.0);
  }
  SUBCASE("scalar Laplacian vanishes at (1, i)") {
    const auto s = symbol(zoo::laplacian_scalar(2), Eigen::Vector2cd(cd(1, 0), cd(0, 1))).matrix;
    CHECK(std::abs(s(0, 0)) == 0.0);
  }
  SUBCASE("symmetric gradient at e2") {
    const auto s = symbol(zoo::symmetric_gradient(2), Eigen::Vector2cd(0.0, 1.0)).matrix;
    Eigen::MatrixXd expected(3, 2);
    expected << 0, 0, 0, 1, 1 / std::sqrt(2.0), 0;
    CHECK((s.real() - expected).norm() < 1e-15);
    CHECK(s.imag().norm() == 0.0);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(symbol(zoo::gradient(3), Eigen::Vector2cd(1.0, 0.0)), InvariantError);
  }
}

TEST_CASE("symbol is k-homogeneous and conjugation symmetric") {
  for (const auto &name : zoo::names()) {
    const Operator op = zoo::by_name(name, 2);
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::VectorXcd xi(2);
      xi << cd(testing::uniform(), testing::uniform()), cd(testing::uniform(), testing::uniform());
      const cd t(testing::uniform(), testing::uniform());
      const auto base = symbol(op, xi).matrix;
      const auto scaled = symbol(op, t * xi).matrix;
      CHECK((scaled - std::pow(t, op.k()) * base).norm() <= 1e-13 * (1.0 + base.norm()));
      const auto conj = symbol(op, xi.conjugate()).matrix;
      CHECK((conj - base.conjugate()).norm() <= 1e-13 * (1.0 + base.norm()));
    }
    const Eigen::VectorXd real_xi = random_vector(2);
    CHECK(symbol(op, real_xi.cast<cd>()).matrix.imag().norm() == 0.0);
  }
}

TEST_CASE("apply_to_polynomial examples") {
  SUBCASE("gradient kills constants") {
    const auto q = Polynomial::constant(2, Eigen::VectorXd::Constant(1, 3.5));
    CHECK(apply_to_polynomial(zoo::gradient(2), q).is_zero());
  }
  SUBCASE("symmetric gradient kills the rotation (-y, x)") {
    Polynomial q = Polynomial::monomial(2, 2, {0, 1}, 0, -1.0) + Polynomial::monomial(2, 2, {1, 0}, 1);
    CHECK(apply_to_polynomial(zoo::symmetric_gradient(2), q).is_zero(1e-15));
  }
  SUBCASE("Hessian of xy") {
    const auto q = Polynomial::monomial(2, 1, {1, 1}, 0);
    const auto h = apply_to_polynomial(zoo::hessian(2), q);
    CHECK(h.degree_bound() == 0);
    // W = (d11, d12, d21, d22)
    const Eigen::VectorXd c = h.coefficient({0, 0});
    CHECK(c[0] == 0.0);
    CHECK(c[1] == 1.0);
    CHECK(c[2] == 1.0);
    CHECK(c[3] == 0.0);
  }
  SUBCASE("degree below k gives the zero polynomial") {
    const auto q = random_polynomial(2, 1, 1);
    CHECK(apply_to_polynomial(zoo::hessian(2), q).is_zero());
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(apply_to_polynomial(zoo::gradient(2), random_polynomial(2, 2, 2)), InvariantError);
  }
}

TEST_CASE("apply_to_polynomial agrees with composed partial derivatives and tracks degree") {
  // Cross-check A q against d^alpha built from first-order partials one at a time.
  for (const auto &name : {"gradient", "symmetric_gradient", "hessian", "laplacian_scalar"}) {
    const Operator op = zoo::by_name(name, 2);
    const Polynomial q = random_polynomial(2, op.dim_v(), 4);
    const Polynomial aq = apply_to_polynomial(op, q);
    CHECK(aq.actual_degree() == 4 - op.k());
    const Eigen::VectorXd x = random_vector(2);
    Eigen::VectorXd direct = Eigen::VectorXd::Zero(op.dim_w());
    for (const auto &[alpha, a] : op.terms()) {
      Polynomial d = q;
      for (int i = 0; i < 2; ++i)
        for (int e = 0; e < alpha[i]; ++e) {
          MultiIndex unit{0, 0};
          unit[i] = 1;
          d = d.derivative(unit);
        }
      direct += a * d(x);
    }
    CHECK((aq(x) - direct).norm() < 1e-10 * (1.0 + direct.norm()));
  }
}

TEST_CASE("polynomial affine composition and derivative") {
  const Polynomial p = random_polynomial(3, 2, 3);
  const Eigen::VectorXd c = random_vector(3);
  const double s = 0.37;
  const Polynomial q = p.compose_affine(c, s);
  for (int t = 0; t < 10; ++t) {
    const Eigen::VectorXd x = random_vector(3);
    CHECK((q(x) - p((x - c) / s)).norm() < 1e-10 * (1.0 + p((x - c) / s).norm()));
  }
  const auto d = p.derivative({1, 0, 2});
  CHECK(d.degree_bound() == 0);
  CHECK(d.coefficient({0, 0, 0})[0] == doctest::Approx(2.0 * p.coefficient({1, 0, 2})[0]));
}

TEST_CASE("operator JSON round trip is a fixed point") {
  for (const auto &name : zoo::names()) {
    const Operator op = zoo::by_name(name, 2);
    const auto j1 = operator_to_json(op);
    const Operator back = operator_from_json(j1);
    CHECK(operator_to_json(back).dump() == j1.dump());
    CHECK(validate(back).ok());
  }
  CHECK_THROWS_AS(operator_from_json(nlohmann::json::parse(R"({"n": 2})")), ParseError);
  CHECK_THROWS_AS(operator_from_json(nlohmann::json::parse(
                      R"({"n":2,"k":1,"dim_v":1,"dim_w":1,"terms":[{"alpha":[1,0],"matrix":[[1],[1,2]]}]})")),
                  ParseError);
}

TEST_CASE("zoo references") {
  CHECK(load_operator("zoo:symmetric_gradient", 3).dim_w() == 6);
  CHECK(load_operator("zoo:derivative", 2, 3).dim_w() == 8);
  CHECK_THROWS_AS(load_operator("zoo:nope", 2), ParseError);
  CHECK_THROWS_AS(zoo::cauchy_riemann(3), InvariantError);
  CHECK_THROWS_AS(load_operator("/nonexistent/op.json", 2), ParseError);
}
