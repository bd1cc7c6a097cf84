#include <catch2/catch.hpp>
#include <cmath>
#include <sstream>

#include "fqsde/clifford_element.hpp"
#include "fqsde/errors.hpp"
#include "fqsde/random.hpp"
#include "oracles.hpp"

using namespace fqsde;

namespace {

SpacePtr space_n(int n, IncrementLayout layout = IncrementLayout::Single) {
  return make_space(TimeGrid::uniform(0.0, 1.0, n), layout);
}

CliffordElement e(const SpacePtr& s, int j) { return CliffordElement::generator(s, j); }
CliffordElement I(const SpacePtr& s) { return CliffordElement::identity(s); }

CliffordElement random_full(const SpacePtr& s, Rng& rng) {
  return random_level_element(s, {s->generator_count()}, rng);
}

}  // namespace

TEST_CASE("space sizes follow the Majorana pairing", "[clifford][space]") {
  REQUIRE(space_n(1)->dim() == 2);
  REQUIRE(space_n(2)->dim() == 2);
  REQUIRE(space_n(3)->dim() == 4);
  REQUIRE(space_n(12)->dim() == 64);
  REQUIRE(space_n(6, IncrementLayout::MajoranaPair)->generator_count() == 12);
  REQUIRE_THROWS_AS(space_n(15), ResourceError);
  REQUIRE_THROWS_AS(space_n(8, IncrementLayout::MajoranaPair), ResourceError);
  REQUIRE_NOTHROW(make_space(TimeGrid::uniform(0.0, 1.0, 16), IncrementLayout::Single, {16}));
}

TEST_CASE("generators match an explicit Kronecker-product construction", "[clifford][space]") {
  for (int n : {1, 2, 5, 12}) {
    const SpacePtr s = space_n(n);
    for (int j = 1; j <= n; ++j) REQUIRE((s->generator(j) - oracle::majorana(n, j)).norm() < 1e-15);
  }
}

TEST_CASE("generators are self-adjoint and anticommute exhaustively at n = 12", "[clifford][space]") {
  const SpacePtr s = space_n(12);
  int pairs = 0;
  for (int j = 1; j <= 12; ++j) {
    REQUIRE(op_norm(e(s, j) - e(s, j).adjoint()) == 0.0);
    for (int k = j; k <= 12; ++k) {
      const CliffordElement target = CliffordElement::scalar(s, j == k ? 2.0 : 0.0);
      REQUIRE(op_norm(anticommutator(e(s, j), e(s, k)) - target) < 1e-12);
      if (j != k) ++pairs;
    }
  }
  REQUIRE(pairs == 66);
}

TEST_CASE("the grading unitary negates every generator", "[clifford][space]") {
  const SpacePtr s = space_n(7);
  const Matrix G = s->parity_unitary();
  REQUIRE((G * G - Matrix::Identity(s->dim(), s->dim())).norm() == 0.0);
  for (int j = 1; j <= 7; ++j) REQUIRE((G * s->generator(j) * G + s->generator(j)).norm() == 0.0);
}

TEST_CASE("monomials are orthonormal under the trace inner product", "[clifford][space]") {
  const SpacePtr s = space_n(6);
  const auto count = static_cast<Mask>(s->monomial_count());
  for (Mask a = 0; a < count; ++a)
    for (Mask b = 0; b < count; ++b) {
      const Complex ip = state(CliffordElement::monomial(s, a).adjoint() * CliffordElement::monomial(s, b));
      REQUIRE(std::abs(ip - Complex(a == b ? 1.0 : 0.0)) < 1e-12);
    }
}

TEST_CASE("state is a tracial normalized functional", "[clifford][state]") {
  const SpacePtr s = space_n(6);
  REQUIRE(state(I(s)) == Complex(1.0));
  REQUIRE(state(e(s, 1)) == Complex(0.0));
  REQUIRE(state(e(s, 1) * e(s, 2) * e(s, 2) * e(s, 1)) == Complex(1.0));
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    const CliffordElement x = random_full(s, rng);
    const CliffordElement y = random_full(s, rng);
    REQUIRE(std::abs(state(x * y) - state(y * x)) < 1e-12);
    REQUIRE(state(x.adjoint() * x).real() > 0.0);
    REQUIRE(std::abs(state(x.adjoint() * x).imag()) < 1e-14);
  }
}

TEST_CASE("L^p norms agree with a singular-value oracle", "[clifford][norm]") {
  const SpacePtr s = space_n(6);
  for (double p : {1.0, 2.0, 3.5, 8.0}) REQUIRE(lp_norm(e(s, 1) * e(s, 2), p) == Approx(1.0).epsilon(1e-14));
  REQUIRE(lp_norm(I(s) + e(s, 1), 2.0) == Approx(std::sqrt(2.0)).epsilon(1e-14));
  REQUIRE(lp_norm(CliffordElement::zero(s), 3.0) == 0.0);
  REQUIRE_THROWS_AS(lp_norm(I(s), 0.5), DomainError);

  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const CliffordElement x = random_full(s, rng);
    const CliffordElement y = random_full(s, rng);
    double prev = 0.0;
    for (double p : {1.0, 1.5, 2.0, 3.0, 4.0, 7.0}) {
      const double v = lp_norm(x, p);
      REQUIRE(v == Approx(oracle::svd_lp_norm(x.matrix(), p)).epsilon(1e-10));
      REQUIRE(std::abs(v - lp_norm(x.adjoint(), p)) < 1e-10);
      REQUIRE(v >= prev - 1e-10);
      REQUIRE(lp_norm(x + y, p) <= v + lp_norm(y, p) + 1e-10);
      prev = v;
    }
    REQUIRE(op_norm(x) >= lp_norm(x, 7.0) - 1e-10);
  }
}

TEST_CASE("the state is faithful at desk scale", "[clifford][state]") {
  const SpacePtr s = space_n(4);
  Rng rng(3);
  const CliffordElement x = random_full(s, rng);
  REQUIRE(state(x.adjoint() * x).real() > 1e-6);
  const CliffordElement z = x - x;
  REQUIRE(state(z.adjoint() * z).real() == 0.0);
  REQUIRE(op_norm(z) < 1e-10);
}

TEST_CASE("fermion increments square to the step and anticommute", "[clifford][increment]") {
  const SpacePtr s = space_n(4);
  const CliffordElement w0 = fermion_increment(s, 0);
  const CliffordElement w1 = fermion_increment(s, 1);
  REQUIRE(op_norm(w0 * w0 - CliffordElement::scalar(s, 0.25)) < 1e-15);
  REQUIRE(op_norm(anticommutator(w0, w1)) < 1e-15);
  REQUIRE(op_norm(w0 - w0.adjoint()) == 0.0);
  CliffordElement W = CliffordElement::zero(s);
  for (int k = 0; k < 4; ++k) W += fermion_increment(s, k);
  REQUIRE(op_norm(W * W - I(s)) < 1e-14);
  for (double p : {1.0, 2.0, 5.0}) REQUIRE(lp_norm(W, p) == Approx(1.0).epsilon(1e-14));
  REQUIRE_THROWS(fermion_increment(s, 4));
  REQUIRE_THROWS(fermion_increment(s, -1));
}

TEST_CASE("annihilation increments satisfy the CAR", "[clifford][increment]") {
  const SpacePtr s = space_n(3, IncrementLayout::MajoranaPair);
  const double dt = 1.0 / 3.0;
  for (int k = 0; k < 3; ++k) {
    const CliffordElement a = annihilation_increment(s, k);
    const CliffordElement c = creation_increment(s, k);
    REQUIRE(op_norm(a * a) < 1e-15);
    REQUIRE(op_norm(c - a.adjoint()) == 0.0);
    REQUIRE(op_norm(a * c + c * a - CliffordElement::scalar(s, dt)) < 1e-15);
    REQUIRE(std::abs(state(c * a) - Complex(dt / 2.0)) < 1e-15);
  }
  // One Majorana pair by hand: a = (X + iY)/2 = [[0,1],[0,0]].
  const SpacePtr one = space_n(1, IncrementLayout::MajoranaPair);
  const Matrix a = annihilation_increment(one, 0).matrix();
  REQUIRE(std::abs(a(0, 1) - Complex(1.0)) < 1e-15);
  REQUIRE(std::abs(a(1, 0)) < 1e-15);
  REQUIRE_THROWS_AS(annihilation_increment(space_n(3), 0), ConfigError);
  REQUIRE_THROWS_AS(fermion_increment(s, 0), ConfigError);
}

TEST_CASE("conditional expectation on basis elements", "[clifford][expectation]") {
  const SpacePtr s = space_n(4);
  const CliffordElement x = 2.0 * I(s) + 3.0 * e(s, 1) + 5.0 * e(s, 1) * e(s, 2);
  REQUIRE(op_norm(conditional_expect(x, {1}) - (2.0 * I(s) + 3.0 * e(s, 1))) < 1e-14);
  REQUIRE(op_norm(conditional_expect(e(s, 2), {1})) < 1e-15);
  Rng rng(5);
  const CliffordElement y = random_full(s, rng);
  REQUIRE(op_norm(conditional_expect(y, {4}) - y) == 0.0);
  REQUIRE(op_norm(conditional_expect(y, {0}) - CliffordElement::scalar(s, state(y))) < 1e-14);
}

TEST_CASE("conditional expectation at even levels is a partial trace", "[clifford][expectation]") {
  const SpacePtr s = space_n(8);
  Rng rng(21);
  for (int t = 0; t < 5; ++t) {
    const CliffordElement x = random_full(s, rng);
    for (int keep = 0; keep <= 4; ++keep) {
      const Matrix expected = oracle::partial_trace_expect(x.matrix(), 4, keep);
      REQUIRE((conditional_expect(x, {2 * keep}).matrix() - expected).norm() < 1e-12);
    }
  }
}

TEST_CASE("conditional expectation properties", "[clifford][expectation][property]") {
  const SpacePtr s = space_n(7);
  Rng rng(99);
  for (int t = 0; t < 10; ++t) {
    const CliffordElement x = random_full(s, rng);
    for (int j = 0; j <= 7; ++j) {
      const CliffordElement ej = conditional_expect(x, {j});
      REQUIRE(op_norm(conditional_expect(ej, {j}) - ej) < 1e-10);
      REQUIRE(std::abs(state(ej) - state(x)) < 1e-12);
      for (double p : {1.0, 2.0, 4.0}) REQUIRE(lp_norm(ej, p) <= lp_norm(x, p) + 1e-10);
      for (int k = 0; k <= 7; ++k) {
        const CliffordElement tower = conditional_expect(conditional_expect(x, {j}), {k});
        REQUIRE(op_norm(tower - conditional_expect(x, {std::min(j, k)})) < 1e-10);
      }
      const CliffordElement a = random_level_element(s, {j}, rng);
      const CliffordElement b = random_level_element(s, {j}, rng);
      REQUIRE(op_norm(conditional_expect(a * x * b, {j}) - a * ej * b) < 1e-10);
    }
  }
}

TEST_CASE("parity decomposition", "[clifford][parity]") {
  const SpacePtr s = space_n(5);
  const ParityParts p1 = parity_decompose(e(s, 1));
  REQUIRE(op_norm(p1.even) == 0.0);
  REQUIRE(op_norm(p1.odd - e(s, 1)) == 0.0);
  const ParityParts p12 = parity_decompose(e(s, 1) * e(s, 2));
  REQUIRE(op_norm(p12.odd) == 0.0);
  Rng rng(1);
  for (int t = 0; t < 10; ++t) {
    const CliffordElement x = random_full(s, rng);
    const ParityParts parts = parity_decompose(x);
    REQUIRE(op_norm(parts.even + parts.odd - x) < 1e-14);
    REQUIRE(op_norm(parity(parts.even) - parts.even) < 1e-14);
    REQUIRE(op_norm(parity(parts.odd) + parts.odd) < 1e-14);
    REQUIRE(op_norm(parity(parity(x)) - x) < 1e-14);
    for (double p : {1.0, 2.0, 3.0, 6.0}) {
      REQUIRE(std::abs(lp_norm(parity(x), p) - lp_norm(x, p)) < 1e-10);
      REQUIRE(std::max(lp_norm(parts.even, p), lp_norm(parts.odd, p)) <= lp_norm(x, p) + 1e-10);
    }
    const CliffordElement h = x + x.adjoint();
    const ParityParts hp = parity_decompose(h);
    REQUIRE(op_norm(hp.even - hp.even.adjoint()) < 1e-14);
    REQUIRE(op_norm(hp.odd - hp.odd.adjoint()) < 1e-14);
  }
}

TEST_CASE("monomial expansion round trip", "[clifford][monomial]") {
  const SpacePtr s = space_n(5);
  const MonomialExpansion id = monomial_expand(I(s), 1e-14);
  REQUIRE(id.size() == 1);
  REQUIRE(std::abs(id.at(0) - Complex(1.0)) < 1e-15);
  const double d = s->grid().step(2);
  const MonomialExpansion inc = monomial_expand(fermion_increment(s, 2), 1e-14);
  REQUIRE(inc.size() == 1);
  REQUIRE(std::abs(inc.at(Mask{1} << 2) - Complex(std::sqrt(d))) < 1e-15);
  Rng rng(8);
  const CliffordElement x = random_full(s, rng);
  REQUIRE(op_norm(reconstruct(s, monomial_expand(x)) - x) < 1e-10);
  for (const auto& [mask, c] : monomial_expand(x)) REQUIRE(std::abs(monomial_coefficient(x, mask) - c) == 0.0);
}

TEST_CASE("elements from different spaces do not mix", "[clifford][element]") {
  const SpacePtr a = space_n(3);
  const SpacePtr b = space_n(3);
  REQUIRE_THROWS_AS(I(a) + I(b), DomainError);
  REQUIRE_THROWS_AS(I(a) * I(b), DomainError);
  REQUIRE_THROWS_AS(CliffordElement(a, Matrix::Identity(2, 2)), DomainError);
}

TEST_CASE("matrix dumps round trip", "[clifford][io]") {
  const SpacePtr s = space_n(4);
  Rng rng(2);
  const CliffordElement x = random_full(s, rng);
  std::stringstream ss;
  write_matrix(ss, x);
  REQUIRE(ss.str().rfind("dim 4\n", 0) == 0);
  const Matrix back = read_matrix(ss);
  REQUIRE((back - x.matrix()).norm() == 0.0);
}
