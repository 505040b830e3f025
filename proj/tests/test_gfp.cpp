#include <doctest.h>

#include <random>
#include <vector>

#include "snfp/gfp.hpp"

using namespace snfp;

TEST_CASE("field spec bit width") {
  CHECK(FieldSpec(12379).k() == 14);
  CHECK(FieldSpec(7).k() == 3);
  CHECK(FieldSpec(3).k() == 2);
  CHECK(FieldSpec(32749).k() == 15);
  CHECK(FieldSpec().p() == 12379);
}

TEST_CASE("field spec rejects non-primes and large moduli") {
  CHECK_THROWS_AS(FieldSpec(2), Error);
  CHECK_THROWS_AS(FieldSpec(9), Error);
  CHECK_THROWS_AS(FieldSpec(1), Error);
  CHECK_THROWS_AS(FieldSpec(32771), Error);  // prime, but above 2^15
}

TEST_CASE("pack examples") {
  FieldSpec f(12379);
  CHECK(pack(3, 7, f).packed == 49159);
  CHECK(pack(0, 0, f).packed == 0);
  CHECK(pack(1, 12378, f).packed == 28762);
  CHECK_THROWS_AS(pack(0, 12379, f), Error);
  CHECK_THROWS_AS(pack(f.max_index() + 1, 1, f), Error);
  CHECK(unpack(pack(f.max_index(), 5, f), f) == std::pair<Index, FieldValue>{f.max_index(), 5});
}

TEST_CASE("pack round trip on random pairs") {
  FieldSpec f(12379);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<Index> idx(0, f.max_index());
  std::uniform_int_distribution<FieldValue> val(0, f.p() - 1);
  for (int t = 0; t < 100000; ++t) {
    Index i = idx(rng);
    FieldValue v = val(rng);
    REQUIRE(unpack(pack(i, v, f), f) == std::pair<Index, FieldValue>{i, v});
  }
}

TEST_CASE("narrow-word layout round trip") {
  FieldSpec f(12379);
  const Index bound = 1'000'000;
  for (Index i : {Index{0}, Index{17}, bound - 1}) {
    auto w = legacy::pack_reversed(i, 99, bound, f);
    CHECK(legacy::unpack_reversed(w, bound, f) == std::pair<Index, FieldValue>{i, 99});
  }
  // Rows near the bound give small words.
  CHECK(legacy::pack_reversed(bound - 1, 5, bound, f) == 5);
  CHECK_THROWS_AS(legacy::pack_reversed(bound, 5, bound, f), Error);
}

TEST_CASE("arithmetic examples") {
  FieldSpec f(12379);
  CHECK(f.add(12378, 1) == 0);
  CHECK(f.inv(2) == 6190);
  CHECK(f.mul(0, 4321) == 0);
  CHECK(f.sub(0, 1) == 12378);
  CHECK(f.neg(0) == 0);
  CHECK(f.reduce(-1) == 12378);
  CHECK_THROWS_AS(f.inv(0), Error);
}

TEST_CASE("field axioms against wide integers") {
  for (FieldValue p : {7u, 12379u, 32749u}) {
    FieldSpec f(p);
    std::mt19937_64 rng(p);
    std::uniform_int_distribution<FieldValue> val(0, p - 1);
    for (int t = 0; t < 20000; ++t) {
      const FieldValue a = val(rng), b = val(rng), c = val(rng);
      const std::uint64_t P = p;
      REQUIRE(f.add(a, b) == (std::uint64_t{a} + b) % P);
      REQUIRE(f.sub(a, b) == (std::uint64_t{a} + P - b) % P);
      REQUIRE(f.mul(a, b) == (std::uint64_t{a} * b) % P);
      REQUIRE(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
      REQUIRE(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
      REQUIRE(f.mul(a, b) == f.mul(b, a));
      REQUIRE(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
    }
  }
}

TEST_CASE("inverse correctness") {
  for (FieldValue p : {3u, 7u, 12379u}) {
    FieldSpec f(p);
    CHECK(f.mul(f.inv(1), 1) == 1);
    CHECK(f.mul(f.inv(p - 1), p - 1) == 1);
    for (FieldValue a = 1; a < p; a += (p > 100 ? 37 : 1)) REQUIRE(f.mul(f.inv(a), a) == 1);
  }
}

TEST_CASE("primality helper") {
  // 12379 is the fourth prime after 12345.
  std::vector<std::uint64_t> after;
  for (std::uint64_t n = 12346; after.size() < 4; ++n)
    if (is_prime(n)) after.push_back(n);
  CHECK(after == std::vector<std::uint64_t>{12347, 12373, 12377, 12379});
  CHECK_FALSE(is_prime(12345));
  CHECK_FALSE(is_prime(1));
  CHECK(is_prime(2));
}
