#include <hyperslice/field.hpp>
#include <hyperslice/projective.hpp>

#include "oracle.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace hyperslice;

namespace {

std::vector<int> as_ints(std::span<const Elem> v) {
  std::vector<int> out;
  for (auto e : v) out.push_back(int(e.v));
  return out;
}

// Oracle tower mirroring the moduli the library chose (each checked independently).
std::shared_ptr<const oracle::Tower> mirror(const Field& k) {
  if (k.is_prime_field()) return oracle::prime(int(k.characteristic()));
  auto base = mirror(*k.subfield());
  auto mod = as_ints(k.modulus());
  EXPECT_TRUE(oracle::brute_irreducible(*base, mod));
  return oracle::over(base, mod);
}

std::vector<FieldPtr> small_fields() {
  std::vector<FieldPtr> out;
  for (std::uint32_t q : {2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49, 64, 81, 121, 125, 128, 243, 256, 343, 512})
    out.push_back(make_field_of_order(q));
  out.push_back(extend(make_field(2, 2), 2).field);  // GF(16) over GF(4)
  out.push_back(extend(make_field(2, 2), 3).field);  // GF(64) over GF(4)
  out.push_back(extend(make_field(3, 2), 2).field);  // GF(81) over GF(9)
  out.push_back(extend(make_field(2, 3), 3).field);  // GF(512) over GF(8)
  return out;
}

}  // namespace

TEST(MakeField, PrimeFieldOfOrderTwo) {
  for (std::uint64_t seed : {0, 1, 17}) {
    auto k = make_field(2, 1, seed);
    EXPECT_EQ(k->order(), 2u);
    EXPECT_TRUE(k->is_prime_field());
  }
}

TEST(MakeField, GF4UsesTheOnlyIrreducibleQuadratic) {
  auto k = make_field(2, 2, 0);
  EXPECT_EQ(k->order(), 4u);
  EXPECT_EQ(as_ints(k->modulus()), (std::vector<int>{1, 1, 1}));
  // The enumeration of all four monic quadratics agrees that it is unique.
  auto f2 = oracle::prime(2);
  int irreducible = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) irreducible += oracle::brute_irreducible(*f2, {a, b, 1});
  EXPECT_EQ(irreducible, 1);
}

TEST(MakeField, Errors) {
  auto code = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidScenario;
  };
  EXPECT_EQ(code([] { make_field(4, 1); }), ErrorCode::NotPrime);
  EXPECT_EQ(code([] { make_field(1, 1); }), ErrorCode::NotPrime);
  EXPECT_EQ(code([] { make_field(3, 0); }), ErrorCode::DegreeZero);
  EXPECT_EQ(code([] { make_field(2, 21); }), ErrorCode::FieldTooLarge);
  EXPECT_EQ(code([] { make_field(1048583, 1); }), ErrorCode::FieldTooLarge);
  EXPECT_EQ(code([] { make_field_of_order(12); }), ErrorCode::NotPrime);
  EXPECT_EQ(code([] { make_field(7, 1)->inv(Elem{0}); }), ErrorCode::DivisionByZero);
  EXPECT_EQ(code([] { extend(make_field(3, 1), 0); }), ErrorCode::DegreeZero);
}

TEST(MakeField, ModulusSearchTakesFirstIrreducibleCandidate) {
  auto f3 = oracle::prime(3);
  auto k = Field::prime(3);
  for (std::uint32_t d : {2u, 3u, 4u}) {
    int total = 1;
    for (std::uint32_t i = 0; i < d; ++i) total *= 3;
    for (std::uint64_t seed : {0ull, 5ull, 40ull, 1000ull}) {
      std::vector<int> expect;
      for (int j = 0; j < total && expect.empty(); ++j) {
        int idx = int((seed + j) % total);
        std::vector<int> f(d + 1);
        for (std::uint32_t i = 0; i < d; ++i) {
          f[i] = idx % 3;
          idx /= 3;
        }
        f[d] = 1;
        if (oracle::brute_irreducible(*f3, f)) expect = f;
      }
      EXPECT_EQ(as_ints(find_irreducible(*k, d, seed)), expect) << "d=" << d << " seed=" << seed;
    }
  }
}

TEST(MakeField, SeedsAreReproducible) {
  EXPECT_EQ(as_ints(make_field(5, 3, 9)->modulus()), as_ints(make_field(5, 3, 9)->modulus()));
}

TEST(Arith, SpecExamples) {
  auto f5 = make_field(5, 1);
  EXPECT_EQ(f5->mul(Elem{3}, Elem{4}), Elem{2});
  auto f4 = make_field(2, 2, 0);
  const Elem t = f4->generator();
  EXPECT_EQ(f4->mul(t, t), f4->add(t, f4->one()));
  EXPECT_EQ(f4->format(f4->mul(t, t)), "g + 1");
  auto f7 = make_field(7, 1);
  EXPECT_EQ(f7->inv(Elem{3}), Elem{5});
}

TEST(Arith, MatchesOracleOnAllPairs) {
  for (const auto& k : small_fields()) {
    if (k->order() > 128) continue;
    auto o = mirror(*k);
    const int q = int(k->order());
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) {
        const Elem x{std::uint32_t(a)}, y{std::uint32_t(b)};
        ASSERT_EQ(int(k->add(x, y).v), o->add(a, b)) << q;
        ASSERT_EQ(int(k->sub(x, y).v), o->sub(a, b)) << q;
        ASSERT_EQ(int(k->mul(x, y).v), o->mul(a, b)) << q;
      }
    for (int a = 1; a < q; ++a) ASSERT_EQ(int(k->inv(Elem{std::uint32_t(a)}).v), o->inv(a)) << q;
  }
}

TEST(Arith, TablesAgreeWithSchoolbook) {
  for (const auto& k : small_fields()) {
    if (k->order() > 256) continue;
    const std::uint32_t q = k->order();
    for (std::uint32_t a = 0; a < q; ++a) {
      for (std::uint32_t b = 0; b < q; ++b) ASSERT_EQ(k->mul(Elem{a}, Elem{b}), k->mul_schoolbook(Elem{a}, Elem{b}));
      ASSERT_EQ(k->pow(Elem{a}, 7), k->pow_schoolbook(Elem{a}, 7));
    }
  }
}

TEST(Elements, Enumeration) {
  auto f3 = make_field(3, 1);
  EXPECT_EQ(elements(*f3), (std::vector<Elem>{Elem{0}, Elem{1}, Elem{2}}));
  auto f4 = make_field(2, 2);
  auto e4 = elements(*f4);
  EXPECT_EQ(e4.size(), 4u);
  EXPECT_EQ(std::set<Elem>(e4.begin(), e4.end()).size(), 4u);
  EXPECT_EQ(e4.front(), f4->zero());
  auto f9 = make_field(3, 2);
  auto e9 = elements(*f9);
  EXPECT_EQ(e9.size(), 9u);
  for (auto a : e9) {
    Elem x = a;
    for (int i = 1; i < 9; ++i) x = f9->mul_schoolbook(x, a);
    EXPECT_EQ(x, a);
  }
}

TEST(Invariants, FrobeniusFixesEveryElement) {
  for (const auto& k : small_fields())
    for (auto a : elements(*k)) ASSERT_EQ(k->pow(a, k->order()), a) << k->order();
}

TEST(Invariants, MultiplicativeGroup) {
  for (const auto& k : small_fields())
    for (auto a : elements(*k)) {
      if (a.v == 0) continue;
      ASSERT_EQ(k->mul(a, k->inv(a)), k->one());
      ASSERT_EQ(k->pow(a, k->order() - 1), k->one());
      ASSERT_EQ(k->div(a, a), k->one());
    }
}

TEST(Invariants, RingAxiomsOnRandomTriples) {
  std::mt19937_64 gen(12345);
  for (const auto& k : small_fields()) {
    std::uniform_int_distribution<std::uint32_t> pick(0, k->order() - 1);
    for (int i = 0; i < 1000; ++i) {
      const Elem a{pick(gen)}, b{pick(gen)}, c{pick(gen)};
      ASSERT_EQ(k->mul(k->mul(a, b), c), k->mul(a, k->mul(b, c)));
      ASSERT_EQ(k->add(k->add(a, b), c), k->add(a, k->add(b, c)));
      ASSERT_EQ(k->mul(a, b), k->mul(b, a));
      ASSERT_EQ(k->add(a, b), k->add(b, a));
      ASSERT_EQ(k->mul(a, k->add(b, c)), k->add(k->mul(a, b), k->mul(a, c)));
      ASSERT_EQ(k->add(a, k->neg(a)), k->zero());
    }
  }
}

TEST(IsSquare, SpecExamples) {
  auto f5 = make_field(5, 1);
  EXPECT_TRUE(f5->is_square(Elem{4}));
  EXPECT_FALSE(f5->is_square(Elem{3}));
  auto f4 = make_field(2, 2);
  for (auto a : elements(*f4)) EXPECT_TRUE(f4->is_square(a));
}

TEST(IsSquare, HalfOfOddFieldsPlusZero) {
  for (std::uint32_t q : {3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31, 37, 41, 43, 47, 49, 53, 59, 61, 67, 71, 73, 79, 81}) {
    auto k = make_field_of_order(q);
    std::set<Elem> squares;
    for (auto b : elements(*k)) squares.insert(k->mul(b, b));
    std::uint32_t flagged = 0;
    for (auto a : elements(*k)) {
      ASSERT_EQ(k->is_square(a), squares.count(a) == 1) << q;
      flagged += k->is_square(a);
    }
    EXPECT_EQ(flagged, (q + 1) / 2) << q;
  }
}

TEST(Extend, SpecExamples) {
  auto f3 = make_field(3, 1);
  auto e1 = extend(f3, 1);
  EXPECT_EQ(e1.field, f3);
  for (auto a : elements(*f3)) EXPECT_EQ(e1.embed(a), a);
  EXPECT_EQ(extend(f3, 2).field->order(), 9u);
  auto e8 = extend(make_field(2, 1), 3);
  EXPECT_EQ(e8.field->order(), 8u);
  for (auto x : elements(*e8.field)) EXPECT_EQ(e8.field->mul(e8.embed(Elem{1}), x), x);
}

TEST(Extend, EmbeddingIsAHomomorphism) {
  for (std::uint32_t q : {2, 3, 4, 5, 7, 8, 9, 11, 13, 16})
    for (std::uint32_t m = 1; m <= 3; ++m) {
      auto base = make_field_of_order(q);
      auto E = extend(base, m);
      ASSERT_EQ(E.field->order(), checked_pow(q, m));
      const Field& K = *E.field;
      for (auto a : elements(*base))
        for (auto b : elements(*base)) {
          ASSERT_EQ(E.embed(base->add(a, b)), K.add(E.embed(a), E.embed(b))) << q << "^" << m;
          ASSERT_EQ(E.embed(base->mul(a, b)), K.mul(E.embed(a), E.embed(b))) << q << "^" << m;
        }
      // The image is exactly the fixed field of x -> x^q.
      std::uint32_t fixed = 0;
      for (auto x : elements(K)) fixed += K.pow(x, q) == x;
      ASSERT_EQ(fixed, q);
    }
}

TEST(Extend, ModulusIsIrreducibleOverBase) {
  for (std::uint32_t q : {2, 3, 4, 9})
    for (std::uint32_t m = 2; m <= 3; ++m) {
      auto E = extend(make_field_of_order(q), m, 3);
      auto o = mirror(*E.base);
      EXPECT_TRUE(oracle::brute_irreducible(*o, as_ints(E.field->modulus())));
    }
}

TEST(Rabin, AgreesWithTrialDivision) {
  for (std::uint32_t q : {2, 3, 4, 5}) {
    auto k = make_field_of_order(q);
    auto o = mirror(*k);
    const std::uint32_t max_d = q <= 3 ? 5 : 3;
    for (std::uint32_t d = 1; d <= max_d; ++d) {
      std::uint64_t total = checked_pow(q, d);
      for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::vector<Elem> f(d + 1);
        std::vector<int> g(d + 1);
        std::uint64_t x = idx;
        for (std::uint32_t i = 0; i < d; ++i) {
          f[i] = Elem{std::uint32_t(x % q)};
          g[i] = int(x % q);
          x /= q;
        }
        f[d] = k->one();
        g[d] = 1;
        ASSERT_EQ(upoly::is_irreducible(*k, f), oracle::brute_irreducible(*o, g)) << "q=" << q << " idx=" << idx;
      }
    }
  }
}

TEST(Format, PolynomialInGenerator) {
  auto f9 = make_field(3, 2);
  EXPECT_EQ(f9->format(Elem{0}), "0");
  EXPECT_EQ(f9->format(Elem{2}), "2");
  EXPECT_EQ(f9->format(Elem{3}), "g");
  EXPECT_EQ(f9->format(Elem{7}), "2*g + 1");
  EXPECT_EQ(f9->from_int(-1), Elem{2});
  EXPECT_EQ(f9->from_coefficients(f9->coefficients(Elem{7})), Elem{7});
}
