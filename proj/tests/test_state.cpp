#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "east/state.hpp"

using namespace eastsim;

TEST_CASE("Pure pattern state puts all weight on one basis vector") {
  ProductStateSpec spec;
  spec.pattern = "111" + std::string(21, '0');
  auto psi = make_state(spec);
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-14));
  // |11100...0> has index 111000... in binary, site 1 most significant.
  const std::size_t idx = 0b111ull << 21;
  CHECK(std::abs(psi(idx) - 1.0) < 1e-14);
}

TEST_CASE("phi(3, 1/3) splits weight across exactly two basis vectors") {
  ProductStateSpec spec;
  spec.pattern = "11100000";
  spec.alpha_site = 4;
  spec.alpha = 1.0 / 3.0;
  auto psi = make_state(spec);
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-14));
  const std::size_t with = 0b11110000, without = 0b11100000;
  CHECK(std::abs(psi(with)) == doctest::Approx(std::sqrt(1.0 / 3.0)));
  CHECK(std::abs(psi(without)) == doctest::Approx(std::sqrt(2.0 / 3.0)));
}

TEST_CASE("alpha = 1 collapses the superposition to a pure pattern") {
  ProductStateSpec sup;
  sup.pattern = "110000";
  sup.alpha_site = 3;
  sup.alpha = 1.0;
  ProductStateSpec pure;
  pure.pattern = "111000";
  CHECK((make_state(sup) - make_state(pure)).norm() < 1e-14);
}

TEST_CASE("initial occupation counts pattern ones plus alpha") {
  ProductStateSpec spec;
  spec.pattern = "10100000";
  CHECK(initial_occupation(spec) == doctest::Approx(2.0));

  spec.pattern = "11100000";
  spec.alpha_site = 4;
  spec.alpha = 1.0 / 3.0;
  CHECK(initial_occupation(spec) == doctest::Approx(10.0 / 3.0));

  ProductStateSpec vac;
  vac.pattern = "0000";
  CHECK(initial_occupation(vac) == doctest::Approx(0.0));
}

TEST_CASE("mirror reverses the pattern and relocates the alpha site") {
  ProductStateSpec spec;
  spec.pattern = "11100000";
  auto m = mirror(spec);
  CHECK(m.pattern == "00000111");
  CHECK(mirror(m).pattern == spec.pattern);

  spec.alpha_site = 4;
  spec.alpha = 1.0 / 3.0;
  CHECK(*mirror(spec).alpha_site == 5);
  CHECK(initial_occupation(mirror(spec)) ==
        doctest::Approx(initial_occupation(spec)));
}

TEST_CASE("per-site occupation matches the spec entries") {
  ProductStateSpec spec;
  spec.pattern = "101000";
  spec.alpha_site = 4;
  spec.alpha = 0.25;
  auto psi = make_state(spec);
  for (int site = 1; site <= 6; ++site) {
    double n = 0.0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(psi.size()); ++i)
      if (i & (1ull << (6 - site))) n += std::norm(psi(i));
    double want = spec.pattern[site - 1] == '1' ? 1.0 : 0.0;
    if (site == 4) want = 0.25;
    CHECK(n == doctest::Approx(want).epsilon(1e-14));
  }
}

TEST_CASE("state spec validation and parsing") {
  CHECK_THROWS(parse_state_spec("10a0"));
  CHECK_THROWS(parse_state_spec("1000@2:1.5"));
  CHECK_THROWS(parse_state_spec("1000@9:0.5"));
  auto spec = parse_state_spec("111000@4:0.3333");
  CHECK(spec.pattern == "111000");
  CHECK(*spec.alpha_site == 4);
  CHECK(spec.alpha == doctest::Approx(0.3333));
  CHECK(to_string(spec).substr(0, 9) == "111000@4:");
}
