#include <doctest.h>

#include "qknot/knot_diagram.hpp"

using namespace qknot;

namespace {

KnotDiagram fixture(const std::string& name) { return KnotDiagram::load(default_data_dir() / (name + ".pd")); }

const LaurentPoly unknot_value = LaurentPoly::parse("q^{1/2}+q^{-1/2}");

}  // namespace

TEST_CASE("unknot and unlink") {
  CHECK(jones(fixture("unknot")) == unknot_value);
  CHECK(jones(KnotDiagram::parse("Loop\nLoop\n")) == unknot_value * unknot_value);
  // A single kink is still the unknot.
  CHECK(jones(KnotDiagram::parse("Xp[1,1,2,2]\n")) == unknot_value);
}

TEST_CASE("trefoil fixture") {
  const LaurentPoly j = jones(fixture("3_1"));
  CHECK(j == unknot_value * LaurentPoly::parse("q^{-1}+q^{-3}-q^{-4}"));
  CHECK(jones(fixture("3_1").mirror()) == j.mirrored());
  CHECK(jones(KnotDiagram::from_braid({2, {1, 1, 1}})) == j);
}

TEST_CASE("skein relation at every crossing") {
  const LaurentPoly s = LaurentPoly::parse("q^{1/2}-q^{-1/2}");
  for (const char* name : {"3_1", "4_1", "5_2"}) {
    const KnotDiagram d = fixture(name);
    for (std::size_t i = 0; i < d.num_crossings(); ++i) {
      const bool positive = d.crossings()[i].sign > 0;
      const LaurentPoly jp = jones(positive ? d : d.switched(i));
      const LaurentPoly jm = jones(positive ? d.switched(i) : d);
      CHECK(LaurentPoly::q_power(1) * jp - LaurentPoly::q_power(-1) * jm == s * jones(d.smoothed(i)));
    }
  }
}

TEST_CASE("mirror sends q to 1/q") {
  for (const char* name : {"4_1", "5_2"}) {
    const KnotDiagram d = fixture(name);
    CHECK(jones(d.mirror()) == jones(d).mirrored());
  }
  CHECK(jones(fixture("4_1")) == jones(fixture("4_1")).mirrored());
}

TEST_CASE("cabling") {
  const KnotDiagram d = fixture("4_1");
  CHECK(d.writhe() == 0);
  CHECK(d.cable(0, 2).num_crossings() == 16);
  CHECK(d.cable(0, 2).num_components() == 2);
  CHECK(d.cable(0, 0).num_crossings() == 0);
  const KnotDiagram t = fixture("3_1");
  // Zero framing adds full twists: 4 crossings per parallel pair and unit of writhe.
  CHECK(t.cable(0, 2).num_crossings() == 12 + 2 * 3);
}

TEST_CASE("coloring rules") {
  const KnotDiagram d = fixture("4_1");
  CHECK(colored_jones(d, 1) == LaurentPoly(1));
  CHECK(colored_jones(d, 2) == jones(d));
  CHECK(quantum_integer(1) == LaurentPoly(1));
  CHECK(quantum_integer(2) == unknot_value);
  CHECK(quantum_integer(3) == LaurentPoly::parse("q+1+q^{-1}"));
  CHECK(normalized_colored_jones(d, 1) == LaurentPoly(1));
  CHECK(normalized_colored_jones(fixture("unknot"), 3) == LaurentPoly(1));
  CHECK(normalized_colored_jones(d, 2).at_minus_one() == 5);
  // Color N+1 from the cable: J_{N+1} = J(K^N) - J_{N-1} at N = 2.
  const LaurentPoly j3 = colored_jones(d, 3);
  CHECK(j3 == jones(d.cable(0, 2)) - LaurentPoly(1));
}

TEST_CASE("mixed colors on a two component link") {
  // Hopf link as the closure of s1^2.
  const KnotDiagram hopf = KnotDiagram::from_braid({2, {1, 1}});
  REQUIRE(hopf.num_components() == 2);
  CHECK(colored_jones(hopf, {2, 1}) == unknot_value);
  CHECK(colored_jones(hopf, {1, 1}) == LaurentPoly(1));
  CHECK(colored_jones(hopf, {2, 2}) == jones(hopf));
  CHECK(colored_jones(hopf, {3, 2}) == colored_jones(hopf, {2, 3}));
}

TEST_CASE("braid engine equals cabling") {
  for (const char* name : {"3_1", "4_1", "5_2"}) {
    const KnotDiagram d = fixture(name);
    REQUIRE(d.braid().has_value());
    for (int N = 1; N <= 4; ++N)
      CHECK(normalized_colored_jones_braid(*d.braid(), N) == normalized_colored_jones(d, N, {16}));
  }
}

TEST_CASE("width budget") {
  const KnotDiagram d = fixture("4_1");
  CHECK(sweep_width(d.cable(0, 2)) <= 8);
  bool thrown = false;
  try {
    normalized_colored_jones(d, 6, {8});
  } catch (const Error& e) {
    thrown = e.kind() == ErrorKind::BudgetExceeded;
  }
  CHECK(thrown);
}

TEST_CASE("alexander") {
  CHECK(alexander(fixture("unknot")) == LaurentPoly(1));
  CHECK(alexander(fixture("3_1")) == LaurentPoly::parse("q-1+q^{-1}"));
  CHECK(alexander(fixture("4_1")) == LaurentPoly::parse("-q+3-q^{-1}"));
  for (const char* name : {"5_2", "6_3"}) {
    const LaurentPoly a = alexander(fixture(name));
    CHECK(a.at_one() == 1);
    CHECK(a == a.mirrored());
  }
}

TEST_CASE("chebyshev") {
  CHECK(chebyshev_s(0) == std::vector<BigInt>{1});
  CHECK(chebyshev_s(2) == std::vector<BigInt>{-1, 0, 1});
  CHECK(chebyshev_s(3) == std::vector<BigInt>{0, -2, 0, 1});
}

TEST_CASE("invalid diagrams") {
  const auto kind_of = [](const std::string& text) {
    try {
      KnotDiagram::parse(text);
    } catch (const Error& e) {
      return std::string(e.what()).rfind("invalid diagram", 0) == 0 && e.kind() == ErrorKind::InvalidInput;
    }
    return false;
  };
  CHECK(kind_of("Xp[1,2,3,4]\n"));
  CHECK(kind_of("Xp[1,2,3]\n"));
  CHECK(kind_of("garbage\n"));
  CHECK(kind_of("Xp[1,2,3,4]\nXp[2,5,6,3]\nXp[5,1,4,7]\n"));
}

TEST_CASE("pd round trip") {
  const KnotDiagram d = fixture("5_2");
  const KnotDiagram e = KnotDiagram::parse(d.to_pd());
  CHECK(e.num_crossings() == d.num_crossings());
  CHECK(jones(e) == jones(d));
}
