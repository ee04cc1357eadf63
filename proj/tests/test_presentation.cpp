#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "fibercheck/presentation.hpp"

using namespace fibercheck;

TEST_CASE("word reduction and arithmetic") {
  Word w({1, -1, 2});
  CHECK(w == Word({2}));
  Word u({1, 2});
  CHECK((u * u.inverse()).empty());
  CHECK(Word({1, 2, -2, -1}).empty());
  CHECK(Word({1, 2}).inverse() == Word({-2, -1}));
  CHECK(Word({1, 2, 3}).max_generator() == 3);
}

TEST_CASE("parse a two-generator trefoil presentation") {
  Presentation p = parse_presentation("gens: x y\nrel: x y x Y X Y\n");
  CHECK(p.generator_count == 2);
  REQUIRE(p.relator_count() == 1);
  CHECK(p.relators[0] == Word({1, 2, 1, -2, -1, -2}));
  CHECK_FALSE(p.closed);
  CHECK(p.deficiency_one());
}

TEST_CASE("parse full presentation file with metadata") {
  std::string text =
      "# a comment\n"
      "gens: a b\n"
      "rel: a b A B   # inline comment\n"
      "phi: 1 0\n"
      "closed: false\n"
      "label: fibered\n"
      "genus: 2\n"
      "norm: 3\n";
  PresentationFile pf = parse_presentation_file(text);
  CHECK(pf.presentation.generator_count == 2);
  REQUIRE(pf.phi.has_value());
  CHECK(pf.phi->images == std::vector<std::int64_t>{1, 0});
  CHECK(pf.label == "fibered");
  CHECK(pf.genus == 2);
  CHECK(pf.norm == 3);
}

TEST_CASE("parser rejects malformed input with positions") {
  CHECK_THROWS_AS(parse_presentation("rel: x\n"), ParseError);                    // no gens
  CHECK_THROWS_AS(parse_presentation("gens: x\nrel: y\n"), ParseError);           // undeclared
  CHECK_THROWS_AS(parse_presentation("gens: x X\n"), ParseError);                 // uppercase gen
  CHECK_THROWS_AS(parse_presentation("gens: x x\n"), ParseError);                 // duplicate
  CHECK_THROWS_AS(parse_presentation("gens: x\nphi: 1 2\n"), ParseError);         // phi arity
  CHECK_THROWS_AS(parse_presentation("gens: x\nbogus: 1\n"), ParseError);         // unknown key
  CHECK_THROWS_AS(parse_presentation("gens: x\nclosed: maybe\n"), ParseError);    // bad bool
  try {
    parse_presentation("gens: x\nrel: y\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("zero-relator files parse") {
  Presentation p = parse_presentation("gens: x y\n");
  CHECK(p.generator_count == 2);
  CHECK(p.relator_count() == 0);
  CHECK_FALSE(p.deficiency_one());
}

TEST_CASE("abelianization via smith form") {
  // knot group abelianizes to Z
  Presentation tre = parse_presentation("gens: x y\nrel: x y x Y X Y\n");
  Abelianization ab = abelianization(tre);
  CHECK(ab.betti == 1);
  CHECK(ab.torsion.empty());

  // Z/2
  Presentation z2 = parse_presentation("gens: x\nrel: x x\n");
  ab = abelianization(z2);
  CHECK(ab.betti == 0);
  REQUIRE(ab.torsion.size() == 1);
  CHECK(ab.torsion[0] == 2);

  // Z^2
  Presentation t2 = parse_presentation("gens: x y\nrel: x y X Y\n");
  ab = abelianization(t2);
  CHECK(ab.betti == 2);
  CHECK(ab.torsion.empty());

  // Z/2 x Z/4 from a redundant presentation
  Presentation m = parse_presentation("gens: a b\nrel: a a\nrel: b b b b\nrel: a b A B\n");
  ab = abelianization(m);
  CHECK(ab.betti == 0);
  REQUIRE(ab.torsion.size() == 2);
  CHECK(ab.torsion[0] == 2);
  CHECK(ab.torsion[1] == 4);

  // free group
  Presentation f = parse_presentation("gens: x y z\n");
  ab = abelianization(f);
  CHECK(ab.betti == 3);
  CHECK(ab.torsion.empty());
}

TEST_CASE("class validation") {
  Presentation tre = parse_presentation("gens: x y\nrel: x y x Y X Y\n");
  CohomologyClass good;
  good.images = {1, 1};
  CHECK_NOTHROW(validate_class(tre, good));

  CohomologyClass arity;
  arity.images = {1};
  CHECK_THROWS_AS(validate_class(tre, arity), PreconditionError);

  CohomologyClass not_hom;
  not_hom.images = {1, 2};  // relator maps to 1+2+1-2-1-2 = -1
  CHECK_THROWS_AS(validate_class(tre, not_hom), PreconditionError);

  CohomologyClass zero;
  zero.images = {0, 0};
  CHECK_THROWS_AS(validate_class(tre, zero), PreconditionError);
}

TEST_CASE("derive the primitive class when betti is one") {
  Presentation tre = parse_presentation("gens: x y\nrel: x y x Y X Y\n");
  CohomologyClass phi = derive_primitive_class(tre);
  CHECK(phi.images == std::vector<std::int64_t>{1, 1});

  // Wirtinger-style: all meridians equal
  Presentation w = parse_presentation("gens: x1 x2 x3\nrel: X3 x1 x3 X2\nrel: X1 x2 x1 X3\n");
  phi = derive_primitive_class(w);
  CHECK(phi.images == std::vector<std::int64_t>{1, 1, 1});

  // primitive even when relators force unequal weights: <a,b | a b a^-3>
  // abelianized: 2a - ... a + b - 3a = b - 2a = 0, so b = 2a; class (1, 2)
  Presentation skew = parse_presentation("gens: a b\nrel: a b A A A\n");
  phi = derive_primitive_class(skew);
  CHECK(phi.images == std::vector<std::int64_t>{1, 2});
  CHECK(evaluate_class(phi, skew.relators[0]) == 0);

  // free group of rank one
  Presentation z = parse_presentation("gens: x\n");
  CHECK(derive_primitive_class(z).images == std::vector<std::int64_t>{1});

  // betti 2 has no canonical class
  Presentation t2 = parse_presentation("gens: x y\nrel: x y X Y\n");
  CHECK_THROWS_AS(derive_primitive_class(t2), PreconditionError);
  CHECK_THROWS_AS(derive_primitive_class(parse_presentation("gens: x y\n")), PreconditionError);

  // betti 0 has none either
  Presentation z2 = parse_presentation("gens: x\nrel: x x\n");
  CHECK_THROWS_AS(derive_primitive_class(z2), PreconditionError);
}

TEST_CASE("presentation hash is structural") {
  Presentation a = parse_presentation("gens: x y\nrel: x y x Y X Y\n");
  Presentation b = parse_presentation("gens: u v\nrel: u v u V U V\n");  // renamed
  Presentation c = parse_presentation("gens: x y\nrel: y x y X Y X\n");  // different word
  CHECK(presentation_hash(a) == presentation_hash(b));
  CHECK(presentation_hash(a) != presentation_hash(c));
}

TEST_CASE("evaluate_class sums letter weights") {
  CohomologyClass phi;
  phi.images = {2, -1};
  CHECK(evaluate_class(phi, Word({1, 1, 2})) == 3);
  CHECK(evaluate_class(phi, Word({-1, 2, 2})) == -4);
  CHECK(evaluate_class(phi, Word()) == 0);
}
