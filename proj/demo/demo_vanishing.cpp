// Demonstrates the vanishing obstruction: the class (1, 0) on the free group
// of rank two dies at the trivial quotient, so it cannot fiber.  The same
// class on the rank-two free abelian group survives every quotient here.

#include <iostream>

#include "fibercheck/fibering.hpp"
#include "fibercheck/presentation.hpp"

int main() {
  using namespace fibercheck;

  Presentation free2 = parse_presentation("gens: x y\n");
  CohomologyClass phi;
  phi.images = {1, 0};

  FiberingOptions opts;
  opts.enumeration.max_degree = 4;
  opts.enumeration.max_order = 24;

  VanishingSearch s = search_vanishing(free2, phi, opts);
  if (s.certificate)
    std::cout << "free group: vanishing quotient of order " << s.certificate->group_order << "\n";

  Presentation torus = parse_presentation("gens: x y\nrel: x y X Y\n");
  VanishingSearch t = search_vanishing(torus, phi, opts);
  std::cout << "free abelian: examined " << t.examined << " quotients, "
            << (t.certificate ? "found a vanishing one" : "none vanish") << "\n";
  return 0;
}
