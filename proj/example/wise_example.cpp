// The map from the rose complex <alpha, beta | alpha beta alpha beta^2> onto
// <a, b, c | a b^2 c^2 a b^2 c^2 b^2 c^2> with alpha -> a, beta -> b^2 c^2.
#include <iostream>

#include "unimm/unimm.hpp"

int main() {
  using namespace unimm;
  const Presentation py = parse_presentation("<alpha, beta | alpha beta alpha beta^2>");
  const Presentation px = parse_presentation("<a, b, c | a b^2 c^2 a b^2 c^2 b^2 c^2>");
  const ComplexMorphism f = presentation_map(py, px, {parse_word("a", px.generators), parse_word("b^2 c^2", px.generators)});

  std::cout << "immersion: " << (is_immersion(f) ? "yes" : "no") << "\n";
  std::cout << "chi(Y) = " << euler_characteristic(f.source) << "\n";

  const Classification c = classify(presentation_complex(py));
  std::cout << "Y is " << to_string(c.result) << " (" << to_string(c.final_verdict.status) << ")\n";
}
