// Certifies a presentation given on the command line, e.g.
//   ./certify_presentation "<a,b,c | a^2 b^2 c^2>"
#include <iostream>

#include "unimm/unimm.hpp"

int main(int argc, char** argv) {
  using namespace unimm;
  const std::string text = argc > 1 ? argv[1] : "<a,b,c | a^2 b^2 c^2>";
  const PreComplex x = presentation_complex(text);
  const PieceCatalogue cat(x);
  std::cout << text << ": " << cat.size() << " vertex pieces\n";

  const Certificate c = certify(cat);
  std::cout << "status " << to_string(c.status);
  if (c.lp.status == LPStatus::Optimal) std::cout << ", value " << c.lp.value;
  if (c.epsilon) std::cout << ", epsilon " << *c.epsilon;
  std::cout << "\n";
  if (c.witness) {
    const PreComplex& y = c.witness->y();
    std::cout << "extremal Y: " << y.vertex_count() << " vertices, " << y.edge_count() << " edges, " << face_count(y)
              << " faces; tau " << c.witness_curvature << ", deg " << c.witness_degree << "\n";
  }
  std::cout << "verified " << (c.verified() ? "yes" : "no") << "\n";
}
