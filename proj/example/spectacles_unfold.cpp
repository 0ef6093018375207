// Two loops joined by an edge, with one face spelling [a1, b a2 b^-1]. Each vertex admits an
// unfolding, and either one yields a torus.
#include <iostream>

#include "unimm/unimm.hpp"

int main() {
  using namespace unimm;
  PreComplex x;
  x.skeleton.vertex_count = 2;
  x.skeleton.add_edge(0, 0);  // a1
  x.skeleton.add_edge(1, 1);  // a2
  x.skeleton.add_edge(0, 1);  // b
  x.faces = {8, {0, 1, 2, 4, 5, 5, 7, 0}, {1, 2, 3, 3, 4, 6, 6, 7}};
  x.attach = {{0, 0, 1, 1, 0, 0, 1, 1}, {0, 2, 1, 2, 0, 2, 1, 2}};
  x.validate();

  for (const UnfoldWitness& w : unfold_witnesses(x)) {
    const UnfoldResult r = unfold_step(x, w);
    std::cout << "unfold at vertex " << w.vertex << " along edge " << w.edge << ": " << r.unfolded.vertex_count()
              << " vertices, " << r.unfolded.edge_count() << " edges, chi " << euler_characteristic(r.unfolded)
              << ", " << to_string(visible_status(r.unfolded).status) << "\n";
  }
  std::cout << "classification: " << to_string(classify(x).result) << "\n";
}
