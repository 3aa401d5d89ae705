// Builds a small immersed surface, reports how much of it sits inside a
// tube around the zero-covariance diagonal, and writes the OBJ next to the
// binary.

#include <fstream>
#include <iostream>

#include "freundgeo/freundgeo.hpp"

int main() {
    using namespace freundgeo;
    const auto mesh = build_mesh({0.2, 3.0}, {0.2, 3.0}, 32, 0.3);
    int inside = 0;
    for (bool f : mesh.in_tube) inside += f ? 1 : 0;
    std::cout << inside << " of " << mesh.vertices.size()
              << " vertices lie within 0.3 of the independence curve\n";

    std::ofstream obj("independence_tube.obj", std::ios::binary);
    export_obj(mesh, obj);
    std::cout << "wrote independence_tube.obj\n";

    const auto q = immerse({1.0, 1.8});
    const auto d = distance_to_independence(q);
    std::cout << "distance from (1.0, 1.8) to the curve: " << d.distance << " (foot at t="
              << d.foot.u << ")\n";
    return 0;
}
