// Writes the versioned example graphs into the directory given as argv[1].

#include <iostream>
#include <string>

#include "qws/builders.hpp"
#include "qws/io.hpp"

int main(int argc, char** argv) {
  using namespace qws;
  std::string dir = argc > 1 ? argv[1] : "graphs";
  auto put = [&](const std::string& name, const GraphSpec& g) {
    io::write_text(dir + "/" + name + ".json", io::graph_to_json(g));
  };
  put("bolo", builders::bolo());
  put("star_3_1", builders::star(3, 1));
  put("star_100_40", builders::star(100, 40));
  put("complete_10", builders::complete(10));
  put("valve", builders::valve(1.0));
  put("square", builders::square());
  put("tree", builders::tree());
  put("reflector", builders::reflector(1.0));
  std::cout << "wrote example graphs to " << dir << "\n";
  return 0;
}
