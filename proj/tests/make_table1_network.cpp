#include "support/table1.hpp"

#include <iostream>

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_table1_network OUT.json\n";
        return 1;
    }
    const auto net = table1::network();
    bergm::io::write_text(argv[1], bergm::io::dump(bergm::io::network_to_json(net.graph, net.attributes, net.metadata)));
    return 0;
}
