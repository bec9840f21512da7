#include <string>
#include <vector>

#include "squidflux/app.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return squidflux::app::run(args);
}
