#include <vector>

#include "chdbc/cli_app.hpp"

int main(int argc, char** argv) {
    return chdbc::cli_main(std::vector<std::string>(argv + 1, argv + argc));
}
