#include <vector>

#include "kcenter/cli_app.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return kcenter::cli::run(std::move(args));
}
