#include "km/cli.hpp"

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    km::CliEnv env;
    if (const char* s = std::getenv("KM_SEED"))
        env.km_seed = s;
    return km::run_cli(args, std::cout, std::cerr, env);
}
