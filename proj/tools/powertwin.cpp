#include "powertwin/cli.hpp"

int main(int argc, char** argv)
{
    return powertwin::cli::main(argc, argv);
}
