#include "ploc/cli.hpp"

int main(int argc, char** argv)
{
    return ploc::cli::main_entry(argc, argv);
}
