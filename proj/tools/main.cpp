#include "practsig/cli.hpp"

int main(int argc, char** argv)
{
    return practsig::run_cli(argc, argv);
}
