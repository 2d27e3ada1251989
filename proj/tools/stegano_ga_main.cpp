#include "stegano/cli.hpp"

int main(int argc, char** argv) {
    return stegano::run(argc, argv);
}
