#pragma once

#include <cstdint>
#include <string>

namespace stegano {

// Everything a subcommand needs, resolved from argv and the environment.
struct RunConfig {
    std::string subcommand;
    std::string cover_path;
    std::string stego_path;
    std::string secret_path;
    std::string out_path;
    std::string sidecar_path;
    std::string password;  // resolved from --password or $STEGO_PASSWORD
    std::uint64_t seed = 0;
    bool no_ga = false;
    double fraction = 0.1;
    int population = 16;
    int max_generations = 64;
    bool raw = false;
    int width = 0;
    int height = 0;
    int jobs = 1;
    std::string per_frame_csv;
};

// Parses argv, runs one subcommand, and maps errors to exit codes:
// 0 success, 1 usage, 2 capacity, 3 integrity/wrong password, 4 I/O or
// format. Diagnostics go to standard error.
int run(int argc, const char* const* argv);

}  // namespace stegano
