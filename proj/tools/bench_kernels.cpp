// Compares the serial reference convolution kernel against the OpenMP one
// and checks bit-identity of the results.
#include <chrono>
#include <cstring>
#include <iostream>
#include <string>

#include "selfsim/measure.hpp"
#include "selfsim/overlap.hpp"

using namespace selfsim;
namespace chrono = std::chrono;

static double ms_since(chrono::steady_clock::time_point t0) {
    return chrono::duration<double, std::milli>(chrono::steady_clock::now() - t0).count();
}

int main(int argc, char** argv) {
    int depth = 12;
    int reps = 3;
    std::string param = "1";
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        auto next = [&]() -> std::string {
            if (i + 1 >= argc) {
                std::cerr << "missing value for " << a << "\n";
                exit(2);
            }
            return argv[++i];
        };
        if (a == "--depth") depth = std::stoi(next());
        else if (a == "--reps") reps = std::stoi(next());
        else if (a == "--param") param = next();
        else {
            std::cerr << "usage: selfsim-bench [--depth n] [--reps r] [--param p/q]\n";
            return 2;
        }
    }

    FamilySpec f = carpet_family();
    Rational u = parse_rational(param);
    DigitSystem ds = weighted_digits(f, u);

    std::cout << "carpet digit convolution, u = " << param << ", depth = " << depth << ", reps = "
              << reps << "\n";
    double best_serial = 1e300, best_parallel = 1e300;
    size_t atoms = 0;
    for (int r = 0; r < reps; ++r) {
        auto t0 = chrono::steady_clock::now();
        LevelAtoms serial = level_atoms_serial(ds, depth);
        best_serial = std::min(best_serial, ms_since(t0));

        t0 = chrono::steady_clock::now();
        LevelAtoms parallel = level_atoms(ds, depth);
        best_parallel = std::min(best_parallel, ms_since(t0));

        if (serial.offsets != parallel.offsets || serial.masses != parallel.masses) {
            std::cerr << "FAIL: parallel kernel differs from serial reference\n";
            return 1;
        }
        atoms = serial.size();
    }
    std::cout << "atoms " << atoms << "\n";
    std::cout << "serial   " << best_serial << " ms\n";
    std::cout << "parallel " << best_parallel << " ms\n";
    std::cout << "speedup  " << best_serial / best_parallel << "x\n";

    auto t0 = chrono::steady_clock::now();
    SeparationProfile prof = separation_profile(f, u, depth);
    std::cout << "separation profile to depth " << depth << ": " << ms_since(t0) << " ms, delta_n = "
              << prof.delta.back() << "\n";
    return 0;
}
