#pragma once

#include <cstdint>
#include <vector>

#include "selfsim/family.hpp"

namespace selfsim {

// Default memory budgets. Atom budget caps the support of one level of the
// exact convolution (16.7M atoms ~ 268 MB of pairs); word budgets cap flat
// m^n enumerations (float-lane separation per spec, overlap search).
inline constexpr size_t kDefaultAtomBudget = size_t(1) << 24;
inline constexpr uint64_t kDefaultWordBudget = uint64_t(1) << 27;
inline constexpr uint64_t kDefaultOverlapWordBudget = uint64_t(1) << 24;

// Digit form of a homogeneous family at a rational parameter u: translations
// cleared to integers, d_i = q * t_i(u) with q the lcm of the t_i(u)
// denominators. Level-n cylinder values become the integers
// sum_k d_{i_k} L^{n-k}, i.e. positions times q * L^{n-1}.
struct DigitSystem {
    int base = 0;                      // L
    int64_t denominator = 1;           // q
    std::vector<int64_t> map_digit;    // digit of map i (map order, size m)
    std::vector<int64_t> digits;       // distinct digit values, ascending
    std::vector<uint64_t> digit_mass;  // per distinct digit: summed stream mass
    uint64_t mass_step = 0;            // sum of digit_mass = mass multiplier per level

    int64_t min_digit() const { return digits.front(); }
    int64_t max_digit() const { return digits.back(); }
};

// mass of map i = numerator of w_i over D0 = lcm of weight denominators;
// mass_step = D0, so level-n masses are numerators over D0^n.
DigitSystem weighted_digits(const FamilySpec& f, const Rational& u);
// mass of every map = 1; level-n masses are word counts, mass_step = m.
DigitSystem counting_digits(const FamilySpec& f, const Rational& u);

// Deepest level whose offsets and masses still fit 64-bit integers.
int max_feasible_depth(const DigitSystem& ds);

// Sparse level-n support: sorted unique integer offsets with positive masses.
struct LevelAtoms {
    int level = 0;
    std::vector<int64_t> offsets;
    std::vector<uint64_t> masses;

    size_t size() const { return offsets.size(); }
};

// n passes of the digit convolution V' = L*V + d_i, merging equal offsets by
// exact mass addition. Serial reference implementation.
LevelAtoms level_atoms_serial(const DigitSystem& ds, int n, size_t atom_budget = kDefaultAtomBudget);

// OpenMP kernel: the input range of each pass is split into fixed-size
// chunks (independent of the thread count), per-chunk sorted runs are merged
// in order. Output is bit-identical to level_atoms_serial.
LevelAtoms level_atoms(const DigitSystem& ds, int n, size_t atom_budget = kDefaultAtomBudget);

// Extends lvl by one pass (serial). Used by profile code that records
// per-level statistics while building depth n_max once.
LevelAtoms convolve_step_serial(const LevelAtoms& lvl, const DigitSystem& ds, size_t atom_budget);
LevelAtoms convolve_step(const LevelAtoms& lvl, const DigitSystem& ds, size_t atom_budget);

}  // namespace selfsim
