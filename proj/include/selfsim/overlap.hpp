#pragma once

#include <optional>
#include <string>
#include <vector>

#include "selfsim/lattice.hpp"

namespace selfsim {

// A pair of distinct words whose composed maps coincide, either at one
// rational parameter or identically in the parameter.
struct OverlapWitness {
    enum class Kind { AtParameter, Identical };

    Word word_i;
    Word word_j;
    Kind kind = Kind::AtParameter;
    std::optional<Rational> parameter;  // set iff kind == AtParameter

    // Line format: "witness <word_i> <word_j> at <p/q>" / "... identical".
    std::string render() const;
};

// true iff compose_word(f,w1) and compose_word(f,w2) evaluate at u to the
// same (ratio, translation) pair, compared exactly.
bool exact_overlap_at(const FamilySpec& f, const Rational& u, const Word& w1, const Word& w2);

// true iff the composed ratio and translation polynomials are
// coefficient-wise identical (overlap for every parameter).
bool exact_overlap_identically(const FamilySpec& f, const Word& w1, const Word& w2);

// Level-by-level exact collision search for homogeneous families: for each
// depth n <= n_max, groups the level-n cylinder values by exact equality and
// emits the lexicographically least pair of each colliding class, skipping
// pairs that extend a shallower colliding pair by one common symbol.
std::vector<OverlapWitness> overlap_search(const FamilySpec& f, const Rational& u, int n_max,
                                           uint64_t word_budget = kDefaultOverlapWordBudget);

// Per-depth cylinder separation statistics: Delta_n = min positive gap
// between level-n values, a collision flag (some gap is exactly zero), and
// rho_n = Delta_n^(1/n). The finite sequence is empirical evidence about
// Condition H only; no verdict is attached.
struct SeparationProfile {
    std::vector<int> depths;
    std::vector<double> delta;            // min positive gap (0 when all values coincide)
    std::vector<Rational> delta_exact;    // exact gaps; filled on the rational lane only
    std::vector<bool> has_collision;      // always false on the float lane
    std::vector<double> rho;              // delta^(1/n)
    bool exact_lane = false;

    std::string render() const;  // one "depth delta rho collision" line per depth
};

// Exact lane: distinct level values with word counts via the integer
// convolution kernel; collisions are exact facts.
SeparationProfile separation_profile(const FamilySpec& f, const Rational& u, int n_max,
                                     size_t atom_budget = kDefaultAtomBudget);

// Float lane: materializes all m^n double values per depth (collision flags
// are never set from float evidence).
SeparationProfile separation_profile_float(const FamilySpec& f, double u, int n_max,
                                           uint64_t word_budget = kDefaultWordBudget);

// Rank over Q of the m x (d+1) translation coefficient matrix. passes
// (rank == m) certifies the non-degeneracy condition for equi-homogeneous
// families with L >= 3.
struct NondegeneracyResult {
    int rank = 0;
    bool passes = false;
};
NondegeneracyResult nondegeneracy_rank(const FamilySpec& f);

}  // namespace selfsim
