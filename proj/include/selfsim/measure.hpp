#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "selfsim/lattice.hpp"

namespace selfsim {

// Exact level-n discretization of the push-forward measure: atoms sit at
// offset / lattice_denominator with masses mass_num / mass_step^level.
struct LatticeMeasure {
    int level = 0;
    int base = 0;
    int64_t lattice_denominator = 1;   // q * L^{level-1}
    uint64_t mass_step = 1;            // D0: lcm of the weight denominators
    std::vector<int64_t> offsets;      // sorted, unique
    std::vector<uint64_t> mass_num;    // numerators over D0^level

    size_t size() const { return offsets.size(); }
    BigInt mass_denominator() const { return bigint_pow(BigInt(mass_step), level); }
    Rational mass(size_t k) const { return Rational(BigInt(mass_num[k])) / Rational(mass_denominator()); }
    Rational position(size_t k) const { return Rational(offsets[k]) / Rational(lattice_denominator); }
    double position_d(size_t k) const {
        return static_cast<double>(offsets[k]) / static_cast<double>(lattice_denominator);
    }
    // Exact rational total (1 iff normalized).
    Rational total_mass() const;
};

// Float-mode discretization: bin b covers [origin + b*w, origin + (b+1)*w).
struct BinnedMeasure {
    double bin_width = 0.0;
    double origin = 0.0;
    std::vector<int64_t> bins;    // sorted, unique
    std::vector<double> masses;
    uint64_t samples = 0;         // >0 for Monte-Carlo output

    size_t size() const { return bins.size(); }
    double center(size_t k) const { return origin + (static_cast<double>(bins[k]) + 0.5) * bin_width; }
    double total_mass() const;
};

// Distribution of sum_{k=1}^n t_{i_k}(u) L^{-(k-1)} under the weight
// measure, built by n sparse convolution passes (OpenMP kernel; result is
// bit-identical to the serial reference).
LatticeMeasure exact_level_measure(const FamilySpec& f, const Rational& u, int n,
                                   size_t atom_budget = kDefaultAtomBudget);
// Serial reference implementation, kept for kernel-equality tests.
LatticeMeasure exact_level_measure_serial(const FamilySpec& f, const Rational& u, int n,
                                          size_t atom_budget = kDefaultAtomBudget);

// Independent oracle: enumerates all m^n words, evaluates cylinder points
// with full rational arithmetic, groups equal values. Requires m^n <= 1e6.
LatticeMeasure brute_force_measure(const FamilySpec& f, const Rational& u, int n);

// Monte-Carlo estimator for (typically irrational) parameters: `samples`
// i.i.d. length-n words, double-precision cylinder points, bins of width
// L^-n at origin 0. Deterministic for fixed seed (Mwc64).
BinnedMeasure monte_carlo_binned(const FamilySpec& f, double u, int n, uint64_t samples,
                                 uint64_t seed);

// Exact measure re-binned at width L^-level (exact integer bin indices);
// comparison partner for the Monte-Carlo estimator.
BinnedMeasure binned_from_lattice(const LatticeMeasure& meas);

struct DimensionEntry {
    int depth = 0;
    double entropy_nats = 0.0;
    double ratio = 0.0;  // H_n / (n log L)
};

DimensionEntry entropy_dimension(const LatticeMeasure& meas, int L, int n);
// Applies the Miller-Madow correction (#nonempty bins - 1)/(2 samples) when
// the input is Monte-Carlo.
DimensionEntry entropy_dimension(const BinnedMeasure& meas, int L, int n);

struct DimensionEstimate {
    std::vector<int> depths;
    std::vector<double> entropy_nats;
    std::vector<double> ratio;
};

struct DimensionProfile {
    DimensionEstimate estimate;
    double similarity_dim = 0.0;  // reference line
};

DimensionProfile dimension_profile(const FamilySpec& f, const Rational& u,
                                   const std::vector<int>& depths,
                                   size_t atom_budget = kDefaultAtomBudget);

// Continuous piecewise-linear test function; constant beyond the outermost
// breakpoints.
class PiecewiseLinear {
public:
    PiecewiseLinear(std::vector<double> xs, std::vector<double> ys);
    static PiecewiseLinear hat(double center, double halfwidth, double peak);

    double operator()(double x) const;
    double slope_bound() const;

private:
    std::vector<double> xs_, ys_;
};

// sum over atoms of mass * fn(position): the integral Phi_f at this level.
double integrate_test_function(const LatticeMeasure& meas, const PiecewiseLinear& fn);
double integrate_test_function(const BinnedMeasure& meas, const PiecewiseLinear& fn);

// Export / import -------------------------------------------------------

// CSV columns: offset,numerator,denominator (exact) / position,mass (binned).
void write_lattice_csv(const LatticeMeasure& meas, std::ostream& os);
void write_binned_csv(const BinnedMeasure& meas, std::ostream& os);

// Little-endian binary dump: magic "SSLM", u32 version, u32 level, u32 base,
// u64 lattice_denominator, u64 mass_step, u64 atom count, then per atom
// i64 offset and u64 mass numerator.
void write_lattice_dump(const LatticeMeasure& meas, const std::string& path);
LatticeMeasure read_lattice_dump(const std::string& path);

}  // namespace selfsim
