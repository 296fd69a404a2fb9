#include "selfsim/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <ostream>
#include <unordered_map>

#include "selfsim/mwc64.hpp"

namespace selfsim {

Rational LatticeMeasure::total_mass() const {
    BigInt sum(0);
    for (uint64_t m : mass_num) sum += BigInt(m);
    return Rational(sum) / Rational(mass_denominator());
}

double BinnedMeasure::total_mass() const {
    double s = 0.0;
    for (double m : masses) s += m;
    return s;
}

namespace {

int64_t pow_i64(int64_t base, int exp) {
    int64_t v = 1;
    for (int i = 0; i < exp; ++i) v *= base;
    return v;
}

LatticeMeasure wrap_atoms(const FamilySpec& f, const DigitSystem& ds, LevelAtoms&& atoms) {
    LatticeMeasure meas;
    meas.level = atoms.level;
    meas.base = ds.base;
    meas.lattice_denominator = ds.denominator * pow_i64(ds.base, atoms.level - 1);
    meas.mass_step = ds.mass_step;
    meas.offsets = std::move(atoms.offsets);
    meas.mass_num = std::move(atoms.masses);
    (void)f;
    return meas;
}

}  // namespace

LatticeMeasure exact_level_measure(const FamilySpec& f, const Rational& u, int n, size_t atom_budget) {
    DigitSystem ds = weighted_digits(f, u);
    return wrap_atoms(f, ds, level_atoms(ds, n, atom_budget));
}

LatticeMeasure exact_level_measure_serial(const FamilySpec& f, const Rational& u, int n,
                                          size_t atom_budget) {
    DigitSystem ds = weighted_digits(f, u);
    return wrap_atoms(f, ds, level_atoms_serial(ds, n, atom_budget));
}

LatticeMeasure brute_force_measure(const FamilySpec& f, const Rational& u, int n) {
    if (!f.is_homogeneous())
        throw ValidationError("brute_force_measure requires a homogeneous family");
    if (!f.contains(u)) throw ValidationError("parameter outside the family interval");
    const int m = f.map_count();
    double words = std::pow(static_cast<double>(m), n);
    if (n < 1 || words > 1e6)
        throw BudgetError("brute force limited to m^n <= 1e6", static_cast<int>(std::log(1e6) / std::log(m)));

    std::vector<Rational> t(m), w(f.weights);
    for (int i = 0; i < m; ++i) t[i] = f.maps[i].translation.evaluate(u);
    const Rational r(1, *f.homogeneous_base);

    // Enumerate all words, collecting exact cylinder values and weights.
    std::map<Rational, Rational> groups;
    std::vector<int> word(n, 0);
    while (true) {
        Rational value(0);
        Rational weight(1);
        Rational scale(1);
        for (int k = 0; k < n; ++k) {
            value += t[word[k]] * scale;
            weight *= w[word[k]];
            scale *= r;
        }
        groups[value] += weight;

        int pos = n - 1;
        while (pos >= 0 && word[pos] == m - 1) word[pos--] = 0;
        if (pos < 0) break;
        ++word[pos];
    }

    // Convert to the canonical lattice representation.
    BigInt q(1);
    for (int i = 0; i < m; ++i) {
        BigInt den = t[i].get_den();
        mpz_lcm(q.get_mpz_t(), q.get_mpz_t(), den.get_mpz_t());
    }
    BigInt d0(1);
    for (const auto& wi : f.weights) {
        BigInt den = wi.get_den();
        mpz_lcm(d0.get_mpz_t(), d0.get_mpz_t(), den.get_mpz_t());
    }
    LatticeMeasure meas;
    meas.level = n;
    meas.base = *f.homogeneous_base;
    meas.mass_step = d0.get_ui();
    BigInt lat_den = q * bigint_pow(BigInt(meas.base), n - 1);
    if (!lat_den.fits_slong_p()) throw ValidationError("lattice denominator too large");
    meas.lattice_denominator = lat_den.get_si();
    BigInt mass_den = bigint_pow(d0, n);
    for (const auto& [value, mass] : groups) {
        Rational off = value * Rational(lat_den);
        if (off.get_den() != 1) throw ValidationError("cylinder value off the expected lattice");
        meas.offsets.push_back(off.get_num().get_si());
        Rational num = mass * Rational(mass_den);
        if (num.get_den() != 1 || !num.get_num().fits_ulong_p())
            throw ValidationError("mass numerator does not fit 64 bits");
        meas.mass_num.push_back(num.get_num().get_ui());
    }
    return meas;
}

BinnedMeasure monte_carlo_binned(const FamilySpec& f, double u, int n, uint64_t samples,
                                 uint64_t seed) {
    if (!f.is_homogeneous())
        throw ValidationError("monte_carlo_binned requires a homogeneous family");
    if (n < 1) throw ValidationError("depth must be >= 1");
    if (samples == 0) throw ValidationError("need at least one sample");
    const int m = f.map_count();
    std::vector<double> t(m);
    for (int i = 0; i < m; ++i) t[i] = f.maps[i].translation.evaluate(u);
    // Cumulative weights scaled to 2^64 for integer inversion sampling.
    std::vector<uint64_t> cum(m);
    long double acc = 0.0L;
    for (int i = 0; i < m; ++i) {
        acc += static_cast<long double>(to_double(f.weights[i]));
        long double scaled = acc * 18446744073709551615.0L;
        cum[i] = i + 1 == m ? UINT64_MAX : static_cast<uint64_t>(scaled);
    }
    const double L = static_cast<double>(*f.homogeneous_base);

    BinnedMeasure out;
    out.bin_width = std::pow(L, -n);
    out.origin = 0.0;
    out.samples = samples;

    Mwc64 rng(seed);
    std::unordered_map<int64_t, uint64_t> counts;
    counts.reserve(static_cast<size_t>(std::min<uint64_t>(samples, 1u << 22)));
    for (uint64_t s = 0; s < samples; ++s) {
        double value = 0.0, scale = 1.0;
        for (int k = 0; k < n; ++k) {
            uint64_t r = rng.next();
            int digit = static_cast<int>(std::lower_bound(cum.begin(), cum.end(), r) - cum.begin());
            value += t[digit] * scale;
            scale /= L;
        }
        int64_t bin = static_cast<int64_t>(std::floor((value - out.origin) / out.bin_width));
        ++counts[bin];
    }
    out.bins.reserve(counts.size());
    for (const auto& [bin, c] : counts) out.bins.push_back(bin);
    std::sort(out.bins.begin(), out.bins.end());
    out.masses.reserve(out.bins.size());
    for (int64_t bin : out.bins)
        out.masses.push_back(static_cast<double>(counts[bin]) / static_cast<double>(samples));
    return out;
}

BinnedMeasure binned_from_lattice(const LatticeMeasure& meas) {
    BinnedMeasure out;
    out.bin_width = std::pow(static_cast<double>(meas.base), -meas.level);
    out.origin = 0.0;
    out.samples = 0;
    // position / width = offset * L / q exactly, with q = lattice_denominator / L^{level-1}.
    int64_t q = meas.lattice_denominator / pow_i64(meas.base, meas.level - 1);
    const double inv_den = 1.0 / static_cast<double>(bigint_pow(BigInt(meas.mass_step), meas.level).get_d());
    std::map<int64_t, double> acc;
    for (size_t k = 0; k < meas.size(); ++k) {
        __int128 scaled = static_cast<__int128>(meas.offsets[k]) * meas.base;
        __int128 bin = scaled >= 0 ? scaled / q : -((-scaled + q - 1) / q);  // floor division
        acc[static_cast<int64_t>(bin)] += static_cast<double>(meas.mass_num[k]) * inv_den;
    }
    for (const auto& [bin, mass] : acc) {
        out.bins.push_back(bin);
        out.masses.push_back(mass);
    }
    return out;
}

DimensionEntry entropy_dimension(const LatticeMeasure& meas, int L, int n) {
    if (meas.size() == 0) throw ValidationError("entropy of an empty measure");
    // H = n log D0 - (sum mass_num * log mass_num) / D0^n, exact masses.
    long double sum = 0.0L;
    for (uint64_t m : meas.mass_num)
        if (m > 1) sum += static_cast<long double>(m) * std::log(static_cast<long double>(m));
    long double den = powl(static_cast<long double>(meas.mass_step), n);
    long double H = n * logl(static_cast<long double>(meas.mass_step)) - sum / den;
    DimensionEntry e;
    e.depth = n;
    e.entropy_nats = static_cast<double>(H);
    e.ratio = static_cast<double>(H / (n * logl(static_cast<long double>(L))));
    return e;
}

DimensionEntry entropy_dimension(const BinnedMeasure& meas, int L, int n) {
    if (meas.size() == 0) throw ValidationError("entropy of an empty measure");
    long double H = 0.0L;
    for (double p : meas.masses)
        if (p > 0) H -= static_cast<long double>(p) * logl(static_cast<long double>(p));
    if (meas.samples > 0)  // Miller-Madow bias correction
        H += static_cast<long double>(meas.size() - 1) / (2.0L * static_cast<long double>(meas.samples));
    DimensionEntry e;
    e.depth = n;
    e.entropy_nats = static_cast<double>(H);
    e.ratio = static_cast<double>(H / (n * logl(static_cast<long double>(L))));
    return e;
}

DimensionProfile dimension_profile(const FamilySpec& f, const Rational& u,
                                   const std::vector<int>& depths, size_t atom_budget) {
    DimensionProfile prof;
    prof.similarity_dim = similarity_dimension(f, u);
    const int L = f.homogeneous_base.value_or(0);
    for (int n : depths) {
        LatticeMeasure meas = exact_level_measure(f, u, n, atom_budget);
        DimensionEntry e = entropy_dimension(meas, L, n);
        prof.estimate.depths.push_back(e.depth);
        prof.estimate.entropy_nats.push_back(e.entropy_nats);
        prof.estimate.ratio.push_back(e.ratio);
    }
    return prof;
}

PiecewiseLinear::PiecewiseLinear(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size() || xs_.size() < 2)
        throw ValidationError("piecewise-linear function needs >= 2 breakpoints");
    for (size_t k = 0; k + 1 < xs_.size(); ++k)
        if (!(xs_[k] < xs_[k + 1])) throw ValidationError("breakpoints must be strictly increasing");
}

PiecewiseLinear PiecewiseLinear::hat(double center, double halfwidth, double peak) {
    return PiecewiseLinear({center - halfwidth, center, center + halfwidth}, {0.0, peak, 0.0});
}

double PiecewiseLinear::operator()(double x) const {
    if (x <= xs_.front()) return ys_.front();
    if (x >= xs_.back()) return ys_.back();
    size_t hi = static_cast<size_t>(std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin());
    size_t lo = hi - 1;
    double s = (x - xs_[lo]) / (xs_[hi] - xs_[lo]);
    return ys_[lo] + s * (ys_[hi] - ys_[lo]);
}

double PiecewiseLinear::slope_bound() const {
    double K = 0.0;
    for (size_t k = 0; k + 1 < xs_.size(); ++k)
        K = std::max(K, std::abs(ys_[k + 1] - ys_[k]) / (xs_[k + 1] - xs_[k]));
    return K;
}

double integrate_test_function(const LatticeMeasure& meas, const PiecewiseLinear& fn) {
    const double inv_mass_den = 1.0 / bigint_pow(BigInt(meas.mass_step), meas.level).get_d();
    long double acc = 0.0L;
    for (size_t k = 0; k < meas.size(); ++k)
        acc += static_cast<long double>(fn(meas.position_d(k))) *
               (static_cast<double>(meas.mass_num[k]) * inv_mass_den);
    return static_cast<double>(acc);
}

double integrate_test_function(const BinnedMeasure& meas, const PiecewiseLinear& fn) {
    long double acc = 0.0L;
    for (size_t k = 0; k < meas.size(); ++k)
        acc += static_cast<long double>(fn(meas.center(k))) * meas.masses[k];
    return static_cast<double>(acc);
}

void write_lattice_csv(const LatticeMeasure& meas, std::ostream& os) {
    os << "offset,numerator,denominator\n";
    const std::string den = meas.mass_denominator().get_str();
    for (size_t k = 0; k < meas.size(); ++k)
        os << meas.offsets[k] << "," << meas.mass_num[k] << "," << den << "\n";
}

void write_binned_csv(const BinnedMeasure& meas, std::ostream& os) {
    os << "position,mass\n";
    for (size_t k = 0; k < meas.size(); ++k) os << meas.center(k) << "," << meas.masses[k] << "\n";
}

namespace {

template <typename T>
void put_le(std::ofstream& os, T v) {
    unsigned char buf[sizeof(T)];
    for (size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>((static_cast<uint64_t>(v) >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get_le(std::ifstream& is) {
    unsigned char buf[sizeof(T)];
    is.read(reinterpret_cast<char*>(buf), sizeof(T));
    uint64_t v = 0;
    for (size_t i = 0; i < sizeof(T); ++i) v |= static_cast<uint64_t>(buf[i]) << (8 * i);
    return static_cast<T>(v);
}

}  // namespace

void write_lattice_dump(const LatticeMeasure& meas, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ValidationError("cannot open " + path + " for writing");
    os.write("SSLM", 4);
    put_le<uint32_t>(os, 1);
    put_le<uint32_t>(os, static_cast<uint32_t>(meas.level));
    put_le<uint32_t>(os, static_cast<uint32_t>(meas.base));
    put_le<uint64_t>(os, static_cast<uint64_t>(meas.lattice_denominator));
    put_le<uint64_t>(os, meas.mass_step);
    put_le<uint64_t>(os, meas.size());
    for (size_t k = 0; k < meas.size(); ++k) {
        put_le<int64_t>(os, meas.offsets[k]);
        put_le<uint64_t>(os, meas.mass_num[k]);
    }
}

LatticeMeasure read_lattice_dump(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ValidationError("cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "SSLM", 4) != 0) throw ValidationError("bad dump magic in " + path);
    uint32_t version = get_le<uint32_t>(is);
    if (version != 1) throw ValidationError("unsupported dump version");
    LatticeMeasure meas;
    meas.level = static_cast<int>(get_le<uint32_t>(is));
    meas.base = static_cast<int>(get_le<uint32_t>(is));
    meas.lattice_denominator = static_cast<int64_t>(get_le<uint64_t>(is));
    meas.mass_step = get_le<uint64_t>(is);
    uint64_t count = get_le<uint64_t>(is);
    meas.offsets.resize(count);
    meas.mass_num.resize(count);
    for (uint64_t k = 0; k < count; ++k) {
        meas.offsets[k] = get_le<int64_t>(is);
        meas.mass_num[k] = get_le<uint64_t>(is);
    }
    if (!is) throw ValidationError("truncated dump " + path);
    return meas;
}

}  // namespace selfsim
