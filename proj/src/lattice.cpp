#include "selfsim/lattice.hpp"

#include <algorithm>
#include <memory>
#include <limits>
#include <map>

namespace selfsim {

namespace {

int64_t to_int64_checked(const BigInt& v, const char* what) {
    if (!v.fits_slong_p())
        throw ValidationError(std::string(what) + " does not fit in 64 bits: " + v.get_str());
    return static_cast<int64_t>(v.get_si());
}

DigitSystem make_digits(const FamilySpec& f, const Rational& u, bool weighted) {
    if (!f.is_homogeneous())
        throw ValidationError("operation requires a homogeneous family (constant ratio 1/L)");
    if (!f.contains(u))
        throw ValidationError("parameter " + u.get_str() + " outside the family interval");

    DigitSystem ds;
    ds.base = *f.homogeneous_base;

    std::vector<Rational> t(f.map_count());
    BigInt q(1);
    for (int i = 0; i < f.map_count(); ++i) {
        t[i] = f.maps[i].translation.evaluate(u);
        BigInt den = t[i].get_den();
        mpz_lcm(q.get_mpz_t(), q.get_mpz_t(), den.get_mpz_t());
    }
    ds.denominator = to_int64_checked(q, "translation denominator lcm");

    BigInt d0(1);
    if (weighted) {
        for (const auto& w : f.weights) {
            BigInt den = w.get_den();
            mpz_lcm(d0.get_mpz_t(), d0.get_mpz_t(), den.get_mpz_t());
        }
    }

    std::map<int64_t, uint64_t> merged;
    ds.map_digit.resize(f.map_count());
    for (int i = 0; i < f.map_count(); ++i) {
        Rational scaled = t[i] * Rational(q);
        BigInt num = scaled.get_num();  // scaled has denominator 1 by construction
        int64_t d = to_int64_checked(num, "digit");
        ds.map_digit[i] = d;
        uint64_t mass = 1;
        if (weighted) {
            Rational wn = f.weights[i] * Rational(d0);
            if (wn.get_den() != 1 || !wn.get_num().fits_ulong_p())
                throw ValidationError("weight numerator over the common denominator does not fit 64 bits");
            mass = static_cast<uint64_t>(wn.get_num().get_ui());
        }
        merged[d] += mass;
    }
    for (const auto& [d, m] : merged) {
        ds.digits.push_back(d);
        ds.digit_mass.push_back(m);
        ds.mass_step += m;
    }
    return ds;
}

}  // namespace

// Largest depth n with both guards satisfied:
//   |offset| <= max|d| * (L^n - 1)/(L - 1) < 2^62
//   total mass = mass_step^n < 2^63
int max_feasible_depth(const DigitSystem& ds) {
    BigInt dmax(0);
    for (int64_t d : ds.digits) dmax = std::max(dmax, BigInt(std::abs(d)));
    if (dmax == 0) dmax = 1;
    const BigInt off_limit = BigInt(1) << 62;
    const BigInt mass_limit = BigInt(1) << 63;
    BigInt geo(0), mass(1);
    int n = 0;
    while (true) {
        geo = geo * ds.base + 1;  // (L^{n+1}-1)/(L-1)
        mass *= ds.mass_step;
        if (dmax * geo >= off_limit || mass >= mass_limit) return n;
        ++n;
        if (n > 4096) return n;  // mass_step == 1 and digits == {0}
    }
}

namespace {

void guard_depth(const DigitSystem& ds, int n) {
    if (n < 1) throw ValidationError("depth must be >= 1");
    int feasible = max_feasible_depth(ds);
    if (n > feasible)
        throw BudgetError("depth " + std::to_string(n) + " overflows 64-bit offsets/masses; feasible depth is " +
                              std::to_string(feasible),
                          feasible);
}

// One convolution pass over input rows [a, b): k-way merge of the
// digit-shifted streams {L*off + d_i}. Appends strictly increasing offsets.
void pass_range(const LevelAtoms& in, size_t a, size_t b, const DigitSystem& ds,
                std::vector<int64_t>& out_off, std::vector<uint64_t>& out_mass) {
    const size_t k = ds.digits.size();
    const int64_t L = ds.base;
    std::vector<size_t> idx(k, a);
    while (true) {
        int64_t best = std::numeric_limits<int64_t>::max();
        bool any = false;
        for (size_t i = 0; i < k; ++i) {
            if (idx[i] >= b) continue;
            int64_t key = L * in.offsets[idx[i]] + ds.digits[i];
            if (!any || key < best) best = key;
            any = true;
        }
        if (!any) break;
        uint64_t mass = 0;
        for (size_t i = 0; i < k; ++i) {
            if (idx[i] >= b) continue;
            if (L * in.offsets[idx[i]] + ds.digits[i] == best) {
                mass += in.masses[idx[i]] * ds.digit_mass[i];
                ++idx[i];
            }
        }
        out_off.push_back(best);
        out_mass.push_back(mass);
    }
}

// Like pass_range, but accumulates into a dense window over the chunk's
// output range. Much faster when the support is dense (the usual case for
// carpet-style digit systems); falls back to the merge when the window
// would be much larger than the output.
void pass_range_auto(const LevelAtoms& in, size_t a, size_t b, const DigitSystem& ds,
                     std::vector<int64_t>& out_off, std::vector<uint64_t>& out_mass) {
    const size_t k = ds.digits.size();
    const int64_t L = ds.base;
    const int64_t lo = L * in.offsets[a] + ds.min_digit();
    const int64_t hi = L * in.offsets[b - 1] + ds.max_digit();
    const uint64_t range = static_cast<uint64_t>(hi - lo) + 1;
    const uint64_t work = static_cast<uint64_t>(k) * (b - a);
    if (range > 8 * work + 1024) {
        pass_range(in, a, b, ds, out_off, out_mass);
        return;
    }
    std::vector<uint64_t> window(range, 0);
    for (size_t j = a; j < b; ++j) {
        const int64_t base_off = L * in.offsets[j] - lo;
        const uint64_t m = in.masses[j];
        for (size_t i = 0; i < k; ++i) window[base_off + ds.digits[i]] += m * ds.digit_mass[i];
    }
    size_t nonzero = 0;
    for (uint64_t v : window) nonzero += v != 0;
    out_off.reserve(out_off.size() + nonzero);
    out_mass.reserve(out_mass.size() + nonzero);
    for (uint64_t p = 0; p < range; ++p) {
        if (window[p] == 0) continue;
        out_off.push_back(lo + static_cast<int64_t>(p));
        out_mass.push_back(window[p]);
    }
}

// Merges run into acc. Runs arrive in ascending order of first offset and
// overlap only near their boundaries.
void merge_run(LevelAtoms& acc, std::vector<int64_t>& off, std::vector<uint64_t>& mass) {
    if (acc.offsets.empty()) {
        acc.offsets = std::move(off);
        acc.masses = std::move(mass);
        return;
    }
    if (off.empty()) return;
    if (off.front() > acc.offsets.back()) {
        acc.offsets.insert(acc.offsets.end(), off.begin(), off.end());
        acc.masses.insert(acc.masses.end(), mass.begin(), mass.end());
        return;
    }
    size_t split = static_cast<size_t>(
        std::lower_bound(acc.offsets.begin(), acc.offsets.end(), off.front()) - acc.offsets.begin());
    std::vector<int64_t> tail_off(acc.offsets.begin() + split, acc.offsets.end());
    std::vector<uint64_t> tail_mass(acc.masses.begin() + split, acc.masses.end());
    acc.offsets.resize(split);
    acc.masses.resize(split);
    size_t i = 0, j = 0;
    while (i < tail_off.size() || j < off.size()) {
        bool take_tail = j >= off.size() || (i < tail_off.size() && tail_off[i] < off[j]);
        bool equal = i < tail_off.size() && j < off.size() && tail_off[i] == off[j];
        if (equal) {
            acc.offsets.push_back(tail_off[i]);
            acc.masses.push_back(tail_mass[i] + mass[j]);
            ++i, ++j;
        } else if (take_tail) {
            acc.offsets.push_back(tail_off[i]);
            acc.masses.push_back(tail_mass[i]);
            ++i;
        } else {
            acc.offsets.push_back(off[j]);
            acc.masses.push_back(mass[j]);
            ++j;
        }
    }
}

void check_atom_budget(size_t size, int level, size_t atom_budget) {
    if (size > atom_budget)
        throw BudgetError("support at depth " + std::to_string(level) + " (" + std::to_string(size) +
                              " atoms) exceeds the atom budget " + std::to_string(atom_budget) +
                              "; feasible depth is " + std::to_string(level - 1),
                          level - 1);
}

}  // namespace

DigitSystem weighted_digits(const FamilySpec& f, const Rational& u) { return make_digits(f, u, true); }
DigitSystem counting_digits(const FamilySpec& f, const Rational& u) { return make_digits(f, u, false); }

LevelAtoms convolve_step_serial(const LevelAtoms& lvl, const DigitSystem& ds, size_t atom_budget) {
    LevelAtoms next;
    next.level = lvl.level + 1;
    pass_range(lvl, 0, lvl.size(), ds, next.offsets, next.masses);
    check_atom_budget(next.size(), next.level, atom_budget);
    return next;
}

// Whole-level dense pass: one shared accumulation window over the output
// range. Each chunk writes only inside its own window region (bounded by the
// next chunk's first reachable position); the few positions past the region
// end go to a per-chunk spill buffer applied afterwards, so there are no
// write races and the result does not depend on the thread count.
static LevelAtoms convolve_step_dense(const LevelAtoms& lvl, const DigitSystem& ds, int64_t lo,
                                      uint64_t range, size_t atom_budget) {
    const int64_t L = ds.base;
    const size_t k = ds.digits.size();
    const size_t s = lvl.size();
    const size_t chunk = size_t(1) << 15;
    const size_t nchunks = (s + chunk - 1) / chunk;
    const int64_t span = ds.max_digit() - ds.min_digit();

    std::unique_ptr<uint64_t[]> window(new uint64_t[range]);
    const size_t seg_sz = size_t(1) << 20;
    const size_t nseg = (range + seg_sz - 1) / seg_sz;
#pragma omp parallel for schedule(static)
    for (size_t seg = 0; seg < nseg; ++seg) {
        size_t a = seg * seg_sz;
        size_t b = std::min<size_t>(range, a + seg_sz);
        std::fill(window.get() + a, window.get() + b, uint64_t(0));
    }

    std::vector<int64_t> region(nchunks + 1);
    for (size_t c = 0; c < nchunks; ++c) region[c] = L * lvl.offsets[c * chunk] + ds.min_digit();
    region[nchunks] = lo + static_cast<int64_t>(range);  // sentinel past the last position

    std::vector<std::vector<uint64_t>> spill(nchunks);
#pragma omp parallel for schedule(dynamic)
    for (size_t c = 0; c < nchunks; ++c) {
        size_t a = c * chunk;
        size_t b = std::min(s, a + chunk);
        const int64_t limit = region[c + 1];
        auto& sp = spill[c];
        sp.assign(static_cast<size_t>(span), 0);
        for (size_t j = a; j < b; ++j) {
            const int64_t base = L * lvl.offsets[j];
            const uint64_t m = lvl.masses[j];
            for (size_t i = 0; i < k; ++i) {
                const int64_t p = base + ds.digits[i];
                const uint64_t v = m * ds.digit_mass[i];
                if (p < limit)
                    window[p - lo] += v;
                else
                    sp[p - limit] += v;
            }
        }
    }
    for (size_t c = 0; c < nchunks; ++c)
        for (size_t t = 0; t < spill[c].size(); ++t)
            if (spill[c][t]) window[region[c + 1] + static_cast<int64_t>(t) - lo] += spill[c][t];

    std::vector<size_t> seg_count(nseg + 1, 0);
#pragma omp parallel for schedule(static)
    for (size_t seg = 0; seg < nseg; ++seg) {
        size_t a = seg * seg_sz;
        size_t b = std::min<size_t>(range, a + seg_sz);
        size_t nz = 0;
        for (size_t p = a; p < b; ++p) nz += window[p] != 0;
        seg_count[seg + 1] = nz;
    }
    for (size_t seg = 0; seg < nseg; ++seg) seg_count[seg + 1] += seg_count[seg];
    const size_t total = seg_count[nseg];
    check_atom_budget(total, lvl.level + 1, atom_budget);

    LevelAtoms next;
    next.level = lvl.level + 1;
    next.offsets.resize(total);
    next.masses.resize(total);
#pragma omp parallel for schedule(static)
    for (size_t seg = 0; seg < nseg; ++seg) {
        size_t a = seg * seg_sz;
        size_t b = std::min<size_t>(range, a + seg_sz);
        size_t w = seg_count[seg];
        for (size_t p = a; p < b; ++p) {
            if (window[p] == 0) continue;
            next.offsets[w] = lo + static_cast<int64_t>(p);
            next.masses[w] = window[p];
            ++w;
        }
    }
    return next;
}

// Sparse fallback: per-chunk runs (dense window or k-way merge, whichever is
// cheaper locally), merged in chunk order.
static LevelAtoms convolve_step_sparse(const LevelAtoms& lvl, const DigitSystem& ds,
                                       size_t atom_budget) {
    const size_t chunk = size_t(1) << 15;
    const size_t s = lvl.size();
    const size_t nchunks = (s + chunk - 1) / chunk;
    std::vector<std::vector<int64_t>> run_off(nchunks);
    std::vector<std::vector<uint64_t>> run_mass(nchunks);
#pragma omp parallel for schedule(dynamic)
    for (size_t c = 0; c < nchunks; ++c) {
        size_t a = c * chunk;
        size_t b = std::min(s, a + chunk);
        pass_range_auto(lvl, a, b, ds, run_off[c], run_mass[c]);
    }
    LevelAtoms next;
    next.level = lvl.level + 1;
    size_t total = 0;
    for (const auto& r : run_off) total += r.size();
    next.offsets.reserve(total);
    next.masses.reserve(total);
    for (size_t c = 0; c < nchunks; ++c) merge_run(next, run_off[c], run_mass[c]);
    check_atom_budget(next.size(), next.level, atom_budget);
    return next;
}

LevelAtoms convolve_step(const LevelAtoms& lvl, const DigitSystem& ds, size_t atom_budget) {
    const size_t s = lvl.size();
    if (s <= (size_t(1) << 14)) {
        LevelAtoms next;
        next.level = lvl.level + 1;
        pass_range_auto(lvl, 0, s, ds, next.offsets, next.masses);
        check_atom_budget(next.size(), next.level, atom_budget);
        return next;
    }
    const int64_t L = ds.base;
    const int64_t lo = L * lvl.offsets.front() + ds.min_digit();
    const int64_t hi = L * lvl.offsets.back() + ds.max_digit();
    const uint64_t range = static_cast<uint64_t>(hi - lo) + 1;
    if (range <= std::min<uint64_t>(8 * s, uint64_t(1) << 26))
        return convolve_step_dense(lvl, ds, lo, range, atom_budget);
    return convolve_step_sparse(lvl, ds, atom_budget);
}

static LevelAtoms run_passes(const DigitSystem& ds, int n, size_t atom_budget, bool parallel) {
    guard_depth(ds, n);
    LevelAtoms cur;
    cur.offsets = {0};
    cur.masses = {1};
    for (int p = 0; p < n; ++p)
        cur = parallel ? convolve_step(cur, ds, atom_budget) : convolve_step_serial(cur, ds, atom_budget);
    return cur;
}

LevelAtoms level_atoms_serial(const DigitSystem& ds, int n, size_t atom_budget) {
    return run_passes(ds, n, atom_budget, false);
}

LevelAtoms level_atoms(const DigitSystem& ds, int n, size_t atom_budget) {
    return run_passes(ds, n, atom_budget, true);
}

}  // namespace selfsim
