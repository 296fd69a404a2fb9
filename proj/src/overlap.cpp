#include "selfsim/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace selfsim {

std::string OverlapWitness::render() const {
    std::ostringstream os;
    os << "witness " << word_i.render() << " " << word_j.render();
    if (kind == Kind::AtParameter)
        os << " at " << (parameter ? parameter->get_str() : std::string("?"));
    else
        os << " identical";
    return os.str();
}

std::string SeparationProfile::render() const {
    std::ostringstream os;
    for (size_t k = 0; k < depths.size(); ++k) {
        os << "depth " << depths[k] << " delta ";
        if (exact_lane)
            os << delta_exact[k].get_str();
        else
            os << delta[k];
        os << " rho " << rho[k] << " collision " << (has_collision[k] ? "true" : "false") << "\n";
    }
    return os.str();
}

bool exact_overlap_at(const FamilySpec& f, const Rational& u, const Word& w1, const Word& w2) {
    if (!f.contains(u))
        throw ValidationError("parameter " + u.get_str() + " outside the family interval");
    AffineMapSpec a = compose_word(f, w1);
    AffineMapSpec b = compose_word(f, w2);
    return a.ratio.evaluate(u) == b.ratio.evaluate(u) &&
           a.translation.evaluate(u) == b.translation.evaluate(u);
}

bool exact_overlap_identically(const FamilySpec& f, const Word& w1, const Word& w2) {
    AffineMapSpec a = compose_word(f, w1);
    AffineMapSpec b = compose_word(f, w2);
    return a.ratio == b.ratio && a.translation == b.translation;
}

namespace {

Word word_from_index(uint64_t idx, int m, int depth) {
    Word w;
    w.symbols.resize(depth);
    for (int k = depth - 1; k >= 0; --k) {
        w.symbols[k] = static_cast<int>(idx % m) + 1;
        idx /= m;
    }
    return w;
}

uint64_t checked_pow(uint64_t base, int exp, uint64_t limit) {
    uint64_t v = 1;
    for (int i = 0; i < exp; ++i) {
        if (v > limit / base) return limit + 1;
        v *= base;
    }
    return v;
}

}  // namespace

std::vector<OverlapWitness> overlap_search(const FamilySpec& f, const Rational& u, int n_max,
                                           uint64_t word_budget) {
    if (n_max < 1) throw ValidationError("n_max must be >= 1");
    DigitSystem ds = counting_digits(f, u);  // also validates homogeneity and u
    const int m = f.map_count();
    word_budget = std::min(word_budget, uint64_t(1) << 31);  // 32-bit word indices below
    if (checked_pow(m, n_max, word_budget) > word_budget) {
        int feasible = 0;
        while (checked_pow(m, feasible + 1, word_budget) <= word_budget) ++feasible;
        throw BudgetError("overlap search at depth " + std::to_string(n_max) + " needs m^n = " +
                              std::to_string(m) + "^" + std::to_string(n_max) +
                              " words; feasible depth is " + std::to_string(feasible),
                          feasible);
    }

    const int64_t L = ds.base;
    std::vector<OverlapWitness> witnesses;
    std::vector<int64_t> prev;  // level n-1 values, word-indexed
    std::vector<int64_t> cur = {0};
    for (int depth = 1; depth <= n_max; ++depth) {
        prev = std::move(cur);
        cur.assign(prev.size() * m, 0);
#pragma omp parallel for schedule(static)
        for (size_t j = 0; j < cur.size(); ++j)
            cur[j] = L * prev[j / m] + ds.map_digit[j % m];

        std::vector<uint32_t> order(cur.size());
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
            return cur[a] != cur[b] ? cur[a] < cur[b] : a < b;
        });

        for (size_t i = 0; i + 1 < order.size();) {
            size_t j = i + 1;
            while (j < order.size() && cur[order[j]] == cur[order[i]]) ++j;
            if (j - i >= 2) {
                uint32_t a = order[i], b = order[i + 1];
                // Skip extensions of a shallower collision by a common symbol.
                bool extension = depth > 1 && a % m == b % m && prev[a / m] == prev[b / m];
                if (!extension) {
                    OverlapWitness w;
                    w.word_i = word_from_index(a, m, depth);
                    w.word_j = word_from_index(b, m, depth);
                    w.kind = OverlapWitness::Kind::AtParameter;
                    w.parameter = u;
                    witnesses.push_back(std::move(w));
                }
            }
            i = j;
        }
    }
    return witnesses;
}

namespace {

void push_stats(SeparationProfile& p, int depth, const Rational& delta, bool collision) {
    p.depths.push_back(depth);
    p.delta_exact.push_back(delta);
    double d = to_double(delta);
    p.delta.push_back(d);
    p.has_collision.push_back(collision);
    p.rho.push_back(d > 0 ? std::pow(d, 1.0 / depth) : 0.0);
}

}  // namespace

SeparationProfile separation_profile(const FamilySpec& f, const Rational& u, int n_max,
                                     size_t atom_budget) {
    if (n_max < 1) throw ValidationError("n_max must be >= 1");
    DigitSystem ds = counting_digits(f, u);
    SeparationProfile prof;
    prof.exact_lane = true;

    int feasible = max_feasible_depth(ds);
    LevelAtoms lvl;
    lvl.offsets = {0};
    lvl.masses = {1};
    for (int depth = 1; depth <= n_max; ++depth) {
        if (depth > feasible)
            throw BudgetError("separation depth " + std::to_string(depth) +
                                  " overflows 64-bit offsets; feasible depth is " + std::to_string(depth - 1),
                              depth - 1);
        lvl = convolve_step(lvl, ds, atom_budget);
        // Positions are offsets / (q * L^{depth-1}).
        Rational den = Rational(ds.denominator) * rational_pow(Rational(ds.base), depth - 1);
        int64_t min_gap = 0;
        for (size_t k = 0; k + 1 < lvl.offsets.size(); ++k) {
            int64_t g = lvl.offsets[k + 1] - lvl.offsets[k];
            if (min_gap == 0 || g < min_gap) min_gap = g;
        }
        bool collision = false;
        for (uint64_t c : lvl.masses)
            if (c > 1) {
                collision = true;
                break;
            }
        Rational delta = Rational(min_gap) / den;
        push_stats(prof, depth, delta, collision);
    }
    return prof;
}

SeparationProfile separation_profile_float(const FamilySpec& f, double u, int n_max,
                                           uint64_t word_budget) {
    if (n_max < 1) throw ValidationError("n_max must be >= 1");
    if (!f.is_homogeneous())
        throw ValidationError("separation profile requires a homogeneous family");
    const int m = f.map_count();
    if (checked_pow(m, n_max, word_budget) > word_budget) {
        int feasible = 0;
        while (checked_pow(m, feasible + 1, word_budget) <= word_budget) ++feasible;
        throw BudgetError("float separation at depth " + std::to_string(n_max) +
                              " exceeds the word budget; feasible depth is " + std::to_string(feasible),
                          feasible);
    }
    std::vector<double> t(m);
    for (int i = 0; i < m; ++i) t[i] = f.maps[i].translation.evaluate(u);
    const double L = static_cast<double>(*f.homogeneous_base);

    SeparationProfile prof;
    prof.exact_lane = false;
    std::vector<double> cur = {0.0};
    double scale = 1.0;  // L^{-(depth-1)}
    for (int depth = 1; depth <= n_max; ++depth) {
        std::vector<double> next(cur.size() * m);
#pragma omp parallel for schedule(static)
        for (size_t j = 0; j < next.size(); ++j) next[j] = cur[j / m] + t[j % m] * scale;
        cur = std::move(next);
        scale /= L;

        std::vector<double> sorted(cur);
        std::sort(sorted.begin(), sorted.end());
        double min_gap = 0.0;
        for (size_t k = 0; k + 1 < sorted.size(); ++k) {
            double g = sorted[k + 1] - sorted[k];
            if (g > 0 && (min_gap == 0.0 || g < min_gap)) min_gap = g;
        }
        prof.depths.push_back(depth);
        prof.delta.push_back(min_gap);
        prof.delta_exact.emplace_back(0);
        prof.has_collision.push_back(false);  // float equality is not collision evidence
        prof.rho.push_back(min_gap > 0 ? std::pow(min_gap, 1.0 / depth) : 0.0);
    }
    return prof;
}

NondegeneracyResult nondegeneracy_rank(const FamilySpec& f) {
    if (!f.is_homogeneous())
        throw ValidationError("non-degeneracy rank test requires a homogeneous family");
    if (*f.homogeneous_base < 3)
        throw ValidationError("non-degeneracy rank test needs contraction 1/L < 1/2 (L >= 3), got L = " +
                              std::to_string(*f.homogeneous_base));
    int max_deg = 0;
    for (const auto& m : f.maps) max_deg = std::max(max_deg, std::max(0, m.translation.degree()));
    std::vector<std::vector<Rational>> rows;
    for (const auto& m : f.maps) {
        std::vector<Rational> row(static_cast<size_t>(max_deg) + 1, Rational(0));
        for (int k = 0; k <= max_deg; ++k) row[k] = m.translation.coefficient(k);
        rows.push_back(std::move(row));
    }
    NondegeneracyResult r;
    r.rank = rational_rank(std::move(rows));
    r.passes = r.rank == f.map_count();
    return r;
}

}  // namespace selfsim
