#include "selfsim/family.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "selfsim/textio.hpp"

namespace selfsim {

std::string Word::render() const {
    std::ostringstream os;
    for (size_t k = 0; k < symbols.size(); ++k) {
        if (k) os << '.';
        os << symbols[k];
    }
    return os.str();
}

Word Word::parse(std::string_view text) {
    Word w;
    std::string item;
    std::istringstream is{std::string(text)};
    while (std::getline(is, item, '.')) {
        int s = std::stoi(item);
        w.symbols.push_back(s);
    }
    if (w.symbols.empty()) throw std::invalid_argument("empty word");
    return w;
}

static void check_word(const FamilySpec& f, const Word& w) {
    if (w.symbols.empty()) throw ValidationError("word must have length >= 1");
    for (int s : w.symbols)
        if (s < 1 || s > f.map_count())
            throw ValidationError("word symbol " + std::to_string(s) + " out of range 1.." +
                                  std::to_string(f.map_count()));
}

void validate_family(const FamilySpec& f) {
    if (f.map_count() < 2) throw ValidationError("family needs at least 2 maps");
    if (!(f.interval_lo < f.interval_hi)) throw ValidationError("interval lower bound must be < upper bound");
    if (static_cast<int>(f.weights.size()) != f.map_count())
        throw ValidationError("weight count must match map count");
    Rational sum(0);
    for (const auto& w : f.weights) {
        if (!(w > 0)) throw ValidationError("weights must be strictly positive");
        sum += w;
    }
    if (sum != 1) throw ValidationError("weights must sum exactly to 1, got " + sum.get_str());

    if (f.homogeneous_base) {
        int L = *f.homogeneous_base;
        if (L < 2) throw ValidationError("homogeneous base must be >= 2");
        RationalPoly expected = RationalPoly::constant(Rational(1, L));
        for (const auto& m : f.maps)
            if (!(m.ratio == expected))
                throw ValidationError("homogeneous_base set but a ratio differs from 1/L");
    }

    // Degenerate-ratio policy: endpoints plus a 64-point grid.
    const int grid = 64;
    for (int i = 0; i < f.map_count(); ++i) {
        for (int g = 0; g <= grid; ++g) {
            Rational u = f.interval_lo + (f.interval_hi - f.interval_lo) * Rational(g, grid);
            Rational r = rational_abs(f.maps[i].ratio.evaluate(u));
            if (!(r > 0 && r < 1))
                throw ValidationError("ratio of map " + std::to_string(i + 1) + " leaves (0,1) at u = " +
                                      u.get_str());
        }
    }
}

FamilyBounds family_bounds(const FamilySpec& f) {
    Rational t_max(0), r_max(0);
    for (const auto& m : f.maps) {
        t_max = std::max(t_max, m.translation.abs_bound(f.interval_lo, f.interval_hi));
        r_max = std::max(r_max, m.ratio.abs_bound(f.interval_lo, f.interval_hi));
    }
    if (f.homogeneous_base) r_max = Rational(1, *f.homogeneous_base);
    FamilyBounds b;
    b.r_max = to_double(r_max);
    b.t_max = to_double(t_max);
    if (!(r_max < 1))
        throw ValidationError("cannot bound contraction: coefficient bound of a ratio reaches 1");
    Rational xi = t_max / (Rational(1) - r_max);
    b.xi = to_double(xi);
    return b;
}

AffineMapSpec compose(const AffineMapSpec& a, const AffineMapSpec& b) {
    AffineMapSpec out;
    out.ratio = a.ratio * b.ratio;
    out.translation = a.ratio * b.translation + a.translation;
    return out;
}

AffineMapSpec compose_word(const FamilySpec& f, const Word& w) {
    check_word(f, w);
    AffineMapSpec acc = f.maps[w.symbols[0] - 1];
    for (size_t k = 1; k < w.symbols.size(); ++k) acc = compose(acc, f.maps[w.symbols[k] - 1]);
    return acc;
}

CylinderPoint cylinder_point(const FamilySpec& f, const Word& w, const Rational& u) {
    if (!f.contains(u))
        throw ValidationError("parameter " + u.get_str() + " outside the family interval");
    AffineMapSpec composed = compose_word(f, w);
    FamilyBounds b = family_bounds(f);
    CylinderPoint cp;
    cp.value = composed.translation.evaluate(u);
    cp.error_bound = b.xi * std::pow(b.r_max, static_cast<double>(w.length()));
    return cp;
}

double similarity_dimension(const FamilySpec& f, const Rational& u) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < f.map_count(); ++i) {
        double w = to_double(f.weights[i]);
        Rational r = rational_abs(f.maps[i].ratio.evaluate(u));
        if (!(r > 0 && r < 1))
            throw ValidationError("degenerate ratio |r| outside (0,1) at u = " + u.get_str());
        num += w * std::log(w);
        den += w * std::log(to_double(r));
    }
    return num / den;
}

double similarity_dimension(const FamilySpec& f, double u) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < f.map_count(); ++i) {
        double w = to_double(f.weights[i]);
        double r = std::abs(f.maps[i].ratio.evaluate(u));
        if (!(r > 0 && r < 1)) throw ValidationError("degenerate ratio |r| outside (0,1)");
        num += w * std::log(w);
        den += w * std::log(r);
    }
    return num / den;
}

double attractor_dimension(const FamilySpec& f, const Rational& u) {
    std::vector<double> r(f.map_count());
    for (int i = 0; i < f.map_count(); ++i) {
        Rational ri = rational_abs(f.maps[i].ratio.evaluate(u));
        if (!(ri > 0 && ri < 1))
            throw ValidationError("degenerate ratio |r| outside (0,1) at u = " + u.get_str());
        r[i] = to_double(ri);
    }
    auto moran = [&](double s) {
        double acc = 0.0;
        for (double ri : r) acc += std::pow(ri, s);
        return acc - 1.0;
    };
    // moran is strictly decreasing in s; bracket then bisect.
    double lo = 0.0, hi = 1.0;
    while (moran(hi) > 0.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (moran(mid) > 0.0 ? lo : hi) = mid;
        if (hi - lo < 1e-14) break;
    }
    return 0.5 * (lo + hi);
}

FamilySpec carpet_family() {
    FamilySpec f;
    for (int a = 0; a <= 2; ++a) {
        for (int b = 0; b <= 2; ++b) {
            if (a == 1 && b == 1) continue;
            AffineMapSpec m;
            m.ratio = RationalPoly::constant(Rational(1, 3));
            m.translation = RationalPoly{Rational(a), Rational(b)};
            f.maps.push_back(std::move(m));
        }
    }
    f.interval_lo = Rational(0);
    f.interval_hi = Rational(10);
    f.weights.assign(8, Rational(1, 8));
    f.homogeneous_base = 3;
    return f;
}

FamilySpec sandor_family(const Rational& epsilon) {
    if (!(epsilon > 0) || epsilon > Rational(1, 100))
        throw ValidationError("sandor: epsilon must be in (0, 1/100], got " + epsilon.get_str());
    Rational eta = Rational(4, 3) * epsilon + Rational(1, 1000);
    FamilySpec f;
    Rational third(1, 3);
    f.interval_lo = third + epsilon / 3;
    f.interval_hi = third + eta - epsilon;
    // lambda_i as polynomials in u.
    std::vector<RationalPoly> lambda = {
        RationalPoly{Rational(0), Rational(1) / (Rational(1) + epsilon)},
        RationalPoly::variable(),
        RationalPoly{epsilon, Rational(1)},
    };
    for (const auto& l : lambda) {
        AffineMapSpec m;
        m.ratio = l;          // S_i(x) = lambda_i * (x + 1)
        m.translation = l;
        f.maps.push_back(std::move(m));
    }
    f.weights.assign(3, Rational(1, 3));
    return f;
}

std::vector<std::string> preset_names() { return {"carpet", "sandor:eps=1/100"}; }

FamilySpec preset_family(const std::string& name) {
    if (name == "carpet") return carpet_family();
    if (name == "sandor") return sandor_family(Rational(1, 100));
    const std::string prefix = "sandor:eps=";
    if (name.rfind(prefix, 0) == 0) return sandor_family(parse_rational(name.substr(prefix.size())));
    throw ValidationError("unknown preset: " + name);
}

ClassReport validate_rational_class(const FamilySpec& f) {
    ClassReport rep{};
    rep.map_count = f.map_count();
    rep.map_count_ok = f.map_count() >= 4;

    rep.base = f.homogeneous_base.value_or(0);
    rep.base_ok = f.homogeneous_base && *f.homogeneous_base >= 3 && *f.homogeneous_base <= f.map_count() - 1;

    Rational mid = (f.interval_lo + f.interval_hi) / 2;
    rep.sim_dim = similarity_dimension(f, mid);
    rep.sim_dim_ok = rep.sim_dim > 1.0;

    BigInt lcm(1);
    for (const auto& w : f.weights) {
        BigInt den = w.get_den();
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
    }
    rep.weight_denominator_lcm = lcm;
    rep.lcm_ok = false;
    if (f.homogeneous_base) {
        BigInt rem = lcm % BigInt(*f.homogeneous_base);
        rep.lcm_ok = rem != 0;
    }

    int max_deg = 0;
    for (const auto& m : f.maps) max_deg = std::max(max_deg, std::max(0, m.translation.degree()));
    std::vector<std::vector<Rational>> rows;
    for (const auto& m : f.maps) {
        std::vector<Rational> row(static_cast<size_t>(max_deg) + 1, Rational(0));
        for (int k = 0; k <= max_deg; ++k) row[k] = m.translation.coefficient(k);
        rows.push_back(std::move(row));
    }
    rep.translation_rank = rational_rank(std::move(rows));
    rep.independence_ok = rep.translation_rank == f.map_count();
    return rep;
}

std::string format_family(const FamilySpec& f) {
    std::ostringstream os;
    os << "interval = " << f.interval_lo.get_str() << ", " << f.interval_hi.get_str() << "\n";
    if (f.homogeneous_base) os << "base = " << *f.homogeneous_base << "\n";
    os << "weights = ";
    for (size_t i = 0; i < f.weights.size(); ++i) {
        if (i) os << ", ";
        os << f.weights[i].get_str();
    }
    os << "\n";
    os << "maps = " << f.map_count() << "\n";
    for (int i = 0; i < f.map_count(); ++i) {
        os << "maps[" << i << "].ratio = " << f.maps[i].ratio.to_string() << "\n";
        os << "maps[" << i << "].translation = " << f.maps[i].translation.to_string() << "\n";
    }
    return os.str();
}

static Rational parse_token_rational(const std::string& tok) { return parse_rational(tok); }

FamilySpec parse_family(const std::string& text) {
    KvFile kv = KvFile::parse_text(text);
    FamilySpec f;
    const auto& interval = kv.tokens("interval");
    if (interval.size() != 2) throw ValidationError("interval needs two entries");
    f.interval_lo = parse_token_rational(interval[0]);
    f.interval_hi = parse_token_rational(interval[1]);
    int m = std::stoi(kv.single("maps").value_or("0"));
    if (m < 2) throw ValidationError("maps count missing or < 2");
    for (const auto& tok : kv.tokens("weights")) f.weights.push_back(parse_token_rational(tok));
    for (int i = 0; i < m; ++i) {
        AffineMapSpec map;
        std::string base = "maps[" + std::to_string(i) + "].";
        std::vector<Rational> rc, tc;
        for (const auto& tok : kv.tokens(base + "ratio")) rc.push_back(parse_token_rational(tok));
        for (const auto& tok : kv.tokens(base + "translation")) tc.push_back(parse_token_rational(tok));
        map.ratio = RationalPoly(std::move(rc));
        map.translation = RationalPoly(std::move(tc));
        f.maps.push_back(std::move(map));
    }
    if (kv.has("base")) f.homogeneous_base = std::stoi(*kv.single("base"));
    validate_family(f);
    return f;
}

FamilySpec load_family(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open family file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_family(ss.str());
}

FamilySpec resolve_family(const std::string& ref) {
    if (ref == "carpet" || ref == "sandor" || ref.rfind("sandor:", 0) == 0) return preset_family(ref);
    if (std::filesystem::exists(ref)) return load_family(ref);
    throw ValidationError("family reference is neither a preset nor a readable file: " + ref);
}

}  // namespace selfsim
