#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "selfsim/polynomial.hpp"

namespace selfsim {

// Thrown when a family spec violates its structural invariants or an
// operation's precondition does not hold.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a requested depth exceeds the memory/enumeration budget.
// feasible_depth is the deepest level that fits.
struct BudgetError : std::runtime_error {
    BudgetError(const std::string& msg, int feasible) : std::runtime_error(msg), feasible_depth(feasible) {}
    int feasible_depth;
};

// One map of the family: x |-> ratio(u) * x + translation(u).
struct AffineMapSpec {
    RationalPoly ratio;
    RationalPoly translation;

    bool operator==(const AffineMapSpec& o) const = default;
};

// Finite symbol sequence over {1..m}; addresses cylinders.
struct Word {
    std::vector<int> symbols;

    Word() = default;
    Word(std::initializer_list<int> s) : symbols(s) {}
    explicit Word(std::vector<int> s) : symbols(std::move(s)) {}

    size_t length() const { return symbols.size(); }
    bool operator==(const Word& o) const = default;
    auto operator<=>(const Word& o) const = default;

    // Dot-separated 1-based symbols, e.g. "3.1.7".
    std::string render() const;
    static Word parse(std::string_view text);
};

// One-parameter family of affine contractions on the line.
struct FamilySpec {
    std::vector<AffineMapSpec> maps;
    Rational interval_lo;
    Rational interval_hi;
    std::vector<Rational> weights;
    // Present iff every ratio is the constant polynomial 1/L.
    std::optional<int> homogeneous_base;

    int map_count() const { return static_cast<int>(maps.size()); }
    bool is_homogeneous() const { return homogeneous_base.has_value(); }
    bool contains(const Rational& u) const { return interval_lo <= u && u <= interval_hi; }
    bool operator==(const FamilySpec& o) const = default;
};

// Structural validation: weight positivity and exact sum 1, interval order,
// base consistency, and |ratio(u)| in (0,1) sampled at the interval
// endpoints plus a 64-point grid. Throws ValidationError.
void validate_family(const FamilySpec& f);

// Support and contraction bounds derived from P2/P3 over the interval
// closure. t_max and r_max are rigorous upper bounds (coefficient bounds);
// xi = t_max / (1 - r_max) so that spt(nu_u) is contained in (-xi, xi).
struct FamilyBounds {
    double r_max;
    double t_max;
    double xi;
};
FamilyBounds family_bounds(const FamilySpec& f);

// Spec of a composed with b (exact polynomial arithmetic).
AffineMapSpec compose(const AffineMapSpec& a, const AffineMapSpec& b);

// phi_{w1} o phi_{w2} o ... o phi_{wn}, a left-to-right fold of compose.
AffineMapSpec compose_word(const FamilySpec& f, const Word& w);

struct CylinderPoint {
    Rational value;        // phi_w(0), exact
    double error_bound;    // xi * r_max^{|w|} bounds the distance to Pi_u(w tail)
};
CylinderPoint cylinder_point(const FamilySpec& f, const Word& w, const Rational& u);

// (sum w_i log w_i) / (sum w_i log |r_i(u)|), natural logs.
double similarity_dimension(const FamilySpec& f, const Rational& u);
// Float-lane variant for irrational parameters.
double similarity_dimension(const FamilySpec& f, double u);

// Root s of sum |r_i(u)|^s = 1 by bisection; the attractor-side
// cross-check of similarity_dimension (they coincide for uniform weights
// on a homogeneous family).
double attractor_dimension(const FamilySpec& f, const Rational& u);

// Presets -------------------------------------------------------------

// Angle-alpha projections of the Sierpinski carpet in slope form u = tan(alpha):
// 8 maps, ratio 1/3, translations a + b*u over the lattice digits
// (a,b) in {0,1,2}^2 minus (1,1), lexicographic order, uniform weights,
// interval [0, 10].
FamilySpec carpet_family();

// Three-map family S_i(x) = lambda_i(u) * (x + 1) with
// (lambda_1, lambda_2, lambda_3) = (u/(1+eps), u, u+eps) on
// U = [1/3 + eps/3, 1/3 + eta - eps], eta = 4*eps/3 + 1/1000.
// Accepts 0 < eps <= 1/100.
FamilySpec sandor_family(const Rational& epsilon);

// Preset lookup by name: "carpet", "sandor" (eps = 1/100),
// "sandor:eps=p/q".
FamilySpec preset_family(const std::string& name);
std::vector<std::string> preset_names();

// Class membership report ---------------------------------------------

// Independent checks for membership in the rational-coefficient class the
// arithmetic singularity criterion needs. Failures are report entries.
struct ClassReport {
    bool map_count_ok;           // m >= 4
    bool base_ok;                // homogeneous with 3 <= L <= m-1
    bool sim_dim_ok;             // similarity dimension > 1
    bool lcm_ok;                 // L does not divide lcm of weight denominators
    bool independence_ok;        // translation coefficient matrix has rank m

    int map_count;
    int base;                    // 0 when not homogeneous
    double sim_dim;
    BigInt weight_denominator_lcm;
    int translation_rank;

    bool all_ok() const {
        return map_count_ok && base_ok && sim_dim_ok && lcm_ok && independence_ok;
    }
};
ClassReport validate_rational_class(const FamilySpec& f);

// Serialization ---------------------------------------------------------

std::string format_family(const FamilySpec& f);
FamilySpec parse_family(const std::string& text);
FamilySpec load_family(const std::string& path);
// Resolves a preset name or a file path.
FamilySpec resolve_family(const std::string& ref);

}  // namespace selfsim
