#pragma once

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "selfsim/measure.hpp"
#include "selfsim/overlap.hpp"

namespace selfsim {

// Tagged parameter: exact facts (collisions, witnesses) are only ever
// derived on the rational lane.
struct ParamValue {
    bool rational = true;
    Rational r;
    double f = 0.0;

    static ParamValue exact(Rational v) { return {true, std::move(v), 0.0}; }
    static ParamValue approx(double v) { return {false, Rational(0), v}; }

    double as_double() const { return rational ? to_double(r) : f; }
    std::string repr() const;
};

enum class Metric { SimilarityDim, Separation, Overlaps, Entropy, PhiProbe };

// Names: similarity_dim, separation, overlaps, entropy, phi_probe.
std::set<Metric> parse_metrics(const std::vector<std::string>& names);
std::string metric_name(Metric m);

struct SweepPlan {
    std::string family_ref = "carpet";
    FamilySpec family;
    int qmax = 0;                       // rational lane: Farey denominators <= qmax
    int float_grid = 0;                 // float lane: uniform interior samples
    std::vector<ParamValue> explicit_params;  // used instead of the lanes when nonempty
    std::vector<int> depths = {1, 2, 4, 8};
    std::set<Metric> metrics;
    int jobs = 1;
    uint64_t seed = 42;
    uint64_t mc_samples = 1000000;
    double timeout_seconds = 300.0;
};

// Plan files use the family key-value format: keys family, qmax, grid,
// depths, metrics, jobs, seed, samples, timeout.
SweepPlan parse_plan(const std::string& text);
SweepPlan load_plan(const std::string& path);

struct SweepRecord {
    ParamValue param;
    std::optional<double> sim_dim;
    std::optional<ClassReport> class_report;
    std::optional<SeparationProfile> separation;
    bool witnesses_computed = false;
    std::vector<OverlapWitness> witnesses;
    std::optional<DimensionProfile> dimension;
    std::optional<std::vector<double>> phi_values;  // one per requested depth
    bool budget_exceeded = false;
    std::string note;
};

// All reduced fractions p/q with q <= qmax inside [lo, hi], ascending
// (Stern-Brocot traversal).
std::vector<Rational> farey_slopes(const Rational& lo, const Rational& hi, int qmax);

// Runs every requested metric for every parameter. Parameter-level
// parallelism (plan.jobs workers); output is ordered by parameter value and
// byte-identical regardless of the worker count. Per-parameter failures are
// captured in the record, never aborting the sweep.
std::vector<SweepRecord> run_sweep(const SweepPlan& plan);

// The documented probe used by the phi_probe metric: the unit hat on the
// support bound, f(x) = max(0, 1 - |x|/xi).
PiecewiseLinear default_phi_probe(const FamilySpec& f);

void emit_csv(const std::vector<SweepRecord>& records, std::ostream& os);
void emit_json(const SweepPlan& plan, const std::vector<SweepRecord>& records, std::ostream& os);
void emit_svg(const SweepPlan& plan, const std::vector<SweepRecord>& records, std::ostream& os);
std::vector<SweepRecord> parse_records_json(const std::string& text);

// Human-readable per-record block for the analyze subcommand.
std::string render_record_text(const SweepRecord& rec);

// Deterministic shortest round-trip formatting used by all text emitters.
std::string fmt_double(double v);

}  // namespace selfsim
