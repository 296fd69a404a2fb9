#include "selfsim/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "selfsim/mwc64.hpp"
#include "selfsim/textio.hpp"

namespace selfsim {

using nlohmann::json;

std::string fmt_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string ParamValue::repr() const { return rational ? r.get_str() : fmt_double(f); }

std::string metric_name(Metric m) {
    switch (m) {
        case Metric::SimilarityDim: return "similarity_dim";
        case Metric::Separation: return "separation";
        case Metric::Overlaps: return "overlaps";
        case Metric::Entropy: return "entropy";
        case Metric::PhiProbe: return "phi_probe";
    }
    return "?";
}

std::set<Metric> parse_metrics(const std::vector<std::string>& names) {
    std::set<Metric> out;
    for (const auto& n : names) {
        if (n == "similarity_dim") out.insert(Metric::SimilarityDim);
        else if (n == "separation") out.insert(Metric::Separation);
        else if (n == "overlaps") out.insert(Metric::Overlaps);
        else if (n == "entropy") out.insert(Metric::Entropy);
        else if (n == "phi_probe") out.insert(Metric::PhiProbe);
        else if (n == "all")
            out = {Metric::SimilarityDim, Metric::Separation, Metric::Overlaps, Metric::Entropy,
                   Metric::PhiProbe};
        else
            throw ValidationError("unknown metric: " + n);
    }
    return out;
}

SweepPlan parse_plan(const std::string& text) {
    KvFile kv = KvFile::parse_text(text);
    SweepPlan plan;
    if (auto fam = kv.single("family")) plan.family_ref = *fam;
    plan.family = resolve_family(plan.family_ref);
    if (auto v = kv.single("qmax")) plan.qmax = std::stoi(*v);
    if (auto v = kv.single("grid")) plan.float_grid = std::stoi(*v);
    if (kv.has("depths")) {
        plan.depths.clear();
        for (const auto& tok : kv.tokens("depths")) plan.depths.push_back(std::stoi(tok));
    }
    if (kv.has("metrics")) plan.metrics = parse_metrics(kv.tokens("metrics"));
    if (auto v = kv.single("jobs")) plan.jobs = std::stoi(*v);
    if (auto v = kv.single("seed")) plan.seed = std::stoull(*v);
    if (auto v = kv.single("samples")) plan.mc_samples = std::stoull(*v);
    if (auto v = kv.single("timeout")) plan.timeout_seconds = std::stod(*v);
    return plan;
}

SweepPlan load_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open plan file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_plan(ss.str());
}

std::vector<Rational> farey_slopes(const Rational& lo, const Rational& hi, int qmax) {
    if (qmax < 1) throw ValidationError("qmax must be >= 1");
    if (qmax > 10000) throw ValidationError("qmax above 10000 is not supported");
    if (!(lo < hi)) throw ValidationError("empty interval");

    std::vector<Rational> out;
    BigInt k_lo, k_hi;
    mpz_fdiv_q(k_lo.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
    mpz_fdiv_q(k_hi.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
    long first = k_lo.get_si(), last = k_hi.get_si();

    // Fractions in (k, k+1) are k + (Stern-Brocot tree between 0/1 and 1/1).
    std::function<void(long, long, long, long, const Rational&, const Rational&, long)> descend =
        [&](long p1, long q1, long p2, long q2, const Rational& a, const Rational& b, long k) {
            long pm = p1 + p2, qm = q1 + q2;
            if (qm > qmax) return;
            Rational med(pm, qm);  // Stern-Brocot mediants are already reduced
            if (med < a) {
                descend(pm, qm, p2, q2, a, b, k);
            } else if (med > b) {
                descend(p1, q1, pm, qm, a, b, k);
            } else {
                descend(p1, q1, pm, qm, a, b, k);
                out.push_back(Rational(k) + med);
                descend(pm, qm, p2, q2, a, b, k);
            }
        };

    for (long k = first; k <= last; ++k) {
        Rational kk(k);
        if (kk >= lo && kk <= hi) out.push_back(kk);
        Rational a = lo - kk;
        Rational b = hi - kk;
        if (a < 0) a = 0;
        if (b > 1) b = 1;
        if (a < 1 && b > 0 && a <= b) descend(0, 1, 1, 1, a, b, k);
    }
    return out;
}

PiecewiseLinear default_phi_probe(const FamilySpec& f) {
    FamilyBounds b = family_bounds(f);
    return PiecewiseLinear::hat(0.0, b.xi, 1.0);
}

namespace {

int clip_depth_words(int m, int n_max, uint64_t word_budget) {
    int n = 0;
    uint64_t words = 1;
    while (n < n_max && words <= word_budget / static_cast<uint64_t>(m)) {
        words *= static_cast<uint64_t>(m);
        ++n;
    }
    return n;
}

struct RecordContext {
    const SweepPlan& plan;
    const std::optional<ClassReport>& class_report;
    size_t index;
};

SweepRecord build_record(const RecordContext& ctx, const ParamValue& param) {
    const SweepPlan& plan = ctx.plan;
    const FamilySpec& f = plan.family;
    SweepRecord rec;
    rec.param = param;
    rec.class_report = ctx.class_report;

    const auto started = std::chrono::steady_clock::now();
    auto expired = [&] {
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        return s > plan.timeout_seconds;
    };
    auto note_failure = [&](const std::string& what) {
        if (!rec.note.empty()) rec.note += "; ";
        rec.note += what;
    };
    const int n_max = plan.depths.empty() ? 0 : *std::max_element(plan.depths.begin(), plan.depths.end());

    if (plan.metrics.count(Metric::SimilarityDim)) {
        try {
            rec.sim_dim = param.rational ? similarity_dimension(f, param.r)
                                         : similarity_dimension(f, param.as_double());
        } catch (const std::exception& e) {
            note_failure(e.what());
        }
    }

    if (plan.metrics.count(Metric::Separation) && n_max >= 1 && !expired()) {
        try {
            if (param.rational) {
                rec.separation = separation_profile(f, param.r, n_max);
            } else {
                int n = clip_depth_words(f.map_count(), n_max, kDefaultWordBudget);
                if (n < n_max) rec.budget_exceeded = true;
                if (n >= 1) rec.separation = separation_profile_float(f, param.as_double(), n);
            }
        } catch (const BudgetError& e) {
            rec.budget_exceeded = true;
            note_failure(e.what());
        } catch (const std::exception& e) {
            note_failure(e.what());
        }
    }

    if (plan.metrics.count(Metric::Overlaps) && n_max >= 1 && !expired()) {
        if (param.rational) {
            try {
                int n = clip_depth_words(f.map_count(), n_max, kDefaultOverlapWordBudget);
                if (n < n_max) rec.budget_exceeded = true;
                rec.witnesses = overlap_search(f, param.r, n);
                rec.witnesses_computed = true;
            } catch (const BudgetError& e) {
                rec.budget_exceeded = true;
                note_failure(e.what());
            } catch (const std::exception& e) {
                note_failure(e.what());
            }
        }
    }

    if (plan.metrics.count(Metric::Entropy) && !plan.depths.empty() && !expired()) {
        DimensionProfile prof;
        bool any = false;
        try {
            prof.similarity_dim = param.rational ? similarity_dimension(f, param.r)
                                                 : similarity_dimension(f, param.as_double());
        } catch (const std::exception&) {
            prof.similarity_dim = 0.0;
        }
        for (int n : plan.depths) {
            if (expired()) {
                rec.budget_exceeded = true;
                note_failure("timeout during entropy profile");
                break;
            }
            try {
                DimensionEntry e;
                if (param.rational) {
                    LatticeMeasure meas = exact_level_measure(f, param.r, n);
                    e = entropy_dimension(meas, meas.base, n);
                } else {
                    BinnedMeasure meas = monte_carlo_binned(f, param.as_double(), n, plan.mc_samples,
                                                            mix_seed(plan.seed, ctx.index * 64 + n));
                    e = entropy_dimension(meas, *f.homogeneous_base, n);
                }
                prof.estimate.depths.push_back(e.depth);
                prof.estimate.entropy_nats.push_back(e.entropy_nats);
                prof.estimate.ratio.push_back(e.ratio);
                any = true;
            } catch (const BudgetError& e) {
                rec.budget_exceeded = true;
                note_failure(e.what());
                break;
            } catch (const std::exception& e) {
                note_failure(e.what());
                break;
            }
        }
        if (any) rec.dimension = std::move(prof);
    }

    if (plan.metrics.count(Metric::PhiProbe) && !plan.depths.empty() && !expired()) {
        try {
            PiecewiseLinear probe = default_phi_probe(f);
            std::vector<double> values;
            for (int n : plan.depths) {
                if (expired()) {
                    rec.budget_exceeded = true;
                    note_failure("timeout during phi probe");
                    break;
                }
                if (param.rational) {
                    LatticeMeasure meas = exact_level_measure(f, param.r, n);
                    values.push_back(integrate_test_function(meas, probe));
                } else {
                    BinnedMeasure meas = monte_carlo_binned(f, param.as_double(), n, plan.mc_samples,
                                                            mix_seed(plan.seed, ctx.index * 64 + n));
                    values.push_back(integrate_test_function(meas, probe));
                }
            }
            if (!values.empty()) rec.phi_values = std::move(values);
        } catch (const BudgetError& e) {
            rec.budget_exceeded = true;
            note_failure(e.what());
        } catch (const std::exception& e) {
            note_failure(e.what());
        }
    }

    return rec;
}

}  // namespace

std::vector<SweepRecord> run_sweep(const SweepPlan& plan) {
    validate_family(plan.family);

    std::vector<ParamValue> params;
    if (!plan.explicit_params.empty()) {
        params = plan.explicit_params;
    } else {
        if (plan.qmax >= 1)
            for (auto& r : farey_slopes(plan.family.interval_lo, plan.family.interval_hi, plan.qmax))
                params.push_back(ParamValue::exact(std::move(r)));
        if (plan.float_grid >= 1) {
            double lo = to_double(plan.family.interval_lo), hi = to_double(plan.family.interval_hi);
            for (int i = 1; i <= plan.float_grid; ++i)
                params.push_back(ParamValue::approx(lo + (hi - lo) * i / (plan.float_grid + 1)));
        }
        std::stable_sort(params.begin(), params.end(), [](const ParamValue& a, const ParamValue& b) {
            double da = a.as_double(), db = b.as_double();
            if (da != db) return da < db;
            return a.rational && !b.rational;
        });
    }
    if (params.empty()) throw ValidationError("sweep plan has no parameters");

    std::optional<ClassReport> class_report;
    try {
        class_report = validate_rational_class(plan.family);
    } catch (const std::exception&) {
        class_report = std::nullopt;
    }

    std::vector<SweepRecord> records(params.size());
    const int jobs = std::max(1, plan.jobs);
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (size_t i = 0; i < params.size(); ++i) {
        RecordContext ctx{plan, class_report, i};
        records[i] = build_record(ctx, params[i]);
    }
    return records;
}

// Emission --------------------------------------------------------------

namespace {

template <typename T>
std::string opt_str(const std::optional<T>& v) {
    return v ? fmt_double(static_cast<double>(*v)) : std::string();
}

}  // namespace

void emit_csv(const std::vector<SweepRecord>& records, std::ostream& os) {
    os << "parameter,param_kind,sim_dim,delta_n,has_collision,d_n,rho_n,entropy_n,overlap_count,phi,"
          "budget\n";
    for (const auto& rec : records) {
        os << rec.param.repr() << ",";
        os << (rec.param.rational ? "rational" : "float") << ",";
        os << opt_str(rec.sim_dim) << ",";
        if (rec.separation && !rec.separation->delta.empty())
            os << fmt_double(rec.separation->delta.back());
        os << ",";
        if (rec.separation && rec.separation->exact_lane && !rec.separation->has_collision.empty())
            os << (rec.separation->has_collision.back() ? "true" : "false");
        os << ",";
        if (rec.dimension && !rec.dimension->estimate.ratio.empty())
            os << fmt_double(rec.dimension->estimate.ratio.back());
        os << ",";
        if (rec.separation && !rec.separation->rho.empty()) os << fmt_double(rec.separation->rho.back());
        os << ",";
        if (rec.dimension && !rec.dimension->estimate.entropy_nats.empty())
            os << fmt_double(rec.dimension->estimate.entropy_nats.back());
        os << ",";
        if (rec.witnesses_computed) os << rec.witnesses.size();
        os << ",";
        if (rec.phi_values && !rec.phi_values->empty()) os << fmt_double(rec.phi_values->back());
        os << ",";
        os << (rec.budget_exceeded ? "1" : "0") << "\n";
    }
}

namespace {

json param_to_json(const ParamValue& p) {
    json j;
    j["kind"] = p.rational ? "rational" : "float";
    if (p.rational)
        j["value"] = p.r.get_str();
    else
        j["value"] = p.f;
    return j;
}

ParamValue param_from_json(const json& j) {
    if (j.at("kind") == "rational") return ParamValue::exact(parse_rational(j.at("value").get<std::string>()));
    return ParamValue::approx(j.at("value").get<double>());
}

json record_to_json(const SweepRecord& rec) {
    json j;
    j["parameter"] = param_to_json(rec.param);
    if (rec.sim_dim) j["sim_dim"] = *rec.sim_dim;
    if (rec.class_report) {
        const ClassReport& c = *rec.class_report;
        j["class_report"] = {{"map_count_ok", c.map_count_ok},
                             {"base_ok", c.base_ok},
                             {"sim_dim_ok", c.sim_dim_ok},
                             {"lcm_ok", c.lcm_ok},
                             {"independence_ok", c.independence_ok},
                             {"map_count", c.map_count},
                             {"base", c.base},
                             {"sim_dim", c.sim_dim},
                             {"weight_denominator_lcm", c.weight_denominator_lcm.get_str()},
                             {"translation_rank", c.translation_rank}};
    }
    if (rec.separation) {
        const SeparationProfile& s = *rec.separation;
        json js;
        js["depths"] = s.depths;
        js["delta"] = s.delta;
        js["exact_lane"] = s.exact_lane;
        if (s.exact_lane) {
            std::vector<std::string> de;
            for (const auto& d : s.delta_exact) de.push_back(d.get_str());
            js["delta_exact"] = de;
        }
        js["has_collision"] = s.has_collision;
        js["rho"] = s.rho;
        j["separation"] = js;
    }
    if (rec.witnesses_computed) {
        json arr = json::array();
        for (const auto& w : rec.witnesses) {
            json jw;
            jw["word_i"] = w.word_i.render();
            jw["word_j"] = w.word_j.render();
            jw["kind"] = w.kind == OverlapWitness::Kind::AtParameter ? "at_parameter" : "identical";
            if (w.parameter) jw["parameter"] = w.parameter->get_str();
            arr.push_back(jw);
        }
        j["witnesses"] = arr;
    }
    if (rec.dimension) {
        j["dimension"] = {{"depths", rec.dimension->estimate.depths},
                          {"entropy_nats", rec.dimension->estimate.entropy_nats},
                          {"ratio", rec.dimension->estimate.ratio},
                          {"similarity_dim", rec.dimension->similarity_dim}};
    }
    if (rec.phi_values) j["phi"] = *rec.phi_values;
    j["budget_exceeded"] = rec.budget_exceeded;
    if (!rec.note.empty()) j["note"] = rec.note;
    return j;
}

SweepRecord record_from_json(const json& j) {
    SweepRecord rec;
    rec.param = param_from_json(j.at("parameter"));
    if (j.contains("sim_dim")) rec.sim_dim = j.at("sim_dim").get<double>();
    if (j.contains("class_report")) {
        const json& c = j.at("class_report");
        ClassReport r{};
        r.map_count_ok = c.at("map_count_ok").get<bool>();
        r.base_ok = c.at("base_ok").get<bool>();
        r.sim_dim_ok = c.at("sim_dim_ok").get<bool>();
        r.lcm_ok = c.at("lcm_ok").get<bool>();
        r.independence_ok = c.at("independence_ok").get<bool>();
        r.map_count = c.at("map_count").get<int>();
        r.base = c.at("base").get<int>();
        r.sim_dim = c.at("sim_dim").get<double>();
        r.weight_denominator_lcm = BigInt(c.at("weight_denominator_lcm").get<std::string>());
        r.translation_rank = c.at("translation_rank").get<int>();
        rec.class_report = r;
    }
    if (j.contains("separation")) {
        const json& s = j.at("separation");
        SeparationProfile p;
        p.depths = s.at("depths").get<std::vector<int>>();
        p.delta = s.at("delta").get<std::vector<double>>();
        p.exact_lane = s.at("exact_lane").get<bool>();
        if (p.exact_lane)
            for (const auto& d : s.at("delta_exact")) p.delta_exact.push_back(parse_rational(d.get<std::string>()));
        else
            p.delta_exact.assign(p.depths.size(), Rational(0));
        p.has_collision = s.at("has_collision").get<std::vector<bool>>();
        p.rho = s.at("rho").get<std::vector<double>>();
        rec.separation = std::move(p);
    }
    if (j.contains("witnesses")) {
        rec.witnesses_computed = true;
        for (const auto& jw : j.at("witnesses")) {
            OverlapWitness w;
            w.word_i = Word::parse(jw.at("word_i").get<std::string>());
            w.word_j = Word::parse(jw.at("word_j").get<std::string>());
            w.kind = jw.at("kind") == "identical" ? OverlapWitness::Kind::Identical
                                                  : OverlapWitness::Kind::AtParameter;
            if (jw.contains("parameter")) w.parameter = parse_rational(jw.at("parameter").get<std::string>());
            rec.witnesses.push_back(std::move(w));
        }
    }
    if (j.contains("dimension")) {
        const json& d = j.at("dimension");
        DimensionProfile prof;
        prof.estimate.depths = d.at("depths").get<std::vector<int>>();
        prof.estimate.entropy_nats = d.at("entropy_nats").get<std::vector<double>>();
        prof.estimate.ratio = d.at("ratio").get<std::vector<double>>();
        prof.similarity_dim = d.at("similarity_dim").get<double>();
        rec.dimension = std::move(prof);
    }
    if (j.contains("phi")) rec.phi_values = j.at("phi").get<std::vector<double>>();
    rec.budget_exceeded = j.value("budget_exceeded", false);
    rec.note = j.value("note", std::string());
    return rec;
}

}  // namespace

void emit_json(const SweepPlan& plan, const std::vector<SweepRecord>& records, std::ostream& os) {
    json j;
    j["plan"] = {{"family", plan.family_ref},
                 {"qmax", plan.qmax},
                 {"grid", plan.float_grid},
                 {"depths", plan.depths},
                 {"seed", plan.seed},
                 {"samples", plan.mc_samples}};
    std::vector<std::string> names;
    for (Metric m : plan.metrics) names.push_back(metric_name(m));
    j["plan"]["metrics"] = names;
    json arr = json::array();
    for (const auto& rec : records) arr.push_back(record_to_json(rec));
    j["records"] = arr;
    os << j.dump(2) << "\n";
}

std::vector<SweepRecord> parse_records_json(const std::string& text) {
    json j = json::parse(text);
    std::vector<SweepRecord> out;
    for (const auto& jr : j.at("records")) out.push_back(record_from_json(jr));
    return out;
}

void emit_svg(const SweepPlan& plan, const std::vector<SweepRecord>& records, std::ostream& os) {
    const double W = 840, H = 560, ml = 70, mr = 20, mt = 30, mb = 50;
    double xmin = 1e300, xmax = -1e300, ymax = 1.0;
    for (const auto& rec : records) {
        double x = rec.param.as_double();
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        if (rec.dimension && !rec.dimension->estimate.ratio.empty())
            ymax = std::max(ymax, rec.dimension->estimate.ratio.back());
        if (rec.sim_dim) ymax = std::max(ymax, *rec.sim_dim);
    }
    if (xmax <= xmin) xmax = xmin + 1;
    ymax *= 1.08;
    auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto Y = [&](double y) { return H - mb - y / ymax * (H - mt - mb); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    // axes
    os << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\"" << H - mb
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
       << "\" stroke=\"black\"/>\n";
    // height-1 reference
    os << "<line x1=\"" << ml << "\" y1=\"" << Y(1.0) << "\" x2=\"" << W - mr << "\" y2=\"" << Y(1.0)
       << "\" stroke=\"#888\" stroke-dasharray=\"6,4\"/>\n";
    os << "<text x=\"" << W - mr - 4 << "\" y=\"" << Y(1.0) - 4
       << "\" text-anchor=\"end\" font-size=\"12\" fill=\"#555\">d = 1</text>\n";
    // similarity-dimension reference (polyline through per-record values)
    bool have_sim = false;
    std::ostringstream pts;
    for (const auto& rec : records)
        if (rec.sim_dim) {
            pts << X(rec.param.as_double()) << "," << Y(*rec.sim_dim) << " ";
            have_sim = true;
        }
    if (have_sim)
        os << "<polyline points=\"" << pts.str()
           << "\" fill=\"none\" stroke=\"#c44\" stroke-dasharray=\"2,3\"/>\n";
    // one marker per record
    for (const auto& rec : records) {
        double y = 0.0;
        if (rec.dimension && !rec.dimension->estimate.ratio.empty())
            y = rec.dimension->estimate.ratio.back();
        else if (rec.sim_dim)
            y = *rec.sim_dim;
        os << "<circle cx=\"" << X(rec.param.as_double()) << "\" cy=\"" << Y(y)
           << "\" r=\"3\" fill=\"" << (rec.param.rational ? "#26c" : "#2a2") << "\"/>\n";
    }
    os << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 14
       << "\" text-anchor=\"middle\" font-size=\"13\">parameter u (" << plan.family_ref << ")</text>\n";
    os << "<text x=\"18\" y=\"" << (mt + H - mb) / 2
       << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
       << (mt + H - mb) / 2 << ")\">entropy dimension estimate</text>\n";
    os << "</svg>\n";
}

std::string render_record_text(const SweepRecord& rec) {
    std::ostringstream os;
    os << "parameter " << rec.param.repr() << " (" << (rec.param.rational ? "rational" : "float")
       << ")\n";
    if (rec.sim_dim) os << "  similarity_dim " << fmt_double(*rec.sim_dim) << "\n";
    if (rec.class_report) {
        const ClassReport& c = *rec.class_report;
        os << "  class m=" << c.map_count << (c.map_count_ok ? " ok" : " FAIL") << ", L=" << c.base
           << (c.base_ok ? " ok" : " FAIL") << ", sim_dim=" << fmt_double(c.sim_dim)
           << (c.sim_dim_ok ? " ok" : " FAIL") << ", lcm=" << c.weight_denominator_lcm.get_str()
           << (c.lcm_ok ? " ok" : " FAIL") << ", rank=" << c.translation_rank
           << (c.independence_ok ? " ok" : " FAIL") << "\n";
    }
    if (rec.separation) {
        std::istringstream lines(rec.separation->render());
        std::string line;
        while (std::getline(lines, line)) os << "  " << line << "\n";
    }
    if (rec.witnesses_computed) {
        os << "  overlap witnesses: " << rec.witnesses.size() << "\n";
        for (const auto& w : rec.witnesses) os << "    " << w.render() << "\n";
    }
    if (rec.dimension) {
        for (size_t k = 0; k < rec.dimension->estimate.depths.size(); ++k)
            os << "  depth " << rec.dimension->estimate.depths[k] << " entropy "
               << fmt_double(rec.dimension->estimate.entropy_nats[k]) << " d_n "
               << fmt_double(rec.dimension->estimate.ratio[k]) << "\n";
        os << "  similarity_dim reference " << fmt_double(rec.dimension->similarity_dim) << "\n";
    }
    if (rec.phi_values) {
        os << "  phi";
        for (double v : *rec.phi_values) os << " " << fmt_double(v);
        os << "\n";
    }
    if (rec.budget_exceeded) os << "  budget exceeded\n";
    if (!rec.note.empty()) os << "  note: " << rec.note << "\n";
    return os.str();
}

}  // namespace selfsim
