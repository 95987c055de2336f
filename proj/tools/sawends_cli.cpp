// sawends command-line driver: graph/cut-set specs in, tables out.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "sawends/sawends.hpp"

using namespace sawends;

namespace {

struct Options {
    std::string command;
    std::string graph, cutset, plan, out = "-", format = "csv";
    int n_max = 10;
    std::vector<std::string> thresholds{"1/8", "1/4", "1/2", "1"};
    std::vector<int> n_values;
    int r = 0;
    std::optional<int> m;
    int k = 1;
    std::string a = "1/4", a_prime = "1/8", alpha = "1/8";
    int samples = 1000;
    std::uint64_t seed = 1;
    int workers = 1;
    int radius = 10;
    int n0 = 3;
};

bool is_config_error(const Error& e) {
    static const std::set<std::string> codes{"SpecNotFound", "SpecInvalid", "InvalidParameter",
                                             "UnsupportedParameter", "InvalidVertex", "InvalidPresentation",
                                             "InvalidGeneratorSet", "EmptyInput"};
    return codes.count(e.code()) > 0;
}

int fail(const std::string& code, const std::string& message, int status) {
    json err{{"error", {{"code", code}, {"message", message}}}, {"schema_version", kSchemaVersion}};
    std::cerr << err.dump() << "\n";
    return status;
}

class Output {
public:
    explicit Output(const Options& o) : opt_(o) {}

    std::ostream& stream() { return buf_; }
    void flush() {
        if (opt_.out == "-") {
            std::cout << buf_.str();
        } else {
            std::ofstream f(opt_.out);
            if (!f) throw Error("OutputError", "cannot write " + opt_.out);
            f << buf_.str();
        }
    }
    /// Rewrites the output with partial results (checkpoint).
    void checkpoint() {
        if (opt_.out != "-") flush();
    }
    void reset() { buf_.str(""); }

private:
    const Options& opt_;
    std::ostringstream buf_;
};

json resolved(const Options& o) {
    json j{{"command", o.command},   {"graph", o.graph},         {"cutset", o.cutset},
           {"plan", o.plan},         {"n_max", o.n_max},         {"thresholds", o.thresholds},
           {"n_values", o.n_values}, {"r", o.r},                 {"k", o.k},
           {"a", o.a},               {"a_prime", o.a_prime},     {"alpha", o.alpha},
           {"samples", o.samples},   {"seed", o.seed},           {"workers", o.workers},
           {"radius", o.radius},     {"n0", o.n0},               {"out", o.out},
           {"format", o.format}};
    j["m"] = o.m ? json(*o.m) : json(nullptr);
    return j;
}

void write_manifest(const Options& o, const GraphHandle& g) {
    json man{{"artifact", "sawends"},        {"version", kArtifactVersion}, {"schema_version", kSchemaVersion},
             {"config", resolved(o)},         {"graph_spec", g.spec}};
    if (!o.cutset.empty()) man["cutset_spec"] = read_json_file(o.cutset);
    if (!o.plan.empty()) man["plan_spec"] = read_json_file(o.plan);
    if (o.out == "-") {
        std::cerr << man.dump() << "\n";
    } else {
        std::ofstream f(o.out + ".manifest.json");
        f << man.dump(2) << "\n";
    }
}

void csv_header(std::ostream& os, const std::string& schema, const std::string& columns) {
    os << "# schema sawends." << schema << " v" << kSchemaVersion << "\n" << columns << "\n";
}

json big(const BigInt& x) { return x.str(); }

// ---------------------------------------------------------------------------

void run_count(const Options& o, const GraphHandle& g, Output& out) {
    std::vector<int> stages;
    for (int d : {o.n_max - 6, o.n_max - 3, o.n_max})
        if (d >= 0 && (stages.empty() || d > stages.back())) stages.push_back(d);
    for (int d : stages) {
        std::vector<CountTable> per;
        for (auto& v : g.representatives) per.push_back(count_walks_parallel(g.oracle, v, d, o.workers));
        auto sup = sup_table(per);
        out.reset();
        auto& os = out.stream();
        if (o.format == "json") {
            json j{{"schema_version", kSchemaVersion}, {"command", "count"}, {"n_max", d}, {"complete", d == o.n_max}};
            for (int n = 0; n <= d; ++n) j["counts"].push_back(big(sup[n]));
            for (auto& t : per) {
                json row{{"origin", t.origin.bytes()}};
                for (auto& c : t.entries) row["counts"].push_back(big(c));
                j["per_representative"].push_back(row);
            }
            os << j.dump(2) << "\n";
        } else {
            csv_header(os, "count", "n,count");
            for (int n = 0; n <= d; ++n) os << n << "," << sup[n] << "\n";
        }
        std::cerr << "{\"progress\":\"count\",\"n_complete\":" << d << "}\n";
        if (d != o.n_max) out.checkpoint();
    }
}

void run_displacement(const Options& o, const GraphHandle& g, Output& out) {
    std::vector<Rational> th;
    for (auto& s : o.thresholds) th.push_back(parse_rational(s));
    auto series = displacement_series(g.oracle, g.representatives.front(), o.n_max, th, o.workers);
    auto& os = out.stream();
    if (o.format == "json") {
        json j{{"schema_version", kSchemaVersion}, {"command", "displacement"}, {"origin", g.representatives.front().bytes()}};
        for (auto& s : series) {
            json row{{"n", s.n}, {"total", big(s.total)}, {"mean_square", to_string(s.mean_square)},
                     {"mean_square_float", static_cast<double>(s.mean_square)}};
            for (auto& [d, c] : s.histogram) row["histogram"][std::to_string(d)] = big(c);
            for (auto& [a, c] : s.tail_counts) row["tail_counts"][to_string(a)] = big(c);
            j["series"].push_back(row);
        }
        if (!series.empty() && series.back().fitted_nu) {
            j["fitted_nu"] = {{"estimate", *series.back().fitted_nu},
                              {"window", {series.back().nu_window.first, series.back().nu_window.second}}};
        }
        os << j.dump(2) << "\n";
    } else {
        std::string cols = "n,total,mean_square,mean_square_float";
        for (auto& a : th) cols += ",tail_ge_" + to_string(a) + "n";
        csv_header(os, "displacement", cols);
        for (auto& s : series) {
            os << s.n << "," << s.total << "," << to_string(s.mean_square) << ","
               << static_cast<double>(s.mean_square);
            for (auto& a : th) os << "," << s.tail_counts.at(a);
            os << "\n";
        }
    }
}

void run_mu(const Options& o, const GraphHandle& g, Output& out) {
    std::vector<CountTable> per;
    for (auto& v : g.representatives) per.push_back(count_walks_parallel(g.oracle, v, o.n_max, o.workers));
    auto sup = sup_table(per);
    auto b = mu_bounds(sup);
    auto viol = g.vertex_transitive() ? submultiplicativity_violations(sup) : std::vector<SubmultiplicativityViolation>{};
    auto& os = out.stream();
    if (o.format == "json") {
        json j{{"schema_version", kSchemaVersion}, {"command", "mu"}, {"upper", b.upper}, {"argmin", b.argmin},
               {"submultiplicativity_violations", viol.size()}};
        for (int n = 1; n <= sup.n_max(); ++n)
            j["rows"].push_back({{"n", n}, {"count", big(sup[n])}, {"root", b.raw_roots[n]}, {"running_min", b.running_min[n]}});
        os << j.dump(2) << "\n";
    } else {
        csv_header(os, "mu", "n,count,root,running_min");
        os.precision(12);
        for (int n = 1; n <= sup.n_max(); ++n)
            os << n << "," << sup[n] << "," << b.raw_roots[n] << "," << b.running_min[n] << "\n";
    }
}

void run_patterns(const Options& o, const GraphHandle& g, const CutSet& cs, Output& out) {
    const VertexKey& v = g.representatives.front();
    const int s = static_cast<int>(cs.S.size());
    auto all = count_walks_parallel(g.oracle, v, o.n_max, o.workers);
    std::vector<std::pair<std::string, GrowthEstimate>> cols;
    cols.emplace_back("Estar", count_restricted(g.oracle, v, o.n_max, cs, EventKind::estar(o.m), o.r, o.workers));
    std::vector<GrowthEstimate> tilde;
    for (int k = 1; k <= s; ++k) {
        tilde.push_back(count_restricted(g.oracle, v, o.n_max, cs, EventKind::e_tilde(k, o.m), o.r, o.workers));
        cols.emplace_back("EkTilde_k" + std::to_string(k), tilde.back());
    }
    if (cs.S_prime) {
        int k = std::min<int>(o.k, static_cast<int>(cs.S_prime->size()));
        cols.emplace_back("CalEkTilde_k" + std::to_string(k),
                          count_restricted(g.oracle, v, o.n_max, cs, EventKind::cal_e_tilde(k, o.m), o.r, o.workers));
    }
    int m = o.m.value_or(2);
    BParams below{FRegime::StarBelowMu, parse_rational(o.a), m, 0};
    BParams equal{FRegime::StarEqualsMu, parse_rational(o.a), m, std::min(o.k, s)};
    auto b_below = count_b(g.oracle, v, o.n_max, cs, below, o.r, o.workers);
    auto b_equal = count_b(g.oracle, v, o.n_max, cs, equal, o.r, o.workers);
    int n = o.n_max;
    double mu_n = nth_root(all[n], n), star_n = cols.front().second.lambda_roots.at(n);
    std::string regime = star_n < 0.95 * mu_n ? "star-below-mu" : "star-equals-mu";
    auto suggestion = suggest_level(tilde, all);
    auto& os = out.stream();
    if (o.format == "json") {
        json j{{"schema_version", kSchemaVersion}, {"command", "patterns"}, {"origin", v.bytes()}, {"r", o.r},
               {"m", o.m ? json(*o.m) : json(nullptr)}, {"finite_n_regime_label", regime},
               {"suggested_level_k", suggestion ? json(*suggestion) : json(nullptr)}};
        for (int i = 0; i <= n; ++i) j["c_n"].push_back(big(all[i]));
        for (auto& [name, e] : cols) {
            json c{{"label", e.label}};
            for (int i = 0; i <= n; ++i) c["counts"].push_back(big(e.restricted_table[i]));
            c["roots"] = e.lambda_roots;
            j["restricted"][name] = c;
        }
        for (auto* e : {&b_below, &b_equal}) {
            json c{{"label", e->label}};
            for (int i = 0; i <= n; ++i) c["counts"].push_back(big(e->restricted_table[i]));
            j["b_n"].push_back(c);
        }
        os << j.dump(2) << "\n";
    } else {
        std::string header = "n,c_n";
        for (auto& [name, e] : cols) header += "," + name;
        header += ",b_star_below_mu,b_star_equals_mu";
        csv_header(os, "patterns", header);
        os << "# r=" << o.r << " m=" << (o.m ? std::to_string(*o.m) : "none") << " regime_label=" << regime
           << " suggested_k=" << (suggestion ? std::to_string(*suggestion) : "none") << "\n";
        for (int i = 0; i <= n; ++i) {
            os << i << "," << all[i];
            for (auto& [name, e] : cols) os << "," << e.restricted_table[i];
            os << "," << b_below.restricted_table[i] << "," << b_equal.restricted_table[i] << "\n";
        }
    }
}

json surgery_json(const SurgeryResult& r) {
    json c = json::array(), b = json::array();
    for (auto& x : r.connector) c.push_back(x.bytes());
    for (auto& x : r.bridge) b.push_back(x.bytes());
    return {{"split_index", r.split_index}, {"automorphism", r.automorphism.name}, {"connector", c},
            {"bridge", b}, {"length_increase", r.length_increase}, {"after", walk_to_json(r.walk)}};
}

void run_surgery(const Options& o, const GraphHandle& g, const CutSet& cs, Output& out) {
    json j{{"schema_version", kSchemaVersion}, {"command", "surgery-demo"}};
    if (!o.plan.empty()) {
        auto plan = load_plan_spec(read_json_file(o.plan));
        auto res = iterated_surgery(g.oracle, plan, cs);
        j["before"] = walk_to_json(plan.base_walk);
        j["after"] = walk_to_json(res.walk);
        j["images_disjoint"] = res.images_disjoint;
        for (auto& s : res.steps) j["steps"].push_back(surgery_json(s));
    } else {
        auto rng = sample_stream(o.seed, 0);
        auto w = dimerize(g.oracle, g.representatives.front(), o.n_max, rng);
        if (!w) throw Error("SamplerFailure", "could not draw a base walk");
        j["before"] = walk_to_json(*w);
        auto cand = connector_candidates(g.oracle, *w, cs, o.n0);
        if (!cand.empty()) j["connector"] = surgery_json(single_surgery(g.oracle, *w, cand.front(), cs));
        auto cross = crossing_candidates(g.oracle, *w, cs);
        if (!cross.empty()) j["crossing"] = surgery_json(single_surgery(g.oracle, *w, cross.front(), cs));
    }
    out.stream() << j.dump(2) << "\n";
}

void run_sample(const Options& o, const GraphHandle& g, Output& out) {
    auto ns = o.n_values.empty() ? std::vector<int>{o.n_max} : o.n_values;
    SpeedConfig cfg;
    cfg.workers = o.workers;
    auto runs = estimate_speed(g.oracle, g.representatives.front(), ns, parse_rational(o.alpha), o.samples, o.seed, cfg);
    auto& os = out.stream();
    if (o.format == "json") {
        json j{{"schema_version", kSchemaVersion}, {"command", "sample"}, {"alpha", o.alpha}, {"seed", o.seed}};
        for (auto& r : runs)
            j["runs"].push_back({{"n", r.n}, {"samples", r.samples}, {"accepted", r.accepted}, {"failures", r.failures},
                                 {"hits", r.hits}, {"estimate", r.estimate}, {"ci_halfwidth", r.ci_halfwidth},
                                 {"mean_sq_estimate", r.mean_sq_estimate}});
        os << j.dump(2) << "\n";
    } else {
        csv_header(os, "sample", "n,samples,accepted,failures,hits,estimate,ci,mean_sq");
        os.precision(10);
        for (auto& r : runs)
            os << r.n << "," << r.samples << "," << r.accepted << "," << r.failures << "," << r.hits << ","
               << r.estimate << "," << r.ci_halfwidth << "," << r.mean_sq_estimate << "\n";
    }
}

void run_validate(const Options& o, const GraphHandle& g, const CutSet& cs, Output& out) {
    auto rep = validate_cutset(g.oracle, cs, o.radius);
    json j{{"schema_version", kSchemaVersion}, {"command", "validate"}, {"cutset", cs.name},
           {"radius", o.radius}, {"passed", rep.passed()}, {"boundary_components", rep.boundary_components}};
    if (rep.measured_connectivity_radius) j["measured_connectivity_radius"] = *rep.measured_connectivity_radius;
    if (rep.measured_N) j["measured_N"] = *rep.measured_N;
    for (auto& c : rep.checks) j["checks"].push_back({{"name", c.name}, {"status", to_string(c.status)}, {"detail", c.detail}});
    out.stream() << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-avoiding walks on graphs with more than one end"};
    app.require_subcommand(1);
    Options o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--graph", o.graph, "graph spec (JSON)")->required();
        sub->add_option("--cutset", o.cutset, "cut-set spec (JSON)");
        sub->add_option("--n-max", o.n_max, "largest walk length");
        sub->add_option("--thresholds", o.thresholds, "displacement thresholds a in (0,1]")->delimiter(',');
        sub->add_option("--n-values", o.n_values, "walk lengths for sampling")->delimiter(',');
        sub->add_option("--r", o.r, "allowed number of occurrences");
        sub->add_option("--m", o.m, "window half-width m");
        sub->add_option("--k", o.k, "level k");
        sub->add_option("--a", o.a, "quota fraction a");
        sub->add_option("--a-prime", o.a_prime, "F fraction a'");
        sub->add_option("--alpha", o.alpha, "speed threshold alpha in (0,1)");
        sub->add_option("--samples", o.samples, "samples per n");
        sub->add_option("--seed", o.seed, "RNG seed");
        sub->add_option("--workers", o.workers, "worker threads");
        sub->add_option("--radius", o.radius, "validation radius");
        sub->add_option("--n0", o.n0, "largest connector length for generated plans");
        sub->add_option("--plan", o.plan, "surgery plan spec (JSON)");
        sub->add_option("--out", o.out, "output path, - for stdout");
        sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    };
    const std::pair<const char*, const char*> commands[] = {
        {"count", "exact SAW counts c_n(v), sup over representatives"},
        {"displacement", "exact displacement histograms, mean square, tail counts"},
        {"mu", "connective-constant bounds and submultiplicativity check"},
        {"patterns", "restricted counts per pattern event relative to a cut set"},
        {"surgery-demo", "run a surgery plan (or a sampled single step) and report it"},
        {"sample", "dimerization estimates of P(|pi| <= alpha n)"},
        {"validate", "check a cut set against the graph"}};
    for (auto [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        add_common(sub);
        sub->callback([&o, name] { o.command = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("UsageError", e.what(), 2);
    }

    try {
        auto g = load_graph_spec(read_json_file(o.graph));
        std::optional<CutSet> cs;
        if (!o.cutset.empty()) cs = load_cutset_spec(read_json_file(o.cutset), g);
        bool needs_cut = o.command == "patterns" || o.command == "surgery-demo" || o.command == "validate";
        if (needs_cut && !cs) throw SpecInvalid(o.command + " needs --cutset");
        if (o.n_max < 0) throw InvalidParameter("--n-max must be nonnegative");
        if (!o.plan.empty()) read_json_file(o.plan);
        Output out(o);
        if (o.command == "count") run_count(o, g, out);
        else if (o.command == "displacement") run_displacement(o, g, out);
        else if (o.command == "mu") run_mu(o, g, out);
        else if (o.command == "patterns") run_patterns(o, g, *cs, out);
        else if (o.command == "surgery-demo") run_surgery(o, g, *cs, out);
        else if (o.command == "sample") run_sample(o, g, out);
        else run_validate(o, g, *cs, out);
        out.flush();
        write_manifest(o, g);
        return 0;
    } catch (const Error& e) {
        return fail(e.code(), e.what(), is_config_error(e) ? 2 : 1);
    } catch (const std::exception& e) {
        return fail("RuntimeError", e.what(), 1);
    }
}
