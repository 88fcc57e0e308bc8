// prlab: exact phase-retrievability checks, phaseless l1 solving, null
// space property certification, and complex falsification, wired to a
// strict exit-code contract:
//   0 property holds / success
//   2 usage, IO, or budget error
//   3 property fails (machine-checkable witness embedded in the report)
//   4 inconclusive (search budget exhausted)
// stdout carries exactly one JSON report; human summaries go to stderr.

#include <chrono>
#include <iostream>

#include <CLI11.hpp>

#include "prlab/complex_falsifier.hpp"
#include "prlab/json_io.hpp"
#include "prlab/nsp.hpp"
#include "prlab/retrievability.hpp"

namespace {

using prlab::json;

constexpr const char* kSchema = "prlab/1";
constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitFails = 3;
constexpr int kExitInconclusive = 4;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

json report_envelope(json command, const std::string& verdict, json witness) {
    json r;
    r["schema"] = kSchema;
    r["version"] = kVersion;
    r["command"] = std::move(command);
    r["verdict"] = verdict;
    r["witness"] = std::move(witness);
    return r;
}

// The report must be byte-identical across reruns and --jobs settings, so
// wall time goes to stderr only.
int emit(const json& report, int exit_code, const Timer& timer) {
    std::cout << report.dump(2) << "\n";
    std::cerr << "verdict: " << report["verdict"].get<std::string>() << " (" << timer.ms()
              << " ms)\n";
    return exit_code;
}

json collision_to_json(const prlab::Frame& f, const prlab::CollisionWitness& w) {
    prlab::validate_collision(f, w);
    json j;
    j["kind"] = "collision";
    j["x"] = prlab::ratvec_to_json(w.x);
    j["y"] = prlab::ratvec_to_json(w.y);
    j["k"] = w.sparsity_bound;
    j["validated"] = true;
    return j;
}

json nsp_violation_to_json(const prlab::Frame& f, std::size_t k, const prlab::NspViolation& v) {
    prlab::validate_nsp_violation(f, k, v);
    json j;
    j["kind"] = "nsp";
    j["T"] = prlab::index_set_to_json(v.t_set);
    j["eta"] = prlab::ratvec_to_json(v.eta);
    j["margin"] = prlab::rational_to_json(v.margin);
    j["validated"] = true;
    return j;
}

json phaseless_violation_to_json(const prlab::Frame& f, std::size_t k,
                                 const prlab::PhaselessNspViolation& w,
                                 prlab::SubsetScope scope) {
    prlab::validate_phaseless_violation(f, k, w);
    json j;
    j["kind"] = "phaseless-nsp";
    j["S"] = prlab::index_set_to_json(w.s_set);
    j["u"] = prlab::ratvec_to_json(w.u);
    j["v"] = prlab::ratvec_to_json(w.v);
    j["T"] = prlab::index_set_to_json(w.t_set);
    j["margin"] = prlab::rational_to_json(w.margin);
    j["policy"] = scope == prlab::SubsetScope::AllSubsets ? "all_subsets" : "cardinality_at_most_k";
    j["validated"] = true;
    return j;
}

json argmin_report_to_json(const prlab::ArgminReport& rep) {
    json j;
    j["optimal_value"] = rep.feasible ? json(prlab::to_string(rep.optimal_value)) : json("infeasible");
    json mins = json::array();
    for (const auto& cls : rep.minimizer_classes) mins.push_back(prlab::ratvec_to_json(cls));
    j["minimizers"] = mins;
    j["unique"] = rep.unique;
    json faces = json::array();
    for (const auto& face : rep.nonpoint_faces) {
        json fj;
        fj["eps"] = face.eps.to_string();
        fj["dim"] = face.dim;
        fj["vertex"] = prlab::ratvec_to_json(face.vertex);
        faces.push_back(fj);
    }
    j["nonpoint_faces"] = faces;
    json table = json::array();
    for (const auto& e : rep.per_epsilon) {
        json ej;
        ej["eps"] = e.eps.to_string();
        ej["value"] = e.feasible ? json(prlab::to_string(e.value)) : json("infeasible");
        table.push_back(ej);
    }
    j["per_epsilon"] = table;
    return j;
}

json trace_to_json(const prlab::SearchTrace& t) {
    json j;
    j["splits"] = t.splits;
    j["triples_examined"] = t.triples_examined;
    j["triples_total"] = t.triples_total;
    return j;
}

prlab::RatVec parse_vector_literal(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw prlab::IoError(std::string("cannot parse vector literal: ") + e.what());
    }
    return prlab::ratvec_from_json(j);
}

struct CommonArgs {
    std::string frame_path;
    unsigned jobs = 1;
};

int run_gen(const std::string& field, std::size_t d, std::size_t m, std::uint64_t seed,
            long bound, const std::string& out_path) {
    Timer timer;
    json cmd{{"name", "gen"}, {"field", field}, {"d", d},
             {"m", m},        {"seed", seed},   {"bound", bound},
             {"out", out_path}};
    if (field == "rational") {
        prlab::save_json_file(out_path, prlab::frame_to_json(prlab::random_frame(d, m, seed, bound)));
    } else {
        prlab::save_json_file(out_path,
                              prlab::complex_frame_to_json(prlab::random_complex_frame(d, m, seed)));
    }
    json rep = report_envelope(std::move(cmd), "ok", nullptr);
    rep["file"] = out_path;
    std::cerr << "wrote " << field << " frame d=" << d << " m=" << m << " to " << out_path << "\n";
    return emit(rep, kExitOk, timer);
}

int run_check_ksparse(const CommonArgs& a, std::size_t k) {
    Timer timer;
    const prlab::Frame f = prlab::frame_from_json(prlab::load_json_file(a.frame_path));
    if (f.d > 8 || f.m > 12 || k > 3)
        std::cerr << "warning: instance is outside the documented envelope (d <= 8, m <= 12, "
                     "k <= 3); expect long runtimes\n";
    const prlab::RetrievabilityReport r = prlab::is_k_sparse_pr_real(f, k, a.jobs);
    json cmd{{"name", "check"}, {"sub", "ksparse"}, {"frame", a.frame_path}, {"k", k}};
    json rep = report_envelope(std::move(cmd), r.retrievable ? "retrievable" : "not_retrievable",
                               r.witness ? collision_to_json(f, *r.witness) : json(nullptr));
    rep["trace"] = trace_to_json(r.trace);
    return emit(rep, r.retrievable ? kExitOk : kExitFails, timer);
}

int run_check_full(const CommonArgs& a) {
    Timer timer;
    const prlab::Frame f = prlab::frame_from_json(prlab::load_json_file(a.frame_path));
    const prlab::RetrievabilityReport r = prlab::is_full_pr_real(f, a.jobs);
    json cmd{{"name", "check"}, {"sub", "full"}, {"frame", a.frame_path}};
    json rep = report_envelope(std::move(cmd), r.retrievable ? "retrievable" : "not_retrievable",
                               r.witness ? collision_to_json(f, *r.witness) : json(nullptr));
    rep["trace"] = trace_to_json(r.trace);
    return emit(rep, r.retrievable ? kExitOk : kExitFails, timer);
}

int run_check_nsp(const CommonArgs& a, std::size_t k) {
    Timer timer;
    const prlab::Frame f = prlab::frame_from_json(prlab::load_json_file(a.frame_path));
    const prlab::NspClassicalResult r = prlab::check_nsp_classical(f, k, a.jobs);
    json cmd{{"name", "check"}, {"sub", "nsp"}, {"frame", a.frame_path}, {"k", k}};
    json rep = report_envelope(std::move(cmd), r.holds ? "holds" : "violation",
                               r.violation ? nsp_violation_to_json(f, k, *r.violation)
                                           : json(nullptr));
    rep["cells_total"] = r.cells_total;
    rep["cells_examined"] = r.cells_examined;
    return emit(rep, r.holds ? kExitOk : kExitFails, timer);
}

int run_check_nsp_phaseless(const CommonArgs& a, std::size_t k, const std::string& policy,
                            bool override_budget) {
    Timer timer;
    const prlab::Frame f = prlab::frame_from_json(prlab::load_json_file(a.frame_path));
    json cmd{{"name", "check"},   {"sub", "nsp-phaseless"},
             {"frame", a.frame_path}, {"k", k},
             {"policy", policy},  {"override_budget", override_budget}};

    auto run_scope = [&](prlab::SubsetScope scope) {
        prlab::NspPhaselessOptions opt;
        opt.scope = scope;
        opt.jobs = a.jobs;
        opt.override_budget = override_budget;
        return prlab::check_nsp_phaseless_real(f, k, opt);
    };

    if (policy == "both") {
        const prlab::NspPhaselessResult all = run_scope(prlab::SubsetScope::AllSubsets);
        const prlab::NspPhaselessResult card = run_scope(prlab::SubsetScope::CardinalityAtMostK);
        json rep = report_envelope(std::move(cmd), all.holds ? "holds" : "violation",
                                   all.violation
                                       ? phaseless_violation_to_json(
                                             f, k, *all.violation, prlab::SubsetScope::AllSubsets)
                                       : json(nullptr));
        json pol;
        pol["all_subsets"] = all.holds ? "holds" : "violation";
        pol["cardinality_at_most_k"] = card.holds ? "holds" : "violation";
        pol["agree"] = all.holds == card.holds;
        rep["policies"] = pol;
        return emit(rep, all.holds ? kExitOk : kExitFails, timer);
    }

    const prlab::SubsetScope scope = policy == "atmostk" ? prlab::SubsetScope::CardinalityAtMostK
                                                         : prlab::SubsetScope::AllSubsets;
    const prlab::NspPhaselessResult r = run_scope(scope);
    json rep = report_envelope(std::move(cmd), r.holds ? "holds" : "violation",
                               r.violation ? phaseless_violation_to_json(f, k, *r.violation, scope)
                                           : json(nullptr));
    rep["cells_total"] = r.cells_total;
    rep["cells_examined"] = r.cells_examined;
    return emit(rep, r.holds ? kExitOk : kExitFails, timer);
}

int run_solve(const CommonArgs& a, const std::string& b_path, const std::string& x0_literal,
              std::size_t cap) {
    Timer timer;
    const prlab::Frame f = prlab::frame_from_json(prlab::load_json_file(a.frame_path));
    json cmd{{"name", "solve"}, {"frame", a.frame_path}, {"cap", cap}};

    prlab::RatVec b;
    std::optional<prlab::RatVec> x0;
    if (!x0_literal.empty()) {
        x0 = parse_vector_literal(x0_literal);
        if (x0->size() != f.d) throw prlab::IoError("--x0 length does not match the frame dimension");
        b = prlab::measure_abs(f, *x0);
        cmd["x0"] = prlab::ratvec_to_json(*x0);
    } else {
        b = prlab::magnitude_from_json(prlab::load_json_file(b_path));
        if (b.size() != f.m) throw prlab::IoError("--b length does not match the frame size");
        cmd["b"] = b_path;
    }

    prlab::SolveOptions opt;
    opt.m_cap = cap;
    opt.jobs = a.jobs;
    const prlab::ArgminReport rep = prlab::solve_l1_phaseless_real({f, b}, opt);

    std::string verdict = "solved";
    int code = kExitOk;
    if (x0) {
        const bool recovered = rep.feasible && rep.nonpoint_faces.empty() &&
                               rep.minimizer_classes.size() == 1 &&
                               rep.minimizer_classes[0] == prlab::canonicalize_sign(*x0);
        verdict = recovered ? "recovered" : "not_recovered";
        code = recovered ? kExitOk : kExitFails;
    }
    json out = report_envelope(std::move(cmd), verdict, nullptr);
    out["report"] = argmin_report_to_json(rep);
    return emit(out, code, timer);
}

int run_collide(const CommonArgs& a, std::size_t k) {
    Timer timer;
    const prlab::Frame f = prlab::frame_from_json(prlab::load_json_file(a.frame_path));
    const prlab::CollisionWitness w = prlab::collide_below_2k(f, k);
    json cmd{{"name", "collide"}, {"frame", a.frame_path}, {"k", k}};
    json rep = report_envelope(std::move(cmd), "collision", collision_to_json(f, w));
    return emit(rep, kExitOk, timer);
}

int run_falsify(const CommonArgs& a, const std::string& which, std::size_t k,
                std::uint64_t budget, std::uint64_t seed) {
    Timer timer;
    const prlab::ComplexFrame f =
        prlab::complex_frame_from_json(prlab::load_json_file(a.frame_path));
    json cmd{{"name", "falsify"}, {"sub", which},   {"frame", a.frame_path},
             {"budget", budget},  {"seed", seed}};
    if (which == "thm33") cmd["k"] = k;

    const prlab::FalsifierOutcome out =
        which == "thm33" ? prlab::search_thm33_witness(f, k, budget, seed, a.jobs)
                         : prlab::search_thm42_witness(f, budget, seed, a.jobs);

    if (out.kind == prlab::FalsifyKind::WitnessFound) {
        json rep = report_envelope(std::move(cmd), "witness_found",
                                   prlab::partition_witness_to_json(*out.witness));
        rep["attempts"] = out.attempts;
        return emit(rep, kExitFails, timer);
    }
    if (out.kind == prlab::FalsifyKind::RankDeficient) {
        json w;
        w["kind"] = "rank-deficient";
        json eta = json::array();
        for (Eigen::Index i = 0; i < out.null_vector.size(); ++i)
            eta.push_back(json::array({out.null_vector(i).real(), out.null_vector(i).imag()}));
        w["eta"] = eta;
        json rep = report_envelope(std::move(cmd), "rank_deficient", std::move(w));
        return emit(rep, kExitFails, timer);
    }
    json rep = report_envelope(std::move(cmd), "inconclusive", nullptr);
    rep["attempts"] = out.attempts;
    rep["inconclusive"] = true;
    return emit(rep, kExitInconclusive, timer);
}

int run_bounds(std::size_t k, std::size_t d, const std::string& field) {
    Timer timer;
    const prlab::Field fld = field == "complex" ? prlab::Field::Complex : prlab::Field::Real;
    const prlab::MeasurementBound b = prlab::minimal_measurement_bound(k, d, fld);
    json cmd{{"name", "bounds"}, {"k", k}, {"d", d}, {"field", field}};
    json rep = report_envelope(std::move(cmd), "ok", nullptr);
    rep["bound"] = b.bound;
    rep["provenance"] = b.sufficient_only ? "sufficient for generic frames; minimality conjectured"
                                          : "necessary, and sufficient for generic frames";
    return emit(rep, kExitOk, timer);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact sparse phase retrieval laboratory"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a seeded random frame file");
    std::size_t gen_d = 0, gen_m = 0;
    std::uint64_t gen_seed = 0;
    long gen_bound = 1000;
    std::string gen_field = "rational", gen_out;
    gen->add_option("--d", gen_d, "ambient dimension")->required()->check(CLI::PositiveNumber);
    gen->add_option("--m", gen_m, "number of measurement vectors")
        ->required()
        ->check(CLI::PositiveNumber);
    gen->add_option("--field", gen_field)->check(CLI::IsMember({"rational", "complex"}));
    gen->add_option("--seed", gen_seed, "PRNG seed")->required();
    gen->add_option("--bound", gen_bound, "entry bound (rational field)")
        ->check(CLI::PositiveNumber);
    gen->add_option("--out", gen_out, "output path")->required();

    // check
    auto* check = app.add_subcommand("check", "decide a retrievability or null-space property");
    check->require_subcommand(1);
    CommonArgs chk;
    std::size_t chk_k = 1;
    std::string chk_policy = "all";
    bool chk_override = false;
    auto add_common = [&](CLI::App* sub, bool with_k) {
        sub->add_option("--frame", chk.frame_path, "frame JSON file")->required();
        sub->add_option("--jobs", chk.jobs, "worker count (output is jobs-invariant)")
            ->check(CLI::PositiveNumber);
        if (with_k) sub->add_option("--k", chk_k, "sparsity order")->required();
    };
    auto* ck = check->add_subcommand("ksparse", "k-sparse phase retrievability (exact)");
    add_common(ck, true);
    auto* cf = check->add_subcommand("full", "full phase retrievability (exact)");
    add_common(cf, false);
    auto* cn = check->add_subcommand("nsp", "classical null space property of order k");
    add_common(cn, true);
    auto* cp = check->add_subcommand("nsp-phaseless", "phaseless null space property of order k");
    add_common(cp, true);
    cp->add_option("--policy", chk_policy)->check(CLI::IsMember({"all", "atmostk", "both"}));
    cp->add_flag("--override-budget", chk_override, "run beyond the documented envelope");

    // solve
    auto* solve = app.add_subcommand("solve", "exact phaseless l1 minimization");
    CommonArgs sv;
    std::string sv_b, sv_x0;
    std::size_t sv_cap = 20;
    solve->add_option("--frame", sv.frame_path)->required();
    solve->add_option("--b", sv_b, "magnitude JSON file");
    solve->add_option("--x0", sv_x0, "signal literal, e.g. \"[1,0,\\\"-2/3\\\"]\"");
    solve->add_option("--jobs", sv.jobs)->check(CLI::PositiveNumber);
    solve->add_option("--cap", sv_cap, "pattern enumeration cap on m");

    // collide
    auto* collide = app.add_subcommand("collide", "construct a collision for m < 2k");
    CommonArgs cl;
    std::size_t cl_k = 1;
    collide->add_option("--frame", cl.frame_path)->required();
    collide->add_option("--k", cl_k)->required();

    // falsify
    auto* falsify = app.add_subcommand("falsify", "budgeted complex condition falsifier");
    falsify->require_subcommand(1);
    CommonArgs fa;
    std::size_t fa_k = 1;
    std::uint64_t fa_budget = 100000, fa_seed = 0;
    auto* f33 = falsify->add_subcommand("thm33", "k-sparse complex null-space condition");
    auto* f42 = falsify->add_subcommand("thm42", "full complex retrievability condition");
    for (CLI::App* sub : {f33, f42}) {
        sub->add_option("--frame", fa.frame_path)->required();
        sub->add_option("--budget", fa_budget)->required()->check(CLI::PositiveNumber);
        sub->add_option("--seed", fa_seed)->required();
        sub->add_option("--jobs", fa.jobs)->check(CLI::PositiveNumber);
    }
    f33->add_option("--k", fa_k)->required();

    // bounds
    auto* bounds = app.add_subcommand("bounds", "minimal measurement count for retrievability");
    std::size_t bd_k = 1, bd_d = 1;
    std::string bd_field = "real";
    bounds->add_option("--k", bd_k)->required();
    bounds->add_option("--d", bd_d)->required();
    bounds->add_option("--field", bd_field)->check(CLI::IsMember({"real", "complex"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*gen) return run_gen(gen_field, gen_d, gen_m, gen_seed, gen_bound, gen_out);
        if (*ck) return run_check_ksparse(chk, chk_k);
        if (*cf) return run_check_full(chk);
        if (*cn) return run_check_nsp(chk, chk_k);
        if (*cp) return run_check_nsp_phaseless(chk, chk_k, chk_policy, chk_override);
        if (*solve) {
            if (sv_b.empty() == sv_x0.empty())
                throw prlab::IoError("solve needs exactly one of --b or --x0");
            return run_solve(sv, sv_b, sv_x0, sv_cap);
        }
        if (*collide) return run_collide(cl, cl_k);
        if (*f33) return run_falsify(fa, "thm33", fa_k, fa_budget, fa_seed);
        if (*f42) return run_falsify(fa, "thm42", fa_k, fa_budget, fa_seed);
        if (*bounds) return run_bounds(bd_k, bd_d, bd_field);
    } catch (const prlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
