// Acceptance suite: nine criteria covering the lower-bound construction,
// generic retrievability at the threshold, the full-retrievability check,
// both null-space-property equivalences, solver/oracle agreement, the
// complex falsifier, and CLI determinism. Prints one PASS/FAIL line per
// criterion and exits with the number of failures.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "cli_runner.hpp"
#include "prlab/complex_falsifier.hpp"
#include "prlab/json_io.hpp"
#include "prlab/nsp.hpp"
#include "prlab/retrievability.hpp"

using namespace prlab;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        pass = false;
        if (!detail.empty()) detail += "; ";
        detail += why;
    }
};

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool phased_recovers(const Frame& f, const RatVec& x0) {
    const L1AffineResult r = l1_min_affine(f.analysis(), measure_signed(f, x0));
    return r.feasible && r.is_unique && r.point == x0;
}

bool phaseless_recovers(const ArgminReport& rep, const RatVec& x0) {
    return rep.feasible && rep.nonpoint_faces.empty() && rep.minimizer_classes.size() == 1 &&
           rep.minimizer_classes[0] == canonicalize_sign(x0);
}

// Exact l1 minimization over an affine family {p + span(H)}: the value,
// whether the minimum point is unique, and the point when it is.
struct FamilyMin {
    Rational value;
    bool unique = false;
    RatVec point;
};

FamilyMin l1_min_over_family(const OracleFamily& fam, std::size_t d) {
    const std::size_t fdim = fam.homogeneous.size();
    auto build = [&](const Rational* pinned) {
        LpProblem lp;
        const std::size_t extra = pinned ? 1 : 0;
        const std::size_t nvars = 2 * d + fdim;
        lp.constraints = RatMatrix(d + extra, nvars);
        lp.rhs.assign(d + extra, Rational(0));
        for (std::size_t i = 0; i < d; ++i) {
            lp.constraints.at(i, 2 * i) = Rational(1);
            lp.constraints.at(i, 2 * i + 1) = Rational(-1);
            for (std::size_t t = 0; t < fdim; ++t)
                lp.constraints.at(i, 2 * d + t) = -fam.homogeneous[t][i];
            lp.rhs[i] = fam.particular[i];
        }
        if (pinned) {
            for (std::size_t j = 0; j < 2 * d; ++j) lp.constraints.at(d, j) = Rational(1);
            lp.rhs[d] = *pinned;
        }
        lp.objective.assign(nvars, Rational(0));
        lp.signs.assign(nvars, VarSign::NonNegative);
        for (std::size_t t = 0; t < fdim; ++t) lp.signs[2 * d + t] = VarSign::Free;
        return lp;
    };

    LpProblem base = build(nullptr);
    for (std::size_t j = 0; j < 2 * d; ++j) base.objective[j] = Rational(-1);
    const auto opt = std::get<LpOptimal>(lp_solve_exact(base));

    FamilyMin out;
    out.value = -opt.value;
    out.point.assign(d, Rational(0));
    for (std::size_t i = 0; i < d; ++i) out.point[i] = opt.point[2 * i] - opt.point[2 * i + 1];

    out.unique = true;
    LpProblem face = build(&out.value);
    for (std::size_t i = 0; i < d && out.unique; ++i) {
        Rational lohi[2];
        for (int dir = 0; dir < 2; ++dir) {
            face.objective.assign(face.objective.size(), Rational(0));
            face.objective[2 * i] = Rational(dir == 0 ? -1 : 1);
            face.objective[2 * i + 1] = Rational(dir == 0 ? 1 : -1);
            const auto po = std::get<LpOptimal>(lp_solve_exact(face));
            lohi[dir] = dir == 0 ? -po.value : po.value;
        }
        if (lohi[0] != lohi[1]) out.unique = false;
    }
    return out;
}

// Criterion 7 accumulator: the k-sparse members of the solver's argmin set
// must coincide exactly with the oracle's minimum-l1 feasible sign classes.
// Oracle families are resolved exactly: a family only matters if its l1
// minimum ties the global optimum, in which case its minimum is either an
// isolated class or a face that the solver must have reported too.
void check_solver_oracle(const Frame& f, std::size_t k, const RatVec& b,
                         const ArgminReport& rep, Outcome& c7, const std::string& tag) {
    const OracleResult oracle = l0_oracle_solutions({f, b}, k);
    const KSparseArgmin members = argmin_k_sparse_members(f, b, k, rep);

    if (!rep.feasible) {
        if (!oracle.classes.empty() || !oracle.families.empty())
            c7.fail(tag + ": solver infeasible but the oracle found solutions");
        return;
    }

    std::vector<RatVec> oracle_optimal;
    auto insert_sorted = [&](RatVec cls) {
        auto it = std::lower_bound(oracle_optimal.begin(), oracle_optimal.end(), cls, lex_less);
        if (it == oracle_optimal.end() || *it != cls) oracle_optimal.insert(it, std::move(cls));
    };
    for (const auto& cls : oracle.classes) {
        if (l1_norm(cls) < rep.optimal_value) {
            c7.fail(tag + ": oracle found a feasible class below the solver optimum");
            return;
        }
        if (l1_norm(cls) == rep.optimal_value) insert_sorted(cls);
    }

    std::vector<std::vector<std::size_t>> oracle_face_supports;
    for (const auto& fam : oracle.families) {
        const FamilyMin fm = l1_min_over_family(fam, f.d);
        if (fm.value < rep.optimal_value) {
            c7.fail(tag + ": oracle family dips below the solver optimum");
            return;
        }
        if (fm.value > rep.optimal_value) continue;
        if (fm.unique) {
            insert_sorted(canonicalize_sign(fm.point));
        } else {
            oracle_face_supports.push_back(fam.support);
        }
    }

    if (oracle_optimal != members.classes) {
        c7.fail(tag + ": k-sparse argmin members differ from the oracle classes");
        return;
    }
    // Optimal faces must be seen by both sides, matched on their supports.
    for (const auto& fam : members.families) {
        bool seen = false;
        for (const auto& s : oracle_face_supports) seen = seen || s == fam.support;
        if (!seen) c7.fail(tag + ": solver argmin face has no oracle counterpart");
    }
    for (const auto& s : oracle_face_supports) {
        bool seen = false;
        for (const auto& fam : members.families) seen = seen || fam.support == s;
        if (!seen) c7.fail(tag + ": oracle optimal face has no solver counterpart");
    }
}

Outcome criterion1() {
    Outcome out;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Frame f = random_frame(6, 5, seed);
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const CollisionWitness w = collide_below_2k(f, 3);
            validate_collision(f, w); // exact magnitudes, sign classes, sparsity
            if (l0_count(w.x) > 3 || l0_count(w.y) > 3)
                out.fail("seed " + std::to_string(seed) + ": sparsity bound violated");
        } catch (const std::exception& e) {
            out.fail("seed " + std::to_string(seed) + ": " + e.what());
        }
        const double dt = seconds_since(t0);
        if (dt >= 1.0)
            out.fail("seed " + std::to_string(seed) + ": took " + std::to_string(dt) + " s");
    }
    return out;
}

Outcome criterion2() {
    Outcome out;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Frame f = random_frame(6, 4, seed);
        const auto t0 = std::chrono::steady_clock::now();
        const RetrievabilityReport r = is_k_sparse_pr_real(f, 2);
        const double dt = seconds_since(t0);
        if (!r.retrievable) out.fail("seed " + std::to_string(seed) + ": not retrievable");
        if (dt >= 300.0)
            out.fail("seed " + std::to_string(seed) + ": took " + std::to_string(dt) + " s");
    }
    return out;
}

Outcome criterion3() {
    Outcome out;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Frame f = random_frame(6, 3, seed);
        const RetrievabilityReport r = is_k_sparse_pr_real(f, 2);
        if (r.retrievable || !r.witness) {
            out.fail("seed " + std::to_string(seed) + ": expected a collision witness");
            continue;
        }
        try {
            validate_collision(f, *r.witness);
        } catch (const std::exception& e) {
            out.fail("seed " + std::to_string(seed) + ": " + e.what());
        }
    }
    return out;
}

Outcome criterion4() {
    Outcome out;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto t0 = std::chrono::steady_clock::now();
        if (!is_full_pr_real(random_frame(3, 5, seed)).retrievable)
            out.fail("m=5 seed " + std::to_string(seed) + ": expected retrievable");
        const RetrievabilityReport bad = is_full_pr_real(random_frame(3, 4, seed));
        if (bad.retrievable || !bad.witness)
            out.fail("m=4 seed " + std::to_string(seed) + ": expected a violation");
        const double dt = seconds_since(t0);
        if (dt >= 10.0)
            out.fail("seed " + std::to_string(seed) + ": took " + std::to_string(dt) + " s");
    }
    return out;
}

void criterion5_and7(Outcome& c5, Outcome& c7) {
    struct Cfg {
        std::size_t d, m, k;
    };
    std::vector<Cfg> combos;
    for (std::size_t d : {3, 4})
        for (std::size_t m : {3, 4, 5, 6})
            for (std::size_t k : {1, 2}) combos.push_back({d, m, k});

    for (std::size_t i = 0; i < 30; ++i) {
        const Cfg cfg = combos[i % combos.size()];
        const std::uint64_t seed = 1000 + i;
        const Frame f = random_frame(cfg.d, cfg.m, seed);
        const std::string tag = "frame#" + std::to_string(i);

        const NspClassicalResult nsp = check_nsp_classical(f, cfg.k);
        SplitMix64 rng(2000 + i);
        bool all_recovered = true;
        for (int trial = 0; trial < 50; ++trial) {
            const RatVec x0 = random_k_sparse(rng, cfg.d, cfg.k, 100);
            const bool ok = phased_recovers(f, x0);
            all_recovered = all_recovered && ok;

            const RatVec b = measure_abs(f, x0);
            const ArgminReport rep = solve_l1_phaseless_real({f, b});
            check_solver_oracle(f, cfg.k, b, rep, c7, tag);
        }
        if (nsp.holds && !all_recovered)
            c5.fail(tag + ": NSP holds but a phased recovery failed");
        if (!nsp.holds) {
            // the violation supplies a concrete failing signal eta_T
            RatVec x0(f.d);
            for (std::size_t idx : nsp.violation->t_set) x0[idx] = nsp.violation->eta[idx];
            if (is_zero_vec(x0) || phased_recovers(f, x0))
                c5.fail(tag + ": violation did not yield a failing instance");
        }
    }
}

void criterion6_and7(Outcome& c6, Outcome& c7) {
    struct Cfg {
        std::size_t d, m, k;
        std::uint64_t seed;
        long bound;
    };
    const std::vector<Cfg> ensemble = {
        {2, 4, 1, 300, 1000}, {3, 6, 1, 310, 1000}, {4, 8, 1, 320, 1000}, {5, 8, 1, 330, 1000},
        {3, 8, 2, 340, 1000}, {4, 8, 2, 350, 1000}, {3, 5, 2, 370, 1000}, {5, 7, 1, 390, 1000},
        {2, 3, 1, 380, 1000}, {2, 2, 1, 420, 1000}, {3, 3, 2, 360, 1000}, {3, 3, 2, 361, 1000},
        {3, 4, 2, 400, 1000}, {3, 4, 2, 401, 1000}, {4, 5, 2, 450, 1000}, {5, 6, 2, 451, 1000},
        {3, 4, 2, 430, 1},    {3, 5, 2, 432, 1},    {2, 3, 1, 441, 1},    {4, 8, 2, 454, 1},
    };
    std::size_t holds_count = 0, violation_count = 0;
    for (std::size_t i = 0; i < ensemble.size(); ++i) {
        const Cfg cfg = ensemble[i];
        const Frame f = random_frame(cfg.d, cfg.m, cfg.seed, cfg.bound);
        const std::string tag = "phaseless#" + std::to_string(i);
        const NspPhaselessResult r = check_nsp_phaseless_real(f, cfg.k);
        if (r.holds) {
            ++holds_count;
            const std::uint64_t rec_seed = 5000 + i;
            const RecoverySummary s = recovery_experiment(f, cfg.k, 50, rec_seed);
            if (s.successes != 50)
                c6.fail(tag + ": property holds but recovery succeeded only " +
                        std::to_string(s.successes) + "/50");
            SplitMix64 rng(rec_seed);
            for (int trial = 0; trial < 50; ++trial) {
                const RatVec x0 = random_k_sparse(rng, cfg.d, cfg.k, 100);
                const RatVec b = measure_abs(f, x0);
                check_solver_oracle(f, cfg.k, b, solve_l1_phaseless_real({f, b}), c7, tag);
            }
        } else {
            ++violation_count;
            try {
                const FailureInstance inst =
                    failure_instance_from_violation(f, cfg.k, *r.violation);
                if (phaseless_recovers(inst.report, inst.x0))
                    c6.fail(tag + ": violation but the argmin is still {+-x0}");
                check_solver_oracle(f, cfg.k, measure_abs(f, inst.x0), inst.report, c7, tag);
            } catch (const std::exception& e) {
                c6.fail(tag + ": " + e.what());
            }
        }
    }
    if (holds_count == 0) c6.fail("ensemble exercised no holding frames");
    if (violation_count == 0) c6.fail("ensemble exercised no violating frames");
}

Outcome criterion8() {
    Outcome out;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto t0 = std::chrono::steady_clock::now();
        const ComplexFrame f = ComplexFrame::from_rational(random_frame(3, 6, seed));
        const FalsifierOutcome r = search_thm42_witness(f, 100000, seed);
        const double dt = seconds_since(t0);
        if (r.kind != FalsifyKind::WitnessFound) {
            out.fail("real seed " + std::to_string(seed) + ": no witness");
        } else if (r.witness->max_residual > 1e-8) {
            out.fail("real seed " + std::to_string(seed) + ": residual too large");
        }
        if (dt >= 120.0)
            out.fail("real seed " + std::to_string(seed) + ": took " + std::to_string(dt) + " s");
    }
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto t0 = std::chrono::steady_clock::now();
        const ComplexFrame f = random_complex_frame(4, 6, 100 + seed);
        const FalsifierOutcome r = search_thm33_witness(f, 2, 100000, seed);
        const double dt = seconds_since(t0);
        if (r.kind != FalsifyKind::Inconclusive)
            out.fail("generic seed " + std::to_string(seed) + ": expected inconclusive none-found");
        if (dt >= 120.0)
            out.fail("generic seed " + std::to_string(seed) + ": took " + std::to_string(dt) +
                     " s");
    }
    return out;
}

Outcome criterion9() {
    using prlab::testing::run_cli;
    Outcome out;
    const auto dir = std::filesystem::temp_directory_path() / "prlab_acceptance";
    std::filesystem::create_directories(dir);

    const std::string f64 = (dir / "c9_r64.json").string();
    if (run_cli("gen --d 6 --m 4 --field rational --seed 0 --out " + f64).exit_code != 0)
        out.fail("gen failed");
    const std::string f36 = (dir / "c9_r36.json").string();
    save_json_file(f36, frame_to_json(random_frame(3, 6, 0)));
    const std::string c46 = (dir / "c9_c46.json").string();
    if (run_cli("gen --d 4 --m 6 --field complex --seed 100 --out " + c46).exit_code != 0)
        out.fail("gen complex failed");
    const std::string f34 = (dir / "c9_r34.json").string();
    save_json_file(f34, frame_to_json(random_frame(3, 4, 400)));
    const std::string f65 = (dir / "c9_r65.json").string();
    save_json_file(f65, frame_to_json(random_frame(6, 5, 0)));

    const std::vector<std::string> commands = {
        "check ksparse --frame " + f64 + " --k 2",
        "check full --frame " + f36,
        "check nsp --frame " + f34 + " --k 1",
        "check nsp-phaseless --frame " + f34 + " --k 2",
        "solve --frame " + f64 + " --x0 \"[3,0,0,-2,0,0]\"",
        "collide --frame " + f65 + " --k 3",
        "falsify thm42 --frame " + f36 + " --budget 20000 --seed 3",
        "falsify thm33 --frame " + c46 + " --k 2 --budget 5000 --seed 7",
        "bounds --k 3 --d 6 --field real",
    };
    for (const std::string& cmd : commands) {
        const auto base = run_cli(cmd);
        const auto rerun = run_cli(cmd);
        const auto jobs3 = run_cli(cmd + " --jobs 3");
        if (base.out.empty()) out.fail("no output: " + cmd);
        if (base.out != rerun.out) out.fail("rerun differs: " + cmd);
        if (cmd.rfind("bounds", 0) != 0 && cmd.rfind("collide", 0) != 0) {
            if (base.out != jobs3.out) out.fail("jobs=3 differs: " + cmd);
        }
        if (base.exit_code != rerun.exit_code) out.fail("exit code differs: " + cmd);
    }
    return out;
}

} // namespace

int main() {
    struct Entry {
        std::string name;
        Outcome outcome;
    };
    std::vector<Entry> entries;

    entries.push_back({"C1 lower-bound construction (d=6, k=3, m=5, 20 seeds)", criterion1()});
    entries.push_back({"C2 generic k-sparse retrievability at m=2k (d=6, k=2, m=4)", criterion2()});
    entries.push_back({"C3 threshold sharpness at m=3 with validated witnesses", criterion3()});
    entries.push_back({"C4 full-retrievability check (d=3: m=5 yes, m=4 no)", criterion4()});

    Outcome c5, c6, c7;
    criterion5_and7(c5, c7);
    criterion6_and7(c6, c7);
    entries.push_back({"C5 classical NSP <=> phased l1 recovery (30 frames x 50 trials)", c5});
    entries.push_back({"C6 phaseless NSP <=> phaseless l1 recovery (20 frames)", c6});
    entries.push_back({"C7 solver/oracle equivalence on every instance of C5-C6", c7});
    entries.push_back({"C8 complex falsifier: real-entried found, generic inconclusive", criterion8()});
    entries.push_back({"C9 byte-identical reports across reruns and --jobs", criterion9()});

    int failures = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const Entry& e = entries[i];
        if (e.outcome.pass) {
            std::printf("PASS %s\n", e.name.c_str());
        } else {
            ++failures;
            std::printf("FAIL %s [%s]\n", e.name.c_str(), e.outcome.detail.c_str());
        }
    }
    return failures;
}
