#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <fmt/format.h>
#include <unistd.h>

#include "ransomgame/cli.hpp"
#include "ransomgame/montecarlo.hpp"
#include "ransomgame/protocol/end_to_end.hpp"
#include "ransomgame/reputation.hpp"
#include "ransomgame/sampling.hpp"
#include "ransomgame/strategy.hpp"

using namespace ransomgame;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

// Diagnostics go to stderr; stdout carries one line per criterion.
std::ostream& diag() { return std::cerr; }

bool same_round(const std::optional<int>& a, const std::optional<int>& b) { return a == b; }

Outcome criterion1() {
    Rng rng(1001);
    int ok = 0;
    for (int t = 0; t < 200; ++t) {
        const int n = 2 + static_cast<int>(rng.below(7));
        const GameInstance inst = random_instance(rng, n);
        const Reputation worst = Reputation::worst(n);
        const VictimPolicy p = victim_policy(inst, worst);
        const double profit = attacker_expected_profit(inst, worst, p).expected_profit;
        const bool good = p.abort_round == 1 && profit == inst.sale(1);
        if (good) ++ok;
        else diag() << fmt::format("  c1 instance {}: abort_round {} profit {} A_1 {}\n", t,
                                   p.abort_round.value_or(-1), profit, inst.sale(1));
    }
    return {ok == 200, fmt::format("{}/200 exact", ok)};
}

Outcome criterion2() {
    Rng rng(1002);
    int ok = 0;
    for (int t = 0; t < 500; ++t) {
        const int n = 1 + static_cast<int>(rng.below(8));
        const GameInstance inst = random_instance(rng, n);
        const Reputation rep = random_reputation(rng, n);
        const VictimPolicy a = victim_policy(inst, rep);
        const VictimPolicy b = enumerate_best_response(inst, rep);
        const double scale = std::max(1.0, std::abs(b.expected_loss));
        const bool good = same_round(a.abort_round, b.abort_round) &&
                          std::abs(a.expected_loss - b.expected_loss) <= 1e-9 * scale;
        if (good) ++ok;
        else diag() << fmt::format("  c2 pair {}: recursion ({}, {}) enumeration ({}, {})\n", t,
                                   a.abort_round.value_or(0), a.expected_loss, b.abort_round.value_or(0),
                                   b.expected_loss);
    }
    return {ok == 500, fmt::format("{}/500 agree, rel tol 1e-9", ok)};
}

Outcome criterion3() {
    Rng rng(1003);
    int agree = 0;
    int ties = 0;
    for (int t = 0; t < 1000; ++t) {
        const double R = rng.uniform(0.0, 1000.0);
        const double V = rng.uniform(0.0, 1000.0);
        const double L1 = rng.uniform(0.0, 1000.0);
        const double br = rng.uniform();
        const double b1 = rng.uniform();
        const double diff = -R - (1.0 - br) * L1 + br * (V - b1 * L1) + L1;
        if (std::abs(diff) <= 1e-9 * std::max({1.0, R, V, L1})) {
            ++ties;
            continue;
        }
        if (decide_single_round(R, V, L1, br, b1) == (diff > 0.0)) ++agree;
        else diag() << fmt::format("  c3 draw {}: R {} V {} L1 {} br {} b1 {}\n", t, R, V, L1, br, b1);
    }
    return {agree == 1000 - ties, fmt::format("{}/{} non-ties agree", agree, 1000 - ties)};
}

Outcome criterion4() {
    Rng rng(1004);
    int ok = 0;
    for (int t = 0; t < 100; ++t) {
        const int n = 1 + static_cast<int>(rng.below(3));
        const GameInstance inst = random_instance(rng, n);
        const OptimalReputationResult lp = optimal_reputation(inst);
        const GridSearchResult grid = grid_search_reputation(inst, 0.02);
        const double slack = 0.02 * inst.data_value;
        if (lp.expected_profit >= grid.profit - slack) {
            ++ok;
        } else {
            diag() << fmt::format("  c4 instance {} n={}: lp {:.6f} (case {}) grid {:.6f} slack {:.6f}\n", t, n,
                                  lp.expected_profit, lp.case_index, grid.profit, slack);
        }
    }
    return {ok >= 95, fmt::format("{}/100 within 0.02 V of the 0.02 grid (need 95)", ok)};
}

Outcome criterion5() {
    const double V = 500.0;
    const Profiles p = build_profiles(V, 6, DecayProfile::linear(), 0.7);
    int ok = 0;
    std::string failing;
    for (double cr : {0.0, 20.0}) {
        for (int N : {2, 3, 5}) {
            const GameInstance inst =
                make_overcharge_instance(V, 6, N * V + p.losses[0], 0.1, DecayProfile::linear(), 0.7, cr);
            const OverchargeBound b = overcharge_bound(inst, 0.1);
            diag() << fmt::format("  c5 C_r={} N={}: profit {:.9f} bound {:.9f} {}\n", cr, N, b.optimal_profit,
                                  b.bound, b.holds ? "holds" : "fails");
            if (b.holds) ++ok;
            else failing += fmt::format(" (C_r={},N={})", cr, N);
        }
    }
    return {ok == 6, fmt::format("{}/6 strictly above the bound{}", ok, failing.empty() ? "" : "; failing" + failing)};
}

Outcome criterion6() {
    int ok = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        ScenarioConfig cfg;
        cfg.seed = seed;
        const auto r = compare_scenarios(cfg, {ReputationMode::kPerfectSingle, ReputationMode::kPerfectMulti}, 4);
        if (r[1].total_profit > r[0].total_profit) ++ok;
        if (seed <= 3)
            diag() << fmt::format("  c6 seed {}: single {:.3f} multi {:.3f}\n", seed, r[0].total_profit,
                                  r[1].total_profit);
    }
    return {ok >= 27, fmt::format("{}/30 seeds multi > single (need 27)", ok)};
}

Outcome criterion7() {
    int ok = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        ScenarioConfig cfg;
        cfg.seed = seed;
        cfg.value_lo = 200.0;
        cfg.value_hi = 1200.0;
        const auto r = compare_scenarios(
            cfg, {ReputationMode::kPerfectSingle, ReputationMode::kPerfectMulti, ReputationMode::kOptimalMulti}, 4);
        const double single = r[0].total_profit;
        const double multi = r[1].total_profit;
        const double opt = r[2].total_profit;
        const bool close = std::abs(opt - multi) <= 0.1 * std::max(std::abs(opt), std::abs(multi));
        if (close && opt >= single && multi >= single) ++ok;
        if (seed <= 3)
            diag() << fmt::format("  c7 seed {}: single {:.3f} perfect_multi {:.3f} optimal_multi {:.3f}\n", seed,
                                  single, multi, opt);
    }
    return {ok >= 24, fmt::format("{}/30 seeds within 10% and above single (need 24)", ok)};
}

Outcome criterion8() {
    const std::vector<double> grid{800, 900, 1000, 1100, 1200};
    const auto rows = reputation_sweep(500.0, 6, DecayProfile::quadratic(), 0.7, 0.0, grid);
    bool strict = true;
    std::string values;
    for (const auto& r : rows) {
        strict &= r.reputation.beta_r >= 0.9;
        values += fmt::format(" {:.4f}", r.reputation.beta_r);
    }
    if (strict) return {true, "beta_r >= 0.9 at R =" + values};

    // Divergence report between the printed closed forms and the tree.
    std::size_t lp_rows = 0;
    for (double total : grid) {
        const GameInstance inst = make_instance(500.0, 6, total, 0.5, DecayProfile::quadratic(), 0.7);
        for (int c = 1; c <= 6; ++c) {
            for (const auto& d : lp_divergence(inst, c)) {
                ++lp_rows;
                diag() << fmt::format("  c8 lp R={} case {} {} x_{}: printed {:.6f} generated {:.6f}\n", total,
                                      d.case_i, d.row, d.variable, d.printed, d.generated);
            }
        }
    }
    const auto ep = random_ep_divergence(8, 20, 6);
    double worst = 0.0;
    std::size_t ep_rows = 0;
    for (const auto& row : ep) {
        if (row.abs_diff > 1e-9 * std::max(1.0, std::abs(row.tree))) {
            ++ep_rows;
            worst = std::max(worst, row.abs_diff);
        }
    }
    diag() << fmt::format("  c8 divergence report: {} LP coefficient mismatches, {} of {} EP points differ "
                          "(max abs diff {:.6f})\n",
                          lp_rows, ep_rows, ep.size(), worst);

    bool monotone = true;
    for (size_t i = 1; i < rows.size(); ++i) monotone &= rows[i].reputation.beta_r >= rows[i - 1].reputation.beta_r;
    std::vector<double> wide;
    for (double r = 100; r <= 1200; r += 100) wide.push_back(r);
    const auto wide_rows = reputation_sweep(500.0, 6, DecayProfile::quadratic(), 0.7, 0.0, wide);
    double best = -1.0;
    double best_at = 0.0;
    for (const auto& r : wide_rows) {
        if (r.reputation.beta_r > best) {
            best = r.reputation.beta_r;
            best_at = r.total_ransom;
        }
    }
    const bool downgraded = monotone && best_at >= 800.0;
    return {downgraded,
            fmt::format("downgraded: beta_r{} over R = 800..1200 is {}non-decreasing, maximum {:.4f} first reached at "
                        "R = {:.0f} on 100..1200; strict >= 0.9 not met; divergence report emitted ({} LP, {} EP rows)",
                        values, monotone ? "" : "NOT ", best, best_at, lp_rows, ep_rows)};
}

Outcome criterion9() {
    const protocol::GroupParams params = protocol::setup(12, 1);
    int honest = 0;
    for (int t = 0; t < 100; ++t) {
        protocol::EndToEndScenario sc;
        sc.seed = 9000 + t;
        sc.data_size = 64;
        const auto r = protocol::run_end_to_end(params, sc);
        if (r.data_recovered && r.recovered == r.original && r.attacker_gain == sc.demand) ++honest;
    }

    Rng rng(1009);
    int rejected = 0;
    const protocol::KeyedBundle kb = [&] {
        protocol::Bytes data(64);
        for (auto& b : data) b = static_cast<std::uint8_t>(rng.next() >> 56);
        return protocol::encrypt_with_proof(params, data, rng);
    }();
    for (int t = 0; t < 100; ++t) {
        protocol::VeckBundle b = kb.bundle;
        const size_t j = rng.below(b.ciphertext.size());
        mpz_class* target = nullptr;
        switch (rng.below(8)) {
            case 0: target = &b.ciphertext[j].u; break;
            case 1: target = &b.ciphertext[j].v; break;
            case 2: target = &b.commitments[j]; break;
            case 3: target = &b.proofs[j].a1; break;
            case 4: target = &b.proofs[j].a2; break;
            case 5: target = &b.proofs[j].c; break;
            case 6: target = &b.proofs[j].z; break;
            default: target = &b.vk; break;
        }
        mpz_combit(target->get_mpz_t(), static_cast<mp_bitcnt_t>(rng.below(256)));
        if (!protocol::verify_cipher_data(params, b).accept) ++rejected;
    }

    int refunded = 0;
    for (int t = 0; t < 50; ++t) {
        protocol::EndToEndScenario sc;
        sc.seed = 9200 + t;
        sc.data_size = 32;
        sc.rounds = 1 + static_cast<int>(rng.below(6));
        sc.attacker = protocol::AttackerBehavior::kWithholdKey;
        const auto r = protocol::run_end_to_end(params, sc);
        if (r.final_state.phase == protocol::Phase::kRefunded && r.attacker_gain == 0) ++refunded;
    }

    int conserved = 0;
    for (int t = 0; t < 50; ++t) {
        protocol::EndToEndScenario sc;
        sc.seed = 9300 + t;
        sc.data_size = 32;
        sc.rounds = 2 + static_cast<int>(rng.below(7));
        sc.cancel_at = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(sc.rounds)));
        const auto r = protocol::run_end_to_end(params, sc);
        const auto amounts = protocol::split_demand(sc.demand, sc.rounds, sc.first_round_fraction);
        std::int64_t expected = 0;
        for (int i = 0; i < *sc.cancel_at; ++i) expected += amounts[i];
        if (r.conservation_ok && r.attacker_gain == expected && r.attacker_gain + r.victim_refund == sc.demand)
            ++conserved;
    }
    const bool pass = honest == 100 && rejected == 100 && refunded == 50 && conserved == 50;
    return {pass, fmt::format("honest {}/100, tamper rejected {}/100, withhold refunded {}/50, cancel conserved {}/50",
                              honest, rejected, refunded, conserved)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome criterion10() {
    const fs::path root = fs::temp_directory_path() / ("ransomgame_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    std::ostringstream out;
    std::ostringstream err;
    const int a = cli::run({"simulate", "--preset", "fig2", "--seed", "7", "--threads", "1", "--out",
                            (root / "t1").string()},
                           out, err);
    const int b = cli::run({"simulate", "--preset", "fig2", "--seed", "7", "--threads", "8", "--out",
                            (root / "t8").string()},
                           out, err);
    bool identical = a == 0 && b == 0;
    for (const char* f : {"victims.csv", "rounds.csv"}) {
        const std::string x = slurp(root / "t1" / f);
        identical &= !x.empty() && x == slurp(root / "t8" / f);
    }
    fs::remove_all(root);
    if (!identical) diag() << "  c10 cli: " << err.str() << '\n';

    const protocol::GroupParams params = protocol::setup(12, 1);
    int replayed = 0;
    for (int k = 1; k <= 6; ++k) {
        protocol::EndToEndScenario sc;
        sc.rounds = 6;
        sc.cancel_at = k;
        sc.seed = 7;
        const auto r = protocol::run_end_to_end(params, sc);
        if (protocol::replay(params, r.genesis_state, r.actions) == r.final_state) ++replayed;
    }
    return {identical && replayed == 6,
            fmt::format("fig2 seed 7 CSVs {} at 1 and 8 threads; transcript replay {}/6", identical ? "identical" : "DIFFER",
                        replayed)};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "worst reputation: abort at round 1, profit A_1", 1.0, criterion1},
        {2, "backward induction equals brute force", 10.0, criterion2},
        {3, "single-round rule matches the utility sign", 1.0, criterion3},
        {4, "LP optimum vs grid search", 300.0, criterion4},
        {5, "overcharge profit exceeds (1-gamma)V + A_1 - C_r", 60.0, criterion5},
        {6, "multi-round beats single-round, overcharged victims", 120.0, criterion6},
        {7, "mixed values: optimal and perfect multi-round similar", 300.0, criterion7},
        {8, "key-return probability high for large ransoms", 120.0, criterion8},
        {9, "protocol soundness and safety", 120.0, criterion9},
        {10, "determinism of simulations and transcripts", 60.0, criterion10},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= c.limit_s;
        const bool pass = o.pass && in_time;
        if (!pass) ++failed;
        std::cout << fmt::format("[{}] criterion {:>2}: {} | {} | {:.2f}s (limit {:.0f}s){}", pass ? "PASS" : "FAIL", c.id,
                                 c.name, o.detail, secs, c.limit_s, in_time ? "" : " TIMEOUT")
                  << std::endl;
    }
    std::cout << fmt::format("{} of {} criteria passed", criteria.size() - failed, criteria.size()) << std::endl;
    return failed == 0 ? 0 : 1;
}
