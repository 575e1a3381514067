// Command-line laboratory for branching random walks in random environment:
// certificate checks, exact/residual population simulation, hitting-time and
// shape estimation, coupled-run audits and seed audits. Outputs are CSV or
// JSON files plus a one-line summary on stdout.
//
// Exit codes: 0 success (whatever the verdict), 2 input/validation error,
// 3 numeric-integrity error (exact mode overflowed or a cap was exceeded).

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "brwre/coupling.hpp"
#include "brwre/criteria.hpp"
#include "brwre/estimators.hpp"
#include "brwre/induced.hpp"
#include "brwre/model_io.hpp"
#include "brwre/presets.hpp"
#include "brwre/simulator.hpp"

using nlohmann::json;
using namespace brwre;

namespace {

struct ModelFlags {
    std::string preset;
    std::string model_file;
    std::string alpha = "1/2";
    std::string a = "1/2";
    std::string p = "1/100";
    std::string alpha1 = "9/20";
    std::string alpha2 = "9/20";
    int nmin = 6;
    int nmax = 20;
};

void add_model_flags(CLI::App* cmd, ModelFlags& mf) {
    cmd->add_option("--preset", mf.preset, "preset name (see `brwre presets`)");
    cmd->add_option("--model", mf.model_file, "model description file (JSON)");
    cmd->add_option("--alpha", mf.alpha, "preset weight parameter, rational");
    cmd->add_option("--a", mf.a, "exx-q2 drift parameter, rational");
    cmd->add_option("--p", mf.p, "trap-family parameter, rational");
    cmd->add_option("--alpha1", mf.alpha1, "infexp weight, rational");
    cmd->add_option("--alpha2", mf.alpha2, "infexp weight, rational");
    cmd->add_option("--nmin", mf.nmin, "driftmix lower index");
    cmd->add_option("--nmax", mf.nmax, "driftmix upper index");
}

EnvironmentLaw law_from_flags(const ModelFlags& mf) {
    if (!mf.model_file.empty()) return load_model_file(mf.model_file);
    if (mf.preset.empty())
        throw std::invalid_argument("either --preset or --model is required");
    PresetParams params;
    params.alpha = Rat::parse(mf.alpha);
    params.a = Rat::parse(mf.a);
    params.p = Rat::parse(mf.p);
    params.alpha1 = Rat::parse(mf.alpha1);
    params.alpha2 = Rat::parse(mf.alpha2);
    params.nmin = mf.nmin;
    params.nmax = mf.nmax;
    return make_preset(mf.preset, params);
}

Site parse_site(const std::string& text, int dim) {
    Site s;
    std::stringstream ss(text);
    std::string part;
    int i = 0;
    while (std::getline(ss, part, ',')) {
        if (i >= dim) throw std::invalid_argument("site has too many coordinates: " + text);
        s[i++] = std::stoi(part);
    }
    if (i != dim) throw std::invalid_argument("site needs " + std::to_string(dim) +
                                              " coordinates: " + text);
    return s;
}

std::vector<int> parse_grid(const std::string& text, int fallback_max) {
    std::vector<int> grid;
    if (!text.empty()) {
        std::stringstream ss(text);
        std::string part;
        while (std::getline(ss, part, ',')) grid.push_back(std::stoi(part));
    } else {
        for (int n = 1; n <= fallback_max; n *= 2) grid.push_back(n);
    }
    return grid;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

json rat_vec_json(const std::vector<Rat>& v) {
    json arr = json::array();
    for (const auto& r : v) arr.push_back(r.str());
    return arr;
}

json classify_json(const ClassifyResult& res) {
    json j;
    j["conditions"] = {{"B", res.conditions.b},
                       {"E", res.conditions.e},
                       {"UE", res.conditions.ue ? json(res.conditions.ue->str()) : json(nullptr)},
                       {"A", res.conditions.a}};
    j["verdict"] = classification_name(res.verdict);
    json rec;
    rec["kind"] = recurrence_kind_name(res.recurrence.kind);
    rec["point_cloud_truncated"] = res.recurrence.point_cloud_truncated;
    if (!res.recurrence.witness_direction.empty())
        rec["witness_direction"] = rat_vec_json(res.recurrence.witness_direction);
    if (!res.recurrence.interior_certificate.empty()) {
        json pts = json::array();
        for (const auto& p : res.recurrence.interior_certificate) pts.push_back(rat_vec_json(p));
        rec["interior_certificate"] = pts;
    }
    j["recurrence"] = rec;
    if (res.transience) {
        const auto& c = *res.transience;
        json t;
        t["exact"] = c.exact;
        t["s"] = c.s;
        t["lambda"] = c.exact ? json(c.lambda_exact.str()) : json(c.lambda);
        t["lambda_float"] = c.lambda;
        t["marginal"] = c.marginal;
        t["per_law_values"] =
            c.exact ? rat_vec_json(c.per_law_values_exact) : json(c.per_law_values);
        j["condition_L"] = t;
    } else {
        j["condition_L"] = nullptr;
    }
    j["triv2"] = res.triv2 ? json{{"law_index", res.triv2->law_index},
                                  {"mean_self_offspring", res.triv2->mean_self_offspring.str()}}
                           : json(nullptr);
    j["triv1"] = res.triv1;
    return j;
}

int cmd_check(const ModelFlags& mf, const std::string& out_path) {
    EnvironmentLaw law = law_from_flags(mf);
    ClassifyResult res = classify(law);
    json j = classify_json(res);
    std::string text = j.dump(2);
    if (!out_path.empty()) write_file(out_path, text);
    std::cout << text << "\n";
    return 0;
}

int cmd_export(const ModelFlags& mf, const std::string& out_path) {
    EnvironmentLaw law = law_from_flags(mf);
    std::string text = model_to_json(law);
    if (out_path.empty())
        std::cout << text << "\n";
    else
        write_file(out_path, text);
    return 0;
}

int cmd_simulate(const ModelFlags& mf, std::uint64_t env_seed, std::uint64_t walk_seed,
                 int horizon, const std::string& mode, std::uint64_t threshold, int window,
                 std::uint64_t cap, const std::string& start_text, const std::string& out_path,
                 const std::string& dump_path) {
    EnvironmentLaw law = law_from_flags(mf);
    EnvironmentRealization env(law, env_seed);
    SimConfig cfg;
    cfg.mode = mode == "exact" ? SimMode::exact : SimMode::residual;
    cfg.residual_threshold = threshold;
    cfg.horizon = horizon;
    cfg.walk_seed = walk_seed;
    cfg.tilde_window = window;
    cfg.exact_population_cap = cap;
    cfg.track_sets = !dump_path.empty();
    Site start = start_text.empty() ? Site{} : parse_site(start_text, law.dimension());

    RunResult rr = run(env, cfg, start);
    std::ostringstream lines;
    for (const auto& rec : rr.records) {
        json j = {{"n", rec.n},
                  {"totalCount", rec.total_count},
                  {"occupiedCount", rec.occupied_count},
                  {"visitedCount", rec.visited_count},
                  {"saturated", rec.saturated}};
        lines << j.dump() << "\n";
    }
    if (!out_path.empty())
        write_file(out_path, lines.str());
    else
        std::cout << lines.str();

    if (!dump_path.empty()) {
        std::ostringstream dump;
        const auto& final_counts = rr.final_state.counts;
        std::vector<Site> sites;
        for (auto& [s, c] : final_counts)
            if (c > 0) sites.push_back(s);
        std::sort(sites.begin(), sites.end());
        for (const auto& s : sites) {
            for (int i = 0; i < law.dimension(); ++i) dump << (i ? "," : "") << s[i];
            dump << "," << final_counts.at(s) << "\n";
        }
        write_file(dump_path, dump.str());
    }
    std::cout << "simulate: mode=" << mode << " horizon=" << horizon
              << " total=" << rr.records.back().total_count
              << " visited=" << rr.records.back().visited_count
              << " saturated=" << (rr.saturated() ? "yes" : "no") << "\n";
    return 0;
}

int cmd_hitting(const ModelFlags& mf, const std::string& target_text, const std::string& mode,
                std::size_t replicas, std::uint64_t env_seed, std::uint64_t walk_seed,
                const std::string& grid_text, const std::string& sim_mode, int jobs,
                const std::string& out_path) {
    EnvironmentLaw law = law_from_flags(mf);
    Site target = parse_site(target_text, law.dimension());
    McConfig cfg;
    cfg.replicas = replicas;
    cfg.quenched = mode == "quenched";
    cfg.env_seed = env_seed;
    cfg.walk_seed = walk_seed;
    cfg.mode = sim_mode == "exact" ? SimMode::exact : SimMode::residual;
    cfg.jobs = jobs;
    std::vector<int> grid = parse_grid(grid_text, 256);

    TailCurve curve = estimate_tail(law, target, grid, cfg);
    TailOrderFit fit = fit_tail_order(curve, law.dimension());

    std::ostringstream csv;
    csv << "n,p_hat,lo,hi,censored\n";
    for (size_t i = 0; i < curve.grid.size(); ++i)
        csv << curve.grid[i] << "," << curve.survival[i] << "," << curve.lo[i] << ","
            << curve.hi[i] << "," << curve.censored_fraction << "\n";
    if (!out_path.empty())
        write_file(out_path, csv.str());
    else
        std::cout << csv.str();
    std::cout << "hitting: mode=" << mode << " replicas=" << replicas
              << " censored=" << curve.censored_fraction << " kappa_hat=" << fit.kappa_hat
              << " r2=" << fit.r2_kappa << (fit.heavy_tail ? " heavy-tail" : "")
              << (curve.any_saturated ? " saturated" : "") << "\n";
    return 0;
}

int cmd_shape(const ModelFlags& mf, int time, std::size_t replicas, int directions,
              const std::string& variants_text, int window, std::uint64_t env_seed,
              std::uint64_t walk_seed, int jobs, const std::string& out_path) {
    EnvironmentLaw law = law_from_flags(mf);
    McConfig cfg;
    cfg.env_seed = env_seed;
    cfg.walk_seed = walk_seed;
    cfg.jobs = jobs;
    ShapeVariants variants;
    variants.tilde_window = window;
    if (variants_text.find("bar") != std::string::npos) variants.bar_b = true;
    if (variants_text.find("tilde") != std::string::npos) variants.tilde_b = true;

    ShapeEstimate est = estimate_shape(law, time, replicas, directions, cfg, variants);

    std::ostringstream csv;
    for (int i = 0; i < law.dimension(); ++i) csv << "dir_" << i << ",";
    csv << "mean,sd,variant\n";
    auto emit = [&](const ShapeEstimate::Radii& r, const char* variant) {
        for (size_t j = 0; j < est.directions.size(); ++j) {
            for (double c : est.directions[j]) csv << c << ",";
            csv << r.mean[j] << "," << r.sd[j] << "," << variant << "\n";
        }
    };
    emit(est.b, "B");
    if (est.bar_b) emit(*est.bar_b, "barB");
    if (est.tilde_b) emit(*est.tilde_b, "tildeB");
    if (!out_path.empty())
        write_file(out_path, csv.str());
    else
        std::cout << csv.str();
    std::cout << "shape: time=" << time << " replicas=" << replicas
              << " convexity_defect=" << est.convexity_defect
              << (est.any_saturated ? " saturated" : "") << "\n";
    return 0;
}

int cmd_couple(const ModelFlags& mf, std::uint64_t env_seed, std::uint64_t draw_seed,
               int horizon, int triples, int seed_pairs, std::uint64_t cap,
               const std::string& out_path) {
    EnvironmentLaw law = law_from_flags(mf);
    std::size_t evaluated = 0, skipped = 0, violations = 0, domination_violations = 0;
    json reports = json::array();
    json evaluated_triples = json::array();

    for (int sp = 0; sp < seed_pairs; ++sp) {
        std::uint64_t es = mix64(env_seed + static_cast<std::uint64_t>(sp));
        std::uint64_t ds = mix64(draw_seed + 0x9E37ULL * static_cast<std::uint64_t>(sp));
        EnvironmentRealization env(law, es);

        // Probe run picks coupled starts among early-visited sites.
        CoupledFamily probe = coupled_run(env, ds, {}, horizon, cap);
        std::vector<Site> visited;
        for (auto& [site, t] : probe.t_from_origin)
            if (t > 0 && t <= horizon / 2) visited.push_back(site);
        std::sort(visited.begin(), visited.end());
        KeyedRng rng(mix64(es ^ ds));
        std::vector<Site> starts;
        int want_starts = std::max(1, triples / std::max(1, seed_pairs) / 2);
        for (int i = 0; i < want_starts && !visited.empty(); ++i)
            starts.push_back(visited[rng.u64(static_cast<std::uint64_t>(i)) % visited.size()]);
        std::sort(starts.begin(), starts.end());
        starts.erase(std::unique(starts.begin(), starts.end()), starts.end());

        CoupledFamily family = coupled_run(env, ds, starts, horizon, cap);
        std::vector<std::pair<Site, Site>> triple_list;
        int per_start = std::max(1, triples / std::max(1, seed_pairs) /
                                        std::max<int>(1, static_cast<int>(starts.size())));
        for (const auto& runz : family.runs) {
            std::vector<Site> ys;
            for (auto& [site, t] : runz.t)
                if (family.t0(site)) ys.push_back(site);
            std::sort(ys.begin(), ys.end());
            for (int i = 0; i < per_start && !ys.empty(); ++i)
                triple_list.emplace_back(
                    runz.z, ys[rng.u64(0xABCULL + static_cast<std::uint64_t>(i)) % ys.size()]);
            domination_violations += runz.domination_violations.size();
        }
        SubadditivityReport rep = subadditivity_audit(family, triple_list);
        evaluated += rep.evaluated;
        skipped += rep.skipped_censored;
        violations += rep.violations.size();
        for (const auto& r : rep.results)
            evaluated_triples.push_back({{"env_seed", es},
                                         {"draw_seed", ds},
                                         {"z", site_str(r.z, law.dimension())},
                                         {"y", site_str(r.y, law.dimension())},
                                         {"t0z", r.t0z},
                                         {"tzy", r.tzy},
                                         {"t0y", r.t0y},
                                         {"ok", r.ok}});
        for (const auto& v : rep.violations)
            reports.push_back({{"env_seed", es},
                               {"draw_seed", ds},
                               {"z", site_str(v.z, law.dimension())},
                               {"y", site_str(v.y, law.dimension())},
                               {"t0z", v.t0z},
                               {"tzy", v.tzy},
                               {"t0y", v.t0y}});
    }

    json j = {{"evaluated", evaluated},
              {"skipped_censored", skipped},
              {"subadditivity_violations", violations},
              {"domination_violations", domination_violations},
              {"triples", evaluated_triples},
              {"violations", reports}};
    if (!out_path.empty()) write_file(out_path, j.dump(2));
    std::cout << "couple: evaluated=" << evaluated << " skipped=" << skipped
              << " subadditivity_violations=" << violations
              << " domination_violations=" << domination_violations << "\n";
    return violations + domination_violations == 0 ? 0 : 3;
}

int cmd_seed_audit(const ModelFlags& mf, const std::string& patch_path, std::size_t replicas,
                   int safety, std::uint64_t env_seed, std::uint64_t walk_seed, int jobs,
                   const std::string& out_path) {
    EnvironmentLaw law = law_from_flags(mf);
    std::ifstream in(patch_path);
    if (!in) throw std::invalid_argument("cannot open patch file: " + patch_path);
    json pj = json::parse(in);

    EnvironmentPatch patch;
    for (const auto& entry : pj.at("sites")) {
        Site s{};
        auto coords = entry.at("site").get<std::vector<int>>();
        for (size_t i = 0; i < coords.size(); ++i) s[static_cast<int>(i)] = coords[i];
        int law_index = entry.at("law_index").get<int>();
        if (law_index < 0 || law_index >= static_cast<int>(law.support.size()))
            throw std::invalid_argument("patch law_index out of range");
        patch.sites[s] = law.support[static_cast<size_t>(law_index)];
    }
    std::vector<Site> w;
    for (const auto& coords : pj.at("W")) {
        Site s{};
        auto v = coords.get<std::vector<int>>();
        for (size_t i = 0; i < v.size(); ++i) s[static_cast<int>(i)] = v[i];
        w.push_back(s);
    }

    McConfig cfg;
    cfg.env_seed = env_seed;
    cfg.walk_seed = walk_seed;
    cfg.jobs = jobs;
    SeedAudit audit = seed_audit(law, patch, w, replicas, cfg, safety);

    json j = {{"rho_hat", audit.rho_hat},
              {"rho_lo", audit.rho_lo},
              {"epsilon", audit.epsilon_exact.str()},
              {"p1", audit.p1},
              {"p2", audit.p2},
              {"margin", audit.margin},
              {"replicas_per_site", audit.replicas_per_site}};
    json rates = json::array();
    for (auto& [site, rate] : audit.per_site_rate)
        rates.push_back({{"site", site_str(site, law.dimension())}, {"rate", rate}});
    j["per_site_rate"] = rates;
    if (!out_path.empty()) write_file(out_path, j.dump(2));
    std::cout << "seed-audit: rho_hat=" << audit.rho_hat << " epsilon=" << audit.epsilon
              << " margin=" << audit.margin
              << (audit.margin > 0 ? " supercritical" : " subcritical") << "\n";
    return 0;
}

int cmd_walk(const ModelFlags& mf, const std::string& rule_text,
             const std::string& direction_text, const std::string& start_text, int horizon,
             std::uint64_t env_seed, std::uint64_t walk_seed, const std::string& out_path) {
    EnvironmentLaw law = law_from_flags(mf);
    EnvironmentRealization env(law, env_seed);
    SelectionRule rule = SelectionRule::uniform();
    if (rule_text == "particle") rule = SelectionRule::particle_uniform();
    if (rule_text == "extremal") {
        std::vector<double> r;
        std::stringstream ss(direction_text);
        std::string part;
        while (std::getline(ss, part, ',')) r.push_back(std::stod(part));
        if (static_cast<int>(r.size()) != law.dimension())
            throw std::invalid_argument("--direction arity must match the dimension");
        rule = SelectionRule::r_extremal(r);
    }
    Site start = start_text.empty() ? Site{} : parse_site(start_text, law.dimension());
    std::vector<Site> path = induced_walk_run(env, rule, start, horizon, walk_seed);

    std::ostringstream csv;
    csv << "n";
    for (int i = 0; i < law.dimension(); ++i) csv << ",x_" << i;
    csv << "\n";
    for (size_t n = 0; n < path.size(); ++n) {
        csv << n;
        for (int i = 0; i < law.dimension(); ++i) csv << "," << path[n][i];
        csv << "\n";
    }
    if (!out_path.empty())
        write_file(out_path, csv.str());
    else
        std::cout << csv.str();
    std::cout << "walk: rule=" << rule_text << " steps=" << horizon << " end="
              << site_str(path.back(), law.dimension()) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"branching random walk in random environment laboratory"};
    app.require_subcommand(1);

    ModelFlags mf;
    std::string out_path, target = "1", mode = "annealed", sim_mode = "residual";
    std::string grid_text, variants_text = "b", start_text, dump_path, patch_path;
    std::string rule_text = "uniform", direction_text = "1";
    std::uint64_t env_seed = 1, walk_seed = 2, draw_seed = 3, cap = 1'000'000;
    std::uint64_t threshold = 4096;
    int horizon = 100, window = 32, time = 100, directions = 16, jobs = 1;
    int triples = 1000, seed_pairs = 10, safety = 4;
    std::size_t replicas = 1000;

    auto* presets = app.add_subcommand("presets", "list built-in presets");

    auto* check = app.add_subcommand("check", "conditions report, certificates and verdict");
    add_model_flags(check, mf);
    check->add_option("--out", out_path, "write the JSON report here");

    auto* exp = app.add_subcommand("export", "emit a preset in the model file format");
    add_model_flags(exp, mf);
    exp->add_option("--out", out_path, "output path");

    auto* sim = app.add_subcommand("simulate", "evolve the population, emit per-step records");
    add_model_flags(sim, mf);
    sim->add_option("--env-seed", env_seed);
    sim->add_option("--walk-seed", walk_seed);
    sim->add_option("--horizon", horizon);
    sim->add_option("--mode", sim_mode, "exact|residual");
    sim->add_option("--threshold", threshold, "residual split threshold");
    sim->add_option("--cap", cap, "exact-mode live-particle cap");
    sim->add_option("--window", window, "persistent-occupancy window");
    sim->add_option("--start", start_text, "start site, comma separated");
    sim->add_option("--out", out_path, "NDJSON trajectory path");
    sim->add_option("--dump-occupancy", dump_path, "final (site,count) CSV");

    auto* hit = app.add_subcommand("hitting", "hitting-time survival curve");
    add_model_flags(hit, mf);
    hit->add_option("--target", target, "target site, comma separated")->required();
    hit->add_option("--mode", mode, "annealed|quenched");
    hit->add_option("--replicas", replicas);
    hit->add_option("--env-seed", env_seed);
    hit->add_option("--walk-seed", walk_seed);
    hit->add_option("--grid", grid_text, "comma-separated horizons (default powers of 2)");
    hit->add_option("--sim-mode", sim_mode, "exact|residual");
    hit->add_option("--jobs", jobs);
    hit->add_option("--out", out_path, "CSV path");

    auto* shp = app.add_subcommand("shape", "directional radii of the visited set");
    add_model_flags(shp, mf);
    shp->add_option("--time", time);
    shp->add_option("--replicas", replicas);
    shp->add_option("--directions", directions);
    shp->add_option("--variants", variants_text, "subset of b,bar,tilde");
    shp->add_option("--window", window);
    shp->add_option("--env-seed", env_seed);
    shp->add_option("--walk-seed", walk_seed);
    shp->add_option("--jobs", jobs);
    shp->add_option("--out", out_path, "CSV path");

    auto* cpl = app.add_subcommand("couple", "coupled hitting times, subadditivity audit");
    add_model_flags(cpl, mf);
    cpl->add_option("--env-seed", env_seed);
    cpl->add_option("--draw-seed", draw_seed);
    cpl->add_option("--horizon", horizon);
    cpl->add_option("--triples", triples);
    cpl->add_option("--seed-pairs", seed_pairs);
    cpl->add_option("--cap", cap, "live-particle cap");
    cpl->add_option("--out", out_path, "JSON report path");

    auto* sa = app.add_subcommand("seed-audit", "restricted-run audit of a planted seed");
    add_model_flags(sa, mf);
    sa->add_option("--patch", patch_path, "patch JSON: sites, law indices, W")->required();
    sa->add_option("--replicas", replicas);
    sa->add_option("--safety", safety, "horizon = diameter * safety");
    sa->add_option("--env-seed", env_seed);
    sa->add_option("--walk-seed", walk_seed);
    sa->add_option("--jobs", jobs);
    sa->add_option("--out", out_path, "JSON report path");

    auto* wlk = app.add_subcommand("walk", "sample one induced random walk");
    add_model_flags(wlk, mf);
    wlk->add_option("--rule", rule_text, "uniform|particle|extremal");
    wlk->add_option("--direction", direction_text, "extremal direction");
    wlk->add_option("--start", start_text);
    wlk->add_option("--horizon", horizon);
    wlk->add_option("--env-seed", env_seed);
    wlk->add_option("--walk-seed", walk_seed);
    wlk->add_option("--out", out_path, "CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (presets->parsed()) {
            for (const auto& name : preset_names())
                std::cout << name << "  " << preset_description(name) << "\n";
            return 0;
        }
        if (check->parsed()) return cmd_check(mf, out_path);
        if (exp->parsed()) return cmd_export(mf, out_path);
        if (sim->parsed())
            return cmd_simulate(mf, env_seed, walk_seed, horizon, sim_mode, threshold, window,
                                cap, start_text, out_path, dump_path);
        if (hit->parsed())
            return cmd_hitting(mf, target, mode, replicas, env_seed, walk_seed, grid_text,
                               sim_mode, jobs, out_path);
        if (shp->parsed())
            return cmd_shape(mf, time, replicas, directions, variants_text, window, env_seed,
                             walk_seed, jobs, out_path);
        if (cpl->parsed())
            return cmd_couple(mf, env_seed, draw_seed, horizon, triples, seed_pairs, cap,
                              out_path);
        if (sa->parsed())
            return cmd_seed_audit(mf, patch_path, replicas, safety, env_seed, walk_seed, jobs,
                                  out_path);
        if (wlk->parsed())
            return cmd_walk(mf, rule_text, direction_text, start_text, horizon, env_seed,
                            walk_seed, out_path);
    } catch (const ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const ExactOverflow& e) {
        std::cerr << "integrity error: " << e.what() << "\n";
        return 3;
    } catch (const ExactPopulationCap& e) {
        std::cerr << "integrity error: " << e.what() << "\n";
        return 3;
    } catch (const PopulationCapExceeded& e) {
        std::cerr << "integrity error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
