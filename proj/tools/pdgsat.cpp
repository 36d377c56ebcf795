// Command line front end. Every subcommand is a thin adapter over the
// library: parse flags, call one function, format the payload. Payloads are
// deterministic; timing goes only into the optional --record file.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdgsat/density.hpp"
#include "pdgsat/enumerate.hpp"
#include "pdgsat/forbidden.hpp"
#include "pdgsat/sat.hpp"

using json = nlohmann::ordered_json;
using namespace pdgsat;

namespace {

constexpr const char* kVersion = "pdgsat 1.0.0";

std::string g_record_path;
std::string g_command_echo;

void emit_with_timing(const json& payload, double ms) {
    std::cout << payload.dump(2) << "\n";
    if (!g_record_path.empty()) {
        json record;
        record["schema"] = 1;
        record["command"] = g_command_echo;
        record["version"] = kVersion;
        record["timing_ms"] = ms;
        record["payload"] = payload;
        std::ofstream f(g_record_path);
        f << record.dump(2) << "\n";
    }
}

void emit(const json& payload) { emit_with_timing(payload, 0.0); }

ForbiddenFamily family_by_name(const std::string& name, int k) {
    if (name == "tk") return single_family(make_Tk(k));
    if (name == "fk") return generate_Fk(k);
    throw CLI::ValidationError("--family must be tk or fk");
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

json theta_payload(int n, int k, const std::string& family, const ThetaResult& r, bool final_dedup) {
    json j;
    j["schema"] = 1;
    j["n"] = n;
    j["k"] = k;
    j["family"] = family;
    j["theta"] = r.theta.str_pq();
    j["witness"] = to_text(r.witness);
    j["level_counts"] = r.level_counts;
    j["final_dedup"] = final_dedup;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exhaustive search and verification engine for Turan-type density problems on partially directed hypergraphs, with k-SAT function counting companions"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.add_option("--record", g_record_path, "write a run record (command, timing, payload) to FILE");

    {
        std::ostringstream echo;
        for (int i = 0; i < argc; ++i) echo << (i ? " " : "") << argv[i];
        g_command_echo = echo.str();
    }

    std::string default_checkpoint;
    if (const char* env = std::getenv("PDGSAT_CHECKPOINT_DIR")) default_checkpoint = env;

    // ---- gen-forbidden ----
    auto* gen = app.add_subcommand("gen-forbidden", "generate the forbidden family F_k, one graph per line");
    int gen_k = 3;
    bool gen_trace = false;
    gen->add_option("--k", gen_k, "uniformity (2..6)")->required();
    gen->add_flag("--trace", gen_trace, "append the witness construction trace");
    gen->callback([&] {
        ForbiddenFamily fam = generate_Fk(gen_k);
        for (size_t i = 0; i < fam.members.size(); ++i) {
            std::cout << to_text(fam.members[i]);
            if (gen_trace) std::cout << "  # " << fam.traces[i];
            std::cout << "\n";
        }
    });

    // ---- check-free ----
    auto* chk = app.add_subcommand("check-free", "test whether a PDG avoids the forbidden family");
    std::string chk_input, chk_family = "tk";
    chk->add_option("--input", chk_input, "pdg text, e.g. \"4 2 ; 0 1 , 0 2>2\"")->required();
    chk->add_option("--family", chk_family, "tk or fk");
    chk->callback([&] {
        Pdg g = parse_pdg(chk_input);
        ForbiddenFamily fam = family_by_name(chk_family, g.k);
        json j;
        j["schema"] = 1;
        j["input"] = to_text(g);
        j["family"] = chk_family;
        j["free"] = is_family_free(g, fam);
        emit(j);
    });

    // ---- enumerate ----
    auto* en = app.add_subcommand("enumerate", "enumerate family-free graphs and compute exact theta_max");
    int en_n = 0, en_k = 0, en_threads = 1, en_batches = 1, en_batch_index = -1;
    std::string en_family = "tk", en_checkpoint = default_checkpoint;
    bool en_final_no_dedup = false;
    uint64_t en_budget = 2'000'000'000ULL;
    en->add_option("--n", en_n, "vertex count")->required();
    en->add_option("--k", en_k, "uniformity")->required();
    en->add_option("--family", en_family, "tk or fk");
    en->add_option("--threads", en_threads, "worker threads (0 = auto); never changes the payload");
    en->add_option("--batches", en_batches, "final-level batch count");
    en->add_option("--batch-index", en_batch_index, "run only this batch and emit a partial record");
    en->add_option("--checkpoint", en_checkpoint, "checkpoint directory for resumable runs");
    en->add_option("--budget", en_budget, "max expansions per level before aborting with a checkpoint");
    en->add_flag("--final-no-dedup", en_final_no_dedup, "skip isomorphism reduction at the last level");
    en->callback([&] {
        auto t0 = std::chrono::steady_clock::now();
        ForbiddenFamily fam = family_by_name(en_family, en_k);
        EnumerateOptions opts;
        opts.threads = en_threads;
        opts.final_dedup = !en_final_no_dedup;
        opts.batches = en_batches;
        opts.checkpoint_dir = en_checkpoint;
        opts.max_expansions_per_level = en_budget;
        if (en_batches > 1 && opts.final_dedup)
            throw CLI::ValidationError("--batches > 1 requires --final-no-dedup");
        json j;
        if (en_batch_index >= 0) {
            BatchResult r = theta_max_batch(en_n, en_k, fam, en_batches, en_batch_index, opts);
            j["schema"] = 1;
            j["partial"] = true;
            j["n"] = r.n;
            j["k"] = r.k;
            j["family"] = en_family;
            j["batches"] = r.batches;
            j["batch_index"] = r.batch_index;
            j["free_count"] = r.free_count;
            j["theta"] = r.theta ? json(r.theta->str_pq()) : json(nullptr);
            j["witness"] = r.witness ? json(to_text(*r.witness)) : json(nullptr);
        } else {
            ThetaResult r = theta_max(en_n, en_k, fam, opts);
            j = theta_payload(en_n, en_k, en_family, r, opts.final_dedup);
        }
        auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        emit_with_timing(j, ms);
    });

    // ---- enumerate-merge ----
    auto* em = app.add_subcommand("enumerate-merge", "merge partial batch records into a full record");
    std::vector<std::string> em_files;
    em->add_option("files", em_files, "partial JSON records")->required();
    em->callback([&] {
        std::vector<BatchResult> parts;
        std::string family;
        for (const auto& path : em_files) {
            json j = json::parse(read_file(path));
            BatchResult r;
            r.n = j.at("n");
            r.k = j.at("k");
            r.batches = j.at("batches");
            r.batch_index = j.at("batch_index");
            r.free_count = j.at("free_count");
            if (!j.at("theta").is_null()) r.theta = Rat::parse(j.at("theta").get<std::string>());
            if (!j.at("witness").is_null()) r.witness = parse_pdg(j.at("witness").get<std::string>());
            family = j.at("family");
            parts.push_back(std::move(r));
        }
        BatchResult merged = merge_batches(parts);
        json j;
        j["schema"] = 1;
        j["n"] = merged.n;
        j["k"] = merged.k;
        j["family"] = family;
        j["batches_merged"] = merged.batches;
        j["free_count"] = merged.free_count;
        j["theta"] = merged.theta ? json(merged.theta->str_pq()) : json(nullptr);
        j["witness"] = merged.witness ? json(to_text(*merged.witness)) : json(nullptr);
        emit(j);
    });

    // ---- theta-table ----
    auto* tt = app.add_subcommand("theta-table", "exact theta_max over a range of (n, k)");
    int tt_max_n = 6;
    std::string tt_krange = "2:6", tt_format = "json", tt_family = "tk";
    int tt_threads = 0;
    tt->add_option("--max-n", tt_max_n, "largest vertex count");
    tt->add_option("--k-range", tt_krange, "a:b inclusive");
    tt->add_option("--format", tt_format, "json or csv");
    tt->add_option("--family", tt_family, "tk or fk");
    tt->add_option("--threads", tt_threads, "worker threads (0 = auto)");
    tt->callback([&] {
        auto colon = tt_krange.find(':');
        if (colon == std::string::npos) throw CLI::ValidationError("--k-range must be a:b");
        int klo = std::stoi(tt_krange.substr(0, colon));
        int khi = std::stoi(tt_krange.substr(colon + 1));
        EnumerateOptions opts;
        opts.threads = tt_threads;
        opts.final_dedup = false;
        std::vector<std::tuple<int, int, Rat>> cells;
        for (int n = klo; n <= tt_max_n; ++n)
            for (int k = klo; k <= std::min(khi, n); ++k) {
                ForbiddenFamily fam = family_by_name(tt_family, k);
                cells.emplace_back(n, k, theta_max(n, k, fam, opts).theta);
            }
        if (tt_format == "csv") {
            std::cout << "n";
            for (int k = klo; k <= khi; ++k) std::cout << ",k=" << k;
            std::cout << "\n";
            for (int n = klo; n <= tt_max_n; ++n) {
                std::cout << n;
                for (int k = klo; k <= khi; ++k) {
                    std::cout << ",";
                    for (auto& [cn, ck, th] : cells)
                        if (cn == n && ck == k) std::cout << th.str();
                }
                std::cout << "\n";
            }
        } else {
            json j;
            j["schema"] = 1;
            j["family"] = tt_family;
            j["cells"] = json::array();
            for (auto& [n, k, th] : cells) {
                json c;
                c["n"] = n;
                c["k"] = k;
                c["theta"] = th.str_pq();
                j["cells"].push_back(c);
            }
            emit(j);
        }
    });

    // ---- lift ----
    auto* lf = app.add_subcommand("lift", "averaging lift ((k-1)*theta + 1)/k");
    std::string lf_theta;
    int lf_k = 0;
    lf->add_option("--theta", lf_theta, "rational p/q")->required();
    lf->add_option("--k", lf_k, "target uniformity (>= 3)")->required();
    lf->callback([&] {
        Rat t = Rat::parse(lf_theta);
        json j;
        j["schema"] = 1;
        j["input"] = t.str_pq();
        j["k"] = lf_k;
        j["theta"] = lift_theta(t, lf_k).str_pq();
        emit(j);
    });

    // ---- sat-minimal ----
    auto* sm = app.add_subcommand("sat-minimal", "minimality check with per-clause witnesses");
    std::string sm_formula;
    sm->add_option("--formula", sm_formula, "e.g. \"0 1, 0 2, 1 ~3, ~2 3\"")->required();
    sm->callback([&] {
        Formula f = parse_formula(sm_formula);
        MinimalityReport r = minimality_report(f);
        json j;
        j["schema"] = 1;
        j["formula"] = to_text(f);
        j["minimal"] = r.minimal;
        j["witnesses"] = json::array();
        for (const auto& w : r.witnesses) j["witnesses"].push_back(w ? json(*w) : json(nullptr));
        emit(j);
    });

    // ---- sat-type ----
    auto* st = app.add_subcommand("sat-type", "type map of a semisimple formula");
    std::string st_formula;
    st->add_option("--formula", st_formula, "semisimple k-SAT formula")->required();
    st->callback([&] {
        Formula f = parse_formula(st_formula);
        json j;
        j["schema"] = 1;
        j["formula"] = to_text(f);
        j["type"] = to_text(type_of(f));
        emit(j);
    });

    // ---- sat-count ----
    auto* sc = app.add_subcommand("sat-count", "exact count of distinct k-SAT functions");
    int sc_n = 0, sc_k = 0;
    bool sc_unate = false;
    sc->add_option("--n", sc_n, "variables")->required();
    sc->add_option("--k", sc_k, "clause width")->required();
    sc->add_flag("--unate", sc_unate, "count unate functions instead");
    sc->callback([&] {
        json j;
        j["schema"] = 1;
        j["n"] = sc_n;
        j["k"] = sc_k;
        j["unate"] = sc_unate;
        j["count"] = sc_unate ? count_unate_functions(sc_n, sc_k) : count_functions(sc_n, sc_k);
        emit(j);
    });

    // ---- sat-unate ----
    auto* su = app.add_subcommand("sat-unate", "unateness, distance to unate, literal counts");
    std::string su_formula;
    su->add_option("--formula", su_formula, "k-SAT formula")->required();
    su->callback([&] {
        Formula f = parse_formula(su_formula);
        LiteralCounts lc = literal_counts(f);
        json j;
        j["schema"] = 1;
        j["formula"] = to_text(f);
        j["unate"] = is_unate(f);
        j["distance"] = distance_to_unate(f);
        j["literal_counts"] = json::array();
        for (int v = 0; v < f.n; ++v) j["literal_counts"].push_back({lc.pos[v], lc.neg[v]});
        emit(j);
    });

    // ---- fm-density ----
    auto* fd = app.add_subcommand("fm-density", "minimum-triangular-edge density curve f(rho)");
    double fd_rho = 0;
    fd->add_option("--rho", fd_rho, "edge density in [0,1]")->required();
    fd->callback([&] {
        json j;
        j["schema"] = 1;
        j["rho"] = fd_rho;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12f", fm_density(fd_rho));
        j["f"] = std::string(buf);
        emit(j);
    });

    // ---- check-system ----
    auto* cs = app.add_subcommand("check-system", "feasibility search for the phi system");
    std::string cs_phi, cs_res = "1/1000";
    cs->add_option("--phi", cs_phi, "rational p/q")->required();
    cs->add_option("--res", cs_res, "grid resolution as a rational, e.g. 1/1000");
    cs->callback([&] {
        FeasibilityVerdict v = check_system(Rat::parse(cs_phi), Rat::parse(cs_res));
        json j;
        j["schema"] = 1;
        j["phi"] = Rat::parse(cs_phi).str_pq();
        j["resolution"] = v.resolution;
        j["feasible"] = v.feasible;
        if (v.feasible) {
            json p;
            p["x"] = v.point->x.str_pq();
            p["y"] = v.point->y.str_pq();
            p["z"] = v.point->z.str_pq();
            p["a"] = v.point->a.str_pq();
            p["b"] = v.point->b.str_pq();
            p["c"] = v.point->c.str_pq();
            j["point"] = p;
        } else {
            j["max_min_margin"] = v.max_min_margin;
        }
        emit(j);
    });

    // ---- kk-check ----
    auto* kk = app.add_subcommand("kk-check", "simplex-count bound for a k-uniform hypergraph");
    std::string kk_file;
    kk->add_option("--file", kk_file, "hypergraph file, one edge per line")->required();
    kk->callback([&] {
        Hypergraph h = parse_hypergraph(read_file(kk_file));
        KkReport r = kruskal_katona_check(h);
        json j;
        j["schema"] = 1;
        j["n"] = h.n;
        j["k"] = h.k;
        j["edges"] = h.edges.size();
        j["simplices"] = r.simplices;
        j["holds"] = r.holds;
        emit(j);
    });

    // ---- orient ----
    auto* ori = app.add_subcommand("orient", "low-codegree orientation via bipartite matching");
    std::string ori_file;
    ori->add_option("--file", ori_file, "hypergraph file, one edge per line")->required();
    ori->callback([&] {
        Hypergraph h = parse_hypergraph(read_file(ori_file));
        Orientation o = orient_hypergraph(h);
        json j;
        j["schema"] = 1;
        j["n"] = h.n;
        j["k"] = h.k;
        j["edges"] = h.edges.size();
        j["codegree_bound"] = o.codegree_bound;
        j["heads"] = o.heads;
        j["audit_ok"] = orientation_respects_bound(h, o);
        emit(j);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded; checkpoint written to " << e.checkpoint_path << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
