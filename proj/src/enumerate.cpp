#include "pdgsat/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <bit>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace pdgsat {

LevelSet LevelSet::seed(int k) {
    LevelSet s;
    s.level = k - 1;
    s.k = k;
    Pdg g = make_pdg(k - 1, k);
    s.graphs.emplace(canonical_form(g), g);
    return s;
}

Rat lift_theta(const Rat& theta, int k) {
    if (k < 3) throw std::invalid_argument("lift requires k >= 3");
    return (Rat(k - 1) * theta + Rat(1)) / Rat(k);
}

namespace {

inline bool slot_any(const std::vector<uint8_t>& slot, uint16_t mask) { return slot[mask] != 0; }
inline bool slot_head(const std::vector<uint8_t>& slot, uint16_t mask, int h) {
    return slot[mask] == uint8_t(2 + h);
}

}  // namespace

bool tk_created_by(const std::vector<uint8_t>& slot, int n, int k, const Edge& e) {
    assert(std::popcount(e.vertices) == k);
    (void)k;
    const uint16_t verts = e.vertices;
    const uint16_t all = uint16_t((1 << n) - 1);
    const uint16_t outside = uint16_t(all & ~verts);

    // The k-triangle has core C (k-2 vertices) and edges P1 = C+{a,b},
    // P2 = C+{a,c} directed at c, P3 = C+{b,c}. The new edge e is tried in
    // each role; P1 and P3 accept e with any direction.

    // Role P2: e must be directed; its head plays c.
    if (e.directed()) {
        const int h = e.head;
        const uint16_t m = uint16_t(verts & ~(1 << h));  // C + {a}
        for (uint16_t wbits = outside; wbits;) {
            const int w = std::countr_zero(wbits);
            wbits &= uint16_t(wbits - 1);
            if (!slot_any(slot, uint16_t(m | 1 << w))) continue;  // P1 = C+{a,b}
            for (uint16_t ubits = m; ubits;) {
                const int u = std::countr_zero(ubits);
                ubits &= uint16_t(ubits - 1);
                // P3 = C+{b,c} with a=u, b=w
                if (slot_any(slot, uint16_t((m & ~(1 << u)) | (1 << w) | (1 << h)))) return true;
            }
        }
    }

    // Role P1: choose a=u, b=v within e, c=h outside.
    for (uint16_t ubits = verts; ubits;) {
        const int u = std::countr_zero(ubits);
        ubits &= uint16_t(ubits - 1);
        for (uint16_t vbits = verts; vbits;) {
            const int v = std::countr_zero(vbits);
            vbits &= uint16_t(vbits - 1);
            if (u == v) continue;
            const uint16_t p2base = uint16_t(verts & ~(1 << v));  // C + {a}, gets c
            const uint16_t p3base = uint16_t(verts & ~(1 << u));  // C + {b}, gets c
            for (uint16_t hbits = outside; hbits;) {
                const int h = std::countr_zero(hbits);
                hbits &= uint16_t(hbits - 1);
                if (slot_head(slot, uint16_t(p2base | 1 << h), h) &&
                    slot_any(slot, uint16_t(p3base | 1 << h)))
                    return true;
            }
        }
    }

    // Role P3: choose b=v, c=h within e, a=u outside.
    for (uint16_t vbits = verts; vbits;) {
        const int v = std::countr_zero(vbits);
        vbits &= uint16_t(vbits - 1);
        for (uint16_t hbits = verts; hbits;) {
            const int h = std::countr_zero(hbits);
            hbits &= uint16_t(hbits - 1);
            if (v == h) continue;
            const uint16_t p1base = uint16_t(verts & ~(1 << h));  // C + {b}, gets a
            const uint16_t p2base = uint16_t(verts & ~(1 << v));  // C + {c}, gets a
            for (uint16_t ubits = outside; ubits;) {
                const int u = std::countr_zero(ubits);
                ubits &= uint16_t(ubits - 1);
                if (slot_any(slot, uint16_t(p1base | 1 << u)) &&
                    slot_head(slot, uint16_t(p2base | 1 << u), h))
                    return true;
            }
        }
    }

    return false;
}

namespace {

// Backtracking for pattern_created_by: extend a partial pattern->host map.
struct AnchoredSearch {
    const std::vector<uint8_t>* slot;
    const Pdg* pattern;
    int host_n;
    std::vector<int> assign;  // pattern vertex -> host vertex
    uint16_t used = 0;

    bool check_edge(const Edge& pe) const {
        uint16_t image = 0;
        for (int u = 0; u < pattern->n; ++u) {
            if (!(pe.vertices >> u & 1)) continue;
            if (assign[u] < 0) return true;  // incomplete, checked later
            image |= uint16_t(1) << assign[u];
        }
        if (!pe.directed()) return slot_any(*slot, image);
        return slot_head(*slot, image, assign[pe.head]);
    }

    bool extend() {
        int pv = -1;
        for (int v = 0; v < pattern->n; ++v)
            if (assign[v] < 0) { pv = v; break; }
        if (pv < 0) return true;
        for (int hv = 0; hv < host_n; ++hv) {
            if (used >> hv & 1) continue;
            assign[pv] = hv;
            used |= uint16_t(1) << hv;
            bool ok = true;
            for (const Edge& pe : pattern->edges)
                if ((pe.vertices >> pv & 1) && !check_edge(pe)) { ok = false; break; }
            if (ok && extend()) return true;
            assign[pv] = -1;
            used &= ~(uint16_t(1) << hv);
        }
        return false;
    }
};

}  // namespace

bool pattern_created_by(const std::vector<uint8_t>& slot, int n, const Pdg& pattern, const Edge& e) {
    std::vector<int> everts;
    for (int v = 0; v < n; ++v)
        if (e.vertices >> v & 1) everts.push_back(v);
    const int k = int(everts.size());

    for (size_t pi = 0; pi < pattern.edges.size(); ++pi) {
        const Edge& pe = pattern.edges[pi];
        std::vector<int> pverts;
        for (int v = 0; v < pattern.n; ++v)
            if (pe.vertices >> v & 1) pverts.push_back(v);
        if (int(pverts.size()) != k) continue;
        if (pe.directed() && !e.directed()) continue;

        std::vector<int> perm(everts);
        std::sort(perm.begin(), perm.end());
        do {
            bool ok = true;
            for (int i = 0; i < k && ok; ++i)
                if (pe.directed() && pverts[i] == pe.head && perm[i] != e.head) ok = false;
            if (!ok) continue;
            AnchoredSearch s;
            s.slot = &slot;
            s.pattern = &pattern;
            s.host_n = n;
            s.assign.assign(pattern.n, -1);
            s.used = 0;
            for (int i = 0; i < k; ++i) {
                s.assign[pverts[i]] = perm[i];
                s.used |= uint16_t(1) << perm[i];
            }
            // anchored edges already match e; verify other fully-placed edges
            bool consistent = true;
            for (const Edge& q : pattern.edges)
                if (&q != &pe && !s.check_edge(q)) { consistent = false; break; }
            if (consistent && s.extend()) return true;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return false;
}

namespace {

struct GrowStats {
    std::map<CanonicalForm, Pdg> classes;  // when dedup
    uint64_t emitted = 0;
    std::optional<Rat> theta;
    std::optional<CanonicalForm> witness_form;
};

// Depth-first expansion of one base graph: every k-subset through the new
// vertex gets one of the states {absent, undirected, head choices}, pruning a
// state as soon as it creates a forbidden pattern (containment is monotone
// under edge addition, so the whole subtree dies with it).
struct Grower {
    int n = 0, k = 0;
    const ForbiddenFamily* family = nullptr;
    bool family_is_tk = false;
    bool dedup = true;
    bool track_theta = false;
    long long slots_total = 0;

    std::vector<uint16_t> slots;
    std::vector<uint8_t> slot_state;
    Pdg work;
    int eu = 0, ed = 0;
    GrowStats stats;
    std::atomic<uint64_t>* expansions = nullptr;
    uint64_t budget = 0;
    bool aborted = false;

    void init(int n_, int k_, const ForbiddenFamily& fam) {
        n = n_;
        k = k_;
        family = &fam;
        slot_state.assign(size_t(1) << n, 0);
        slots.clear();
        const uint16_t newbit = uint16_t(1) << (n - 1);
        for (uint16_t m = 0; m < (uint16_t(1) << n); ++m)
            if ((m & newbit) && std::popcount(m) == k) slots.push_back(m);
        slots_total = binomial(n, k);
    }

    void load_base(const Pdg& base) {
        work = base;
        work.n = n;
        std::fill(slot_state.begin(), slot_state.end(), 0);
        eu = ed = 0;
        for (const Edge& e : work.edges) {
            slot_state[e.vertices] = e.directed() ? uint8_t(2 + e.head) : uint8_t(1);
            e.directed() ? ++ed : ++eu;
        }
    }

    bool creates_forbidden(const Edge& e) const {
        if (family_is_tk) return tk_created_by(slot_state, n, k, e);
        for (const Pdg& m : family->members)
            if (pattern_created_by(slot_state, n, m, e)) return true;
        return false;
    }

    void emit() {
        stats.emitted++;
        if (expansions) {
            uint64_t seen = expansions->fetch_add(1, std::memory_order_relaxed) + 1;
            if (seen > budget) { aborted = true; return; }
        }
        if (dedup) {
            CanonicalForm form = canonical_form(work);
            auto it = stats.classes.find(form);
            if (it == stats.classes.end()) stats.classes.emplace(form, form.to_pdg());
        }
        if (track_theta && ed > 0) {
            Rat cand(slots_total - eu, ed);
            if (!stats.theta || cand < *stats.theta) {
                stats.theta = cand;
                stats.witness_form = canonical_form(work);
            } else if (cand == *stats.theta) {
                CanonicalForm form = canonical_form(work);
                if (form < *stats.witness_form) stats.witness_form = form;
            }
        }
    }

    void dfs(size_t si) {
        if (aborted) return;
        if (si == slots.size()) { emit(); return; }
        dfs(si + 1);  // no edge on this k-subset
        const uint16_t mask = slots[si];
        Edge e;
        e.vertices = mask;
        e.head = kNoHead;
        push(e);
        if (!creates_forbidden(e)) dfs(si + 1);
        pop(e);
        for (uint16_t hb = mask; hb;) {
            const int h = std::countr_zero(hb);
            hb &= uint16_t(hb - 1);
            e.head = uint8_t(h);
            push(e);
            if (!creates_forbidden(e)) dfs(si + 1);
            pop(e);
        }
    }

    void push(const Edge& e) {
        work.edges.push_back(e);
        slot_state[e.vertices] = e.directed() ? uint8_t(2 + e.head) : uint8_t(1);
        e.directed() ? ++ed : ++eu;
    }

    void pop(const Edge& e) {
        work.edges.pop_back();
        slot_state[e.vertices] = 0;
        e.directed() ? --ed : --eu;
    }
};

bool family_is_single_tk(const ForbiddenFamily& fam) {
    if (fam.members.size() != 1) return false;
    Pdg t = make_Tk(fam.k);
    const Pdg& m = fam.members[0];
    if (m.n != t.n || m.edges.size() != t.edges.size()) return false;
    return canonical_form(m) == canonical_form(t);
}

std::vector<const Pdg*> sorted_bases(const LevelSet& prev) {
    std::vector<const Pdg*> bases;
    bases.reserve(prev.graphs.size());
    for (const auto& [form, g] : prev.graphs) bases.push_back(&g);
    return bases;
}

// Expands bases [lo, hi) with `threads` workers; each worker owns a Grower
// and results merge associatively, so the outcome is independent of the
// split.
GrowStats run_expansion(const std::vector<const Pdg*>& bases, size_t lo, size_t hi, int level, int k,
                        const ForbiddenFamily& family, bool dedup, bool track_theta, int threads,
                        std::atomic<uint64_t>* expansions, uint64_t budget, bool* out_aborted) {
    if (threads <= 0) threads = int(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    const bool is_tk = family_is_single_tk(family);

    std::atomic<size_t> next(lo);
    std::vector<GrowStats> results(threads);
    std::atomic<bool> any_aborted(false);

    auto run_worker = [&](int wi) {
        Grower grower;
        grower.init(level, k, family);
        grower.family_is_tk = is_tk;
        grower.dedup = dedup;
        grower.track_theta = track_theta;
        grower.expansions = expansions;
        grower.budget = budget;
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= hi || any_aborted.load()) break;
            grower.load_base(*bases[i]);
            grower.dfs(0);
            if (grower.aborted) { any_aborted = true; break; }
        }
        results[wi] = std::move(grower.stats);
    };

    if (threads == 1) {
        run_worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(run_worker, t);
        for (auto& th : pool) th.join();
    }

    GrowStats merged = std::move(results[0]);
    for (int t = 1; t < threads; ++t) {
        GrowStats& r = results[t];
        merged.emitted += r.emitted;
        for (auto& [form, g] : r.classes) merged.classes.emplace(form, std::move(g));
        if (r.theta) {
            if (!merged.theta || *r.theta < *merged.theta ||
                (*r.theta == *merged.theta && *r.witness_form < *merged.witness_form)) {
                merged.theta = r.theta;
                merged.witness_form = r.witness_form;
            }
        }
    }
    if (out_aborted) *out_aborted = any_aborted.load();
    return merged;
}

uint64_t family_signature(const ForbiddenFamily& fam) {
    uint64_t h = 0x9e3779b97f4a7c15ULL ^ fam.members.size();
    for (const Pdg& m : fam.members) h ^= graph_hash(m);
    return h;
}

void write_checkpoint(const std::string& dir, int n, int k, uint64_t fam_sig, const LevelSet& level,
                      const std::vector<uint64_t>& counts) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::ostringstream name;
    name << "level_" << level.level << ".txt";
    std::ofstream lf(fs::path(dir) / name.str());
    for (const auto& [form, g] : level.graphs) lf << to_text(g) << "\n";
    std::ofstream mf(fs::path(dir) / "checkpoint.txt");
    mf << n << " " << k << " " << fam_sig << " " << level.level << "\n";
    for (uint64_t c : counts) mf << c << " ";
    mf << "\n";
}

bool read_checkpoint(const std::string& dir, int n, int k, uint64_t fam_sig, LevelSet& level,
                     std::vector<uint64_t>& counts) {
    namespace fs = std::filesystem;
    std::ifstream mf(fs::path(dir) / "checkpoint.txt");
    if (!mf) return false;
    int cn, ck, clevel;
    uint64_t csig;
    if (!(mf >> cn >> ck >> csig >> clevel)) return false;
    if (cn != n || ck != k || csig != fam_sig) return false;
    counts.clear();
    uint64_t c;
    while (mf >> c) counts.push_back(c);
    std::ostringstream name;
    name << "level_" << clevel << ".txt";
    std::ifstream lf(fs::path(dir) / name.str());
    if (!lf) return false;
    level.level = clevel;
    level.k = k;
    level.graphs.clear();
    std::string line;
    while (std::getline(lf, line)) {
        if (line.empty()) continue;
        Pdg g = parse_pdg(line);
        level.graphs.emplace(canonical_form(g), g);
    }
    return true;
}

}  // namespace

LevelSet grow_level(const LevelSet& prev, const ForbiddenFamily& family, bool dedup, int threads) {
    if (prev.k != family.k) throw std::invalid_argument("family uniformity mismatch");
    LevelSet next;
    next.level = prev.level + 1;
    next.k = prev.k;
    auto bases = sorted_bases(prev);
    GrowStats stats = run_expansion(bases, 0, bases.size(), next.level, prev.k, family, dedup,
                                    /*track_theta=*/false, threads, nullptr, 0, nullptr);
    next.graphs = std::move(stats.classes);
    return next;
}

BatchResult merge_batches(const std::vector<BatchResult>& parts) {
    if (parts.empty()) throw std::invalid_argument("nothing to merge");
    BatchResult out = parts[0];
    for (size_t i = 1; i < parts.size(); ++i) {
        const BatchResult& p = parts[i];
        if (p.n != out.n || p.k != out.k || p.batches != out.batches)
            throw std::invalid_argument("batch results disagree on parameters");
        out.free_count += p.free_count;
        if (p.theta) {
            bool take = false;
            if (!out.theta) take = true;
            else if (*p.theta < *out.theta) take = true;
            else if (*p.theta == *out.theta && p.witness && out.witness &&
                     canonical_form(*p.witness) < canonical_form(*out.witness))
                take = true;
            if (take) {
                out.theta = p.theta;
                out.witness = p.witness;
            }
        }
    }
    out.batch_index = -1;
    return out;
}

namespace {

struct Levels {
    LevelSet current;
    std::vector<uint64_t> counts;
};

Levels build_levels(int n, int k, const ForbiddenFamily& family, const EnumerateOptions& opts) {
    Levels lv;
    lv.current = LevelSet::seed(k);
    lv.counts = {1};
    if (!opts.checkpoint_dir.empty()) {
        LevelSet resumed;
        std::vector<uint64_t> counts;
        if (read_checkpoint(opts.checkpoint_dir, n, k, family_signature(family), resumed, counts) &&
            resumed.level < n) {
            lv.current = std::move(resumed);
            lv.counts = std::move(counts);
        }
    }
    while (lv.current.level < n - 1) {
        auto bases = sorted_bases(lv.current);
        LevelSet next;
        next.level = lv.current.level + 1;
        next.k = k;
        std::atomic<uint64_t> expansions(0);
        bool aborted = false;
        GrowStats stats = run_expansion(bases, 0, bases.size(), next.level, k, family, true,
                                        false, opts.threads, &expansions, opts.max_expansions_per_level,
                                        &aborted);
        if (aborted) {
            std::string dir = opts.checkpoint_dir.empty() ? std::string("pdgsat-checkpoint") : opts.checkpoint_dir;
            write_checkpoint(dir, n, k, family_signature(family), lv.current, lv.counts);
            throw BudgetExceeded(dir);
        }
        next.graphs = std::move(stats.classes);
        lv.current = std::move(next);
        lv.counts.push_back(lv.current.graphs.size());
        if (!opts.checkpoint_dir.empty())
            write_checkpoint(opts.checkpoint_dir, n, k, family_signature(family), lv.current, lv.counts);
    }
    return lv;
}

}  // namespace

BatchResult theta_max_batch(int n, int k, const ForbiddenFamily& family, int batches, int batch_index,
                            const EnumerateOptions& opts) {
    if (n < k) throw std::invalid_argument("need n >= k");
    if (batches < 1 || batch_index < 0 || batch_index >= batches)
        throw std::invalid_argument("bad batch specification");
    Levels lv = build_levels(n, k, family, opts);
    auto bases = sorted_bases(lv.current);
    size_t lo = bases.size() * size_t(batch_index) / size_t(batches);
    size_t hi = bases.size() * size_t(batch_index + 1) / size_t(batches);
    std::atomic<uint64_t> expansions(0);
    bool aborted = false;
    GrowStats stats = run_expansion(bases, lo, hi, n, k, family, /*dedup=*/false, /*track_theta=*/true,
                                    opts.threads, &expansions, opts.max_expansions_per_level, &aborted);
    if (aborted) {
        std::string dir = opts.checkpoint_dir.empty() ? std::string("pdgsat-checkpoint") : opts.checkpoint_dir;
        write_checkpoint(dir, n, k, family_signature(family), lv.current, lv.counts);
        throw BudgetExceeded(dir);
    }
    BatchResult r;
    r.n = n;
    r.k = k;
    r.batches = batches;
    r.batch_index = batch_index;
    r.free_count = stats.emitted;
    r.theta = stats.theta;
    if (stats.witness_form) r.witness = stats.witness_form->to_pdg();
    return r;
}

ThetaResult theta_max(int n, int k, const ForbiddenFamily& family, const EnumerateOptions& opts) {
    if (n < k) throw std::invalid_argument("need n >= k");
    if (k != family.k) throw std::invalid_argument("family uniformity mismatch");
    if (opts.batches > 1 && opts.final_dedup)
        throw std::invalid_argument("batched final level requires final_dedup = false");

    Levels lv = build_levels(n, k, family, opts);
    auto bases = sorted_bases(lv.current);

    ThetaResult res;
    res.level_counts = lv.counts;

    std::optional<Rat> theta;
    std::optional<CanonicalForm> witness_form;

    if (opts.final_dedup) {
        std::atomic<uint64_t> expansions(0);
        bool aborted = false;
        GrowStats stats = run_expansion(bases, 0, bases.size(), n, k, family, true, false, opts.threads,
                                        &expansions, opts.max_expansions_per_level, &aborted);
        if (aborted) {
            std::string dir = opts.checkpoint_dir.empty() ? std::string("pdgsat-checkpoint") : opts.checkpoint_dir;
            write_checkpoint(dir, n, k, family_signature(family), lv.current, lv.counts);
            throw BudgetExceeded(dir);
        }
        const long long slots = binomial(n, k);
        for (const auto& [form, g] : stats.classes) {
            int ed = g.directed_count();
            if (ed == 0) continue;
            Rat cand(slots - g.undirected_count(), ed);
            if (!theta || cand < *theta) {
                theta = cand;
                witness_form = form;
            }
        }
        res.final_count = stats.classes.size();
    } else {
        int batches = std::max(1, opts.batches);
        std::vector<BatchResult> parts;
        {
            for (int b = 0; b < batches; ++b) {
                size_t lo = bases.size() * size_t(b) / size_t(batches);
                size_t hi = bases.size() * size_t(b + 1) / size_t(batches);
                std::atomic<uint64_t> expansions(0);
                bool aborted = false;
                GrowStats stats = run_expansion(bases, lo, hi, n, k, family, false, true, opts.threads,
                                                &expansions, opts.max_expansions_per_level, &aborted);
                if (aborted) {
                    std::string dir =
                        opts.checkpoint_dir.empty() ? std::string("pdgsat-checkpoint") : opts.checkpoint_dir;
                    write_checkpoint(dir, n, k, family_signature(family), lv.current, lv.counts);
                    throw BudgetExceeded(dir);
                }
                BatchResult r;
                r.n = n;
                r.k = k;
                r.batches = batches;
                r.batch_index = b;
                r.free_count = stats.emitted;
                r.theta = stats.theta;
                if (stats.witness_form) r.witness = stats.witness_form->to_pdg();
                parts.push_back(std::move(r));
            }
        }
        BatchResult merged = merge_batches(parts);
        res.final_count = merged.free_count;
        theta = merged.theta;
        if (merged.witness) witness_form = canonical_form(*merged.witness);
    }

    if (!theta) throw std::runtime_error("no graph with a directed edge enumerated");
    res.theta = *theta;
    res.witness = witness_form->to_pdg();
    res.level_counts.push_back(res.final_count);
    return res;
}

}  // namespace pdgsat
