#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "pdgsat/density.hpp"

using namespace pdgsat;

namespace {

Hypergraph random_hypergraph(std::mt19937_64& rng, int n, int k, double p) {
    Hypergraph h;
    h.n = n;
    h.k = k;
    std::uniform_real_distribution<double> coin(0, 1);
    std::vector<int> verts;
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == k) {
            if (coin(rng) < p) h.edges.push_back(verts);
            return;
        }
        for (int v = start; v < n; ++v) {
            verts.push_back(v);
            rec(v + 1, depth + 1);
            verts.pop_back();
        }
    };
    rec(0, 0);
    return h;
}

uint64_t simplices_by_sets(const Hypergraph& h) {
    std::set<std::vector<int>> edges(h.edges.begin(), h.edges.end());
    uint64_t count = 0;
    std::vector<int> verts;
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == h.k + 1) {
            for (int skip = 0; skip <= h.k; ++skip) {
                std::vector<int> sub;
                for (int i = 0; i <= h.k; ++i)
                    if (i != skip) sub.push_back(verts[i]);
                if (!edges.count(sub)) return;
            }
            count++;
            return;
        }
        for (int v = start; v < h.n; ++v) {
            verts.push_back(v);
            rec(v + 1, depth + 1);
            verts.pop_back();
        }
    };
    rec(0, 0);
    return count;
}

Hypergraph complete(int n, int k) {
    Hypergraph h;
    h.n = n;
    h.k = k;
    std::vector<int> verts;
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == k) {
            h.edges.push_back(verts);
            return;
        }
        for (int v = start; v < n; ++v) {
            verts.push_back(v);
            rec(v + 1, depth + 1);
            verts.pop_back();
        }
    };
    rec(0, 0);
    return h;
}

}  // namespace

TEST_CASE("triangular-edge density curve endpoints") {
    CHECK(std::abs(fm_density(0.5) - 0.5) < 1e-9);
    CHECK(std::abs(fm_density(1.0) - 0.0) < 1e-9);
    CHECK(std::abs(fm_density(0.0) - 0.5) < 1e-9);
    CHECK_THROWS_AS(fm_density(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(fm_density(1.1), std::invalid_argument);
}

TEST_CASE("curve is non-increasing, below 1 - rho, and convex on [1/2, 1]") {
    double prev = 1e9;
    std::vector<double> samples;
    for (int i = 0; i <= 100; ++i) {
        double rho = 0.5 + 0.005 * i;
        double v = fm_density(rho);
        CHECK(v <= prev + 1e-9);
        CHECK(v <= 1 - rho + 1e-9);
        samples.push_back(v);
        prev = v;
    }
    for (size_t i = 1; i + 1 < samples.size(); ++i)
        CHECK(samples[i + 1] - 2 * samples[i] + samples[i - 1] >= -1e-6);
}

TEST_CASE("system search: infeasible at the critical value, feasible far above") {
    FeasibilityVerdict low = check_system(Rat(1909, 1000), Rat(1, 1000));
    CHECK_FALSE(low.feasible);
    CHECK(low.max_min_margin <= 0);

    FeasibilityVerdict high = check_system(Rat(10), Rat(1, 1000));
    REQUIRE(high.feasible);
    REQUIRE(high.point.has_value());
    // independent exact re-verification of the returned point
    const FeasiblePoint& p = *high.point;
    Rat phi(10);
    Rat s = p.x * p.x + Rat(2) * p.x * p.y + Rat(2) * p.y * p.z;
    CHECK(p.a + (Rat(3) * phi - Rat(1)) / Rat(2) * p.b + p.c > Rat(1));
    CHECK(p.a + phi * (p.b + p.c) > Rat(1));
    CHECK(p.x + p.y + p.z == Rat(1));
    CHECK(s >= p.a + p.b + p.c);
    CHECK(Rat(2) * p.y * p.z >= p.b);
    CHECK(p.x >= Rat(0));
    CHECK(p.y >= Rat(0));
    CHECK(p.z >= Rat(0));

    // the simple reference point also satisfies everything at phi = 10
    Rat x(0), y(1, 2), z(1, 2), a(0), b(1, 2), c(0);
    CHECK(a + (Rat(3) * phi - Rat(1)) / Rat(2) * b + c > Rat(1));
    CHECK(a + phi * (b + c) > Rat(1));
    CHECK(x * x + Rat(2) * x * y + Rat(2) * y * z >= a + b + c);
    CHECK(Rat(2) * y * z >= b);
}

TEST_CASE("the feasibility threshold sits in a narrow bracket") {
    Rat res(1, 200);
    Rat lo(178, 100), hi(10);
    REQUIRE_FALSE(check_system(lo, res).feasible);
    REQUIRE(check_system(hi, res).feasible);
    while (hi - lo > Rat(1, 10000)) {
        Rat mid = (lo + hi) / Rat(2);
        if (check_system(mid, res).feasible) hi = mid;
        else lo = mid;
    }
    CHECK(hi - lo <= Rat(1, 10000));
    MESSAGE("threshold bracket at grid 1/200: (", lo.str(), ", ", hi.str(), ")");
    CHECK(lo > Rat(1909, 1000));  // consistent with infeasibility at 1.909
}

TEST_CASE("simplex bound worked examples") {
    KkReport full6 = kruskal_katona_check(complete(6, 3));
    CHECK(full6.simplices == 15);  // C(6,4)
    CHECK(full6.holds);

    Hypergraph empty;
    empty.n = 5;
    empty.k = 3;
    KkReport e = kruskal_katona_check(empty);
    CHECK(e.simplices == 0);
    CHECK(e.holds);
}

TEST_CASE("simplex bound holds on random 3-graphs") {
    std::mt19937_64 rng(89);
    for (int it = 0; it < 500; ++it) {
        int n = 4 + int(rng() % 9);  // up to 12
        Hypergraph h = random_hypergraph(rng, n, 3, 0.2 + 0.6 * double(rng() % 100) / 100);
        KkReport r = kruskal_katona_check(h);
        CHECK(r.simplices == simplices_by_sets(h));  // independent recount
        CHECK(r.holds);
    }
}

TEST_CASE("orientation worked examples") {
    Hypergraph single;
    single.n = 3;
    single.k = 3;
    single.edges = {{0, 1, 2}};
    Orientation o1 = orient_hypergraph(single);
    CHECK(o1.codegree_bound >= 1);
    CHECK(orientation_respects_bound(single, o1));

    Hypergraph k53 = complete(5, 3);  // ten edges
    Orientation o2 = orient_hypergraph(k53);
    CHECK(o2.codegree_bound == 2);  // ceil((2/6^(2/3)) * 10^(1/3))
    CHECK(orientation_respects_bound(k53, o2));

    Hypergraph star;  // edges sharing the pair {0,1}
    star.n = 7;
    star.k = 3;
    for (int x = 2; x < 7; ++x) star.edges.push_back({0, 1, x});
    Orientation o3 = orient_hypergraph(star);
    CHECK(orientation_respects_bound(star, o3));
}

TEST_CASE("orientation respects the codegree bound on random hypergraphs") {
    std::mt19937_64 rng(97);
    for (int it = 0; it < 200; ++it) {
        int k = 2 + int(rng() % 2);
        int n = k + 2 + int(rng() % 6);
        Hypergraph h = random_hypergraph(rng, n, k, 0.5);
        if (h.edges.empty()) continue;
        Orientation o = orient_hypergraph(h);
        CHECK(orientation_respects_bound(h, o));
        // audit from scratch: count per (k-1)-subset the edges pointed outside
        std::map<std::vector<int>, int> codeg;
        for (size_t ei = 0; ei < h.edges.size(); ++ei) {
            std::vector<int> s;
            for (int v : h.edges[ei])
                if (v != o.heads[ei]) s.push_back(v);
            codeg[s]++;
        }
        for (auto& [s, c] : codeg) CHECK(c <= o.codegree_bound);
    }
}

TEST_CASE("hypergraph text round-trip") {
    Hypergraph h = parse_hypergraph("0 1 2\n1 2 3\n");
    CHECK(h.n == 4);
    CHECK(h.k == 3);
    CHECK(h.edges.size() == 2);
    CHECK(to_text(h) == "0 1 2\n1 2 3\n");
    CHECK_THROWS_AS(parse_hypergraph("0 1\n0 1 2\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_hypergraph("0 0 2\n"), std::invalid_argument);
}
