#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "clopen/chain.hpp"
#include "oracles.hpp"

using namespace clopen;
using namespace clopen::testing;

namespace {

ChainGraph injected(int n, std::vector<std::pair<int, int>> edges) {
    ChainGraph g;
    g.n = n;
    g.delta = rat(0);
    g.adj.assign(static_cast<size_t>(n), {});
    for (auto [a, b] : edges) g.adj[static_cast<size_t>(a)].push_back(b);
    for (auto& row : g.adj) std::sort(row.begin(), row.end());
    return g;
}

// random strongly connected digraph as a union of cycles over a common vertex
ChainGraph random_scc_graph(std::mt19937_64& rng, int n) {
    std::vector<std::pair<int, int>> edges;
    const int cycles = 1 + static_cast<int>(draw(rng, 3));
    for (int c = 0; c < cycles; ++c) {
        const int len = 1 + static_cast<int>(draw(rng, n));
        std::vector<int> nodes{0};  // share vertex 0 so the graph is strongly connected
        for (int i = 1; i < len; ++i) nodes.push_back(static_cast<int>(draw(rng, n)));
        for (size_t i = 0; i < nodes.size(); ++i)
            edges.emplace_back(nodes[i], nodes[(i + 1) % nodes.size()]);
    }
    // restrict to touched nodes, relabel densely
    std::set<int> touched;
    for (auto [a, b] : edges) {
        touched.insert(a);
        touched.insert(b);
    }
    std::map<int, int> rank;
    for (int v : touched) rank.emplace(v, static_cast<int>(rank.size()));
    std::vector<std::pair<int, int>> relabeled;
    std::set<std::pair<int, int>> dedup;
    for (auto [a, b] : edges)
        if (dedup.emplace(rank[a], rank[b]).second) relabeled.emplace_back(rank[a], rank[b]);
    return injected(static_cast<int>(rank.size()), std::move(relabeled));
}

}  // namespace

TEST_CASE("delta graphs degenerate to orbit edges below the min gap") {
    SystemFamily fam = build_odometer({2, 4, 8}, 3);
    const SystemLevel& sys = fam.top();
    Rational small = Rational(sys.model->min_gap / 2);
    ChainGraph g = build_chain_graph(sys, small, ChainMode::existential);
    for (int a = 0; a < sys.size(); ++a) {
        REQUIRE(g.adj[static_cast<size_t>(a)].size() == 1);
        CHECK(g.adj[static_cast<size_t>(a)][0] == sys.pi[static_cast<size_t>(a)]);
    }
    // at or above the largest dmax the digraph is complete
    ChainGraph full = build_chain_graph(sys, sys.model->space_diameter(), ChainMode::existential);
    for (int a = 0; a < sys.size(); ++a)
        CHECK(static_cast<int>(full.adj[static_cast<size_t>(a)].size()) == sys.size());
}

TEST_CASE("universal edges are a subset of existential edges") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        SystemLevel sys = random_system(rng, 8);
        std::vector<Rational> grid = threshold_grid(*sys.model);
        Rational delta = grid[static_cast<size_t>(draw(rng, static_cast<long>(grid.size())))];
        ChainGraph ex = build_chain_graph(sys, delta, ChainMode::existential);
        ChainGraph un = build_chain_graph(sys, delta, ChainMode::universal);
        for (int a = 0; a < sys.size(); ++a) {
            CHECK(std::binary_search(ex.adj[static_cast<size_t>(a)].begin(),
                                     ex.adj[static_cast<size_t>(a)].end(),
                                     sys.pi[static_cast<size_t>(a)]));
            for (int b : un.adj[static_cast<size_t>(a)])
                CHECK(std::binary_search(ex.adj[static_cast<size_t>(a)].begin(),
                                         ex.adj[static_cast<size_t>(a)].end(), b));
        }
    }
}

TEST_CASE("chain recurrence: permutations everywhere, dags only at self-loops") {
    SystemFamily fam = build_odometer({3, 6}, 2);
    ChainGraph g = build_chain_graph(fam.top(), rat(1, 1000), ChainMode::existential);
    CHECK(chain_recurrent_atoms(g).size() == static_cast<size_t>(fam.top().size()));

    ChainGraph dag = injected(4, {{0, 1}, {1, 2}, {2, 3}, {3, 3}});
    std::vector<int> cr = chain_recurrent_atoms(dag);
    CHECK(cr == std::vector<int>{3});
}

TEST_CASE("components: single orbit below the min gap, one component when complete") {
    SystemFamily odo = build_odometer({2, 4, 8, 16}, 4);
    ChainGraph g = build_chain_graph(odo.top(), Rational(odo.top().model->min_gap / 2),
                                     ChainMode::existential);
    CHECK(chain_components(g).size() == 1);

    SystemFamily ex = build_modified_odometer(4);
    ChainGraph ge = build_chain_graph(ex.top(), Rational(ex.top().model->min_gap / 2),
                                      ChainMode::existential);
    CHECK(chain_components(ge).size() == 4);  // interval cycle plus one per piece band

    ChainGraph full =
        build_chain_graph(ex.top(), ex.top().model->space_diameter(), ChainMode::existential);
    CHECK(chain_components(full).size() == 1);
}

TEST_CASE("cyclic decomposition of simple shapes") {
    ChainGraph four = injected(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    CyclicComponent c = cyclic_decomposition(four, {0, 1, 2, 3});
    CHECK(c.period == 4);
    REQUIRE(c.parts.size() == 4);
    for (const auto& part : c.parts) CHECK(part.size() == 1);

    // cycles of length 2 and 3 through a shared node: gcd 1, a single part
    ChainGraph mixed = injected(4, {{0, 1}, {1, 0}, {0, 2}, {2, 3}, {3, 0}});
    CyclicComponent m = cyclic_decomposition(mixed, {0, 1, 2, 3});
    CHECK(m.period == 1);
    CHECK(m.parts.size() == 1);
    CHECK(simple_cycle_gcd(mixed.adj, {0, 1, 2, 3}) == 1);

    SystemFamily ex = build_modified_odometer(4);
    CyclicDecomposition dec =
        full_cyclic_decomposition(ex.top(), Rational(ex.top().model->min_gap / 2));
    REQUIRE(dec.components.size() == 4);
    CHECK(dec.components[0].period == 16);
    CHECK(dec.components[1].period == 6);
    CHECK(dec.components[2].period == 12);
    CHECK(dec.components[3].period == 24);
}

TEST_CASE("gcd by potentials equals brute-force simple cycle enumeration") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        ChainGraph g = random_scc_graph(rng, 2 + static_cast<int>(draw(rng, 11)));
        std::vector<std::vector<int>> comps = chain_components(g);
        REQUIRE(comps.size() == 1);
        CyclicComponent dec = cyclic_decomposition(g, comps[0]);
        CHECK(dec.period == simple_cycle_gcd(g.adj, comps[0]));
        // parts partition and advance along edges
        std::vector<long> part_of(static_cast<size_t>(g.n), -1);
        for (size_t j = 0; j < dec.parts.size(); ++j)
            for (int a : dec.parts[j]) part_of[static_cast<size_t>(a)] = static_cast<long>(j);
        const long m = dec.period.get_si();
        for (int a = 0; a < g.n; ++a)
            for (int b : g.adj[static_cast<size_t>(a)])
                CHECK(part_of[static_cast<size_t>(b)] ==
                      (part_of[static_cast<size_t>(a)] + 1) % m);
    }
}

TEST_CASE("D1-D3 verification on systems and injected corruption") {
    SystemFamily ex = build_modified_odometer(3);
    Rational delta = Rational(ex.top().model->min_gap / 2);
    CyclicDecomposition dec = full_cyclic_decomposition(ex.top(), delta);
    CyclicPropertyReport rep = verify_cyclic_properties(dec, ex.top(), delta);
    CHECK(rep.d1_clopen_parts);
    CHECK(rep.d2_advances);
    CHECK(rep.d3_connects);

    // corrupt one part assignment: D2 must flag it
    CyclicDecomposition bad = dec;
    REQUIRE(bad.components[0].parts.size() >= 2);
    std::swap(bad.components[0].parts[0], bad.components[0].parts[1]);
    CyclicPropertyReport rep2 = verify_cyclic_properties(bad, ex.top(), delta);
    CHECK(!rep2.d2_advances);
}

TEST_CASE("r(delta): atom diameters below the min gap, space diameter when complete") {
    SystemFamily odo = build_odometer({2, 4, 8}, 3);
    CHECK(r_delta(odo.top(), Rational(odo.top().model->min_gap / 2)) == pow2(-4));
    CHECK(r_delta(odo.top(), odo.top().model->space_diameter()) ==
          odo.top().model->space_diameter());
}

TEST_CASE("r(delta) is monotone along the grid") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 25; ++trial) {
        SystemLevel sys = random_system(rng, 7);
        Rational prev(-1);
        for (const Rational& delta : threshold_grid(*sys.model)) {
            Rational r = r_delta(sys, delta);
            CHECK(prev <= r);
            prev = r;
        }
    }
}

TEST_CASE("finite Lemma-4.2 form: r at the bottom of the grid across levels") {
    // odometers: the bottom value halves with every level
    for (int K = 2; K <= 6; ++K) {
        SystemFamily odo = build_odometer({2, 4, 8, 16, 32, 64}, K);
        Rational r = r_delta(odo.level(K), Rational(odo.level(K).model->min_gap / 2));
        CHECK(r == pow2(-(K + 1)));
    }
    // the example family decreases monotonically but floors at the unrefined
    // first-band piece diameter 1/72: 1/9, 1/27, then 1/72 forever
    std::vector<Rational> expect{rat(1, 9), rat(1, 27), rat(1, 72), rat(1, 72)};
    for (int K = 2; K <= 5; ++K) {
        SystemFamily ex = build_modified_odometer(K);
        Rational r = r_delta(ex.level(K), Rational(ex.level(K).model->min_gap / 2));
        CHECK(r == expect[static_cast<size_t>(K) - 2]);
    }
}
