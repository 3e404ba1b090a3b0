#include "clopen/chain.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace clopen {

namespace {

Integer gcd(const Integer& a, const Integer& b) {
    Integer out;
    mpz_gcd(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return out;
}

// Iterative Tarjan.
std::vector<int> scc_index(const ChainGraph& g) {
    const int n = g.n;
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<int> stack, call_node, call_edge;
    std::vector<bool> on_stack(n, false);
    int next_index = 0, next_comp = 0;

    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        call_node.push_back(root);
        call_edge.push_back(0);
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call_node.empty()) {
            int v = call_node.back();
            if (call_edge.back() < static_cast<int>(g.adj[v].size())) {
                int w = g.adj[v][call_edge.back()++];
                if (index[w] == -1) {
                    call_node.push_back(w);
                    call_edge.push_back(0);
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
            } else {
                call_node.pop_back();
                call_edge.pop_back();
                if (!call_node.empty()) low[call_node.back()] = std::min(low[call_node.back()], low[v]);
                if (low[v] == index[v]) {
                    while (true) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if (w == v) break;
                    }
                    ++next_comp;
                }
            }
        }
    }
    return comp;
}

}  // namespace

ChainGraph build_chain_graph(const SystemLevel& sys, const Rational& delta, ChainMode mode) {
    ChainGraph g;
    g.delta = delta;
    g.mode = mode;
    g.n = sys.size();
    g.adj.assign(static_cast<size_t>(g.n), {});
    const FiniteModel& m = *sys.model;
    for (int a = 0; a < g.n; ++a) {
        const int img = sys.pi[a];
        for (int b = 0; b < g.n; ++b) {
            const Rational d = mode == ChainMode::existential ? m.dmin(img, b) : m.dmax(img, b);
            if (d <= delta) g.adj[static_cast<size_t>(a)].push_back(b);
        }
    }
    return g;
}

std::vector<int> chain_recurrent_atoms(const ChainGraph& graph) {
    std::vector<int> comp = scc_index(graph);
    std::vector<int> size(graph.n, 0);
    for (int c : comp) ++size[c];
    std::vector<int> out;
    for (int a = 0; a < graph.n; ++a) {
        bool cyclic = size[comp[a]] > 1;
        if (!cyclic)
            cyclic = std::binary_search(graph.adj[static_cast<size_t>(a)].begin(),
                                        graph.adj[static_cast<size_t>(a)].end(), a);
        if (cyclic) out.push_back(a);
    }
    return out;
}

std::vector<std::vector<int>> chain_components(const ChainGraph& graph) {
    std::vector<int> cr = chain_recurrent_atoms(graph);
    std::vector<bool> keep(graph.n, false);
    for (int a : cr) keep[a] = true;
    std::vector<int> comp = scc_index(graph);
    std::vector<std::vector<int>> by_comp(static_cast<size_t>(graph.n));
    for (int a = 0; a < graph.n; ++a)
        if (keep[a]) by_comp[static_cast<size_t>(comp[a])].push_back(a);
    std::vector<std::vector<int>> out;
    for (auto& c : by_comp)
        if (!c.empty()) out.push_back(std::move(c));
    std::sort(out.begin(), out.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) { return a[0] < b[0]; });
    return out;
}

CyclicComponent cyclic_decomposition(const ChainGraph& graph, const std::vector<int>& component) {
    CyclicComponent out;
    out.atoms = component;
    std::sort(out.atoms.begin(), out.atoms.end());
    std::vector<bool> in_comp(graph.n, false);
    for (int a : out.atoms) in_comp[a] = true;

    // Integer potentials from the lowest atom; every edge A->B contributes
    // |pot(A)+1-pot(B)| to the gcd.
    std::vector<long> pot(graph.n, 0);
    std::vector<bool> seen(graph.n, false);
    std::deque<int> queue;
    const int root = out.atoms.front();
    seen[root] = true;
    queue.push_back(root);
    Integer g(0);
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int w : graph.adj[static_cast<size_t>(v)]) {
            if (!in_comp[w]) continue;
            if (!seen[w]) {
                seen[w] = true;
                pot[w] = pot[v] + 1;
                queue.push_back(w);
            } else {
                long diff = pot[v] + 1 - pot[w];
                g = gcd(g, Integer(diff < 0 ? -diff : diff));
            }
        }
    }
    // Second pass: tree edges contribute too once all potentials are fixed.
    for (int v : out.atoms)
        for (int w : graph.adj[static_cast<size_t>(v)]) {
            if (!in_comp[w]) continue;
            long diff = pot[v] + 1 - pot[w];
            g = gcd(g, Integer(diff < 0 ? -diff : diff));
        }

    out.period = g == 0 ? Integer(1) : g;
    const long m = out.period.get_si();
    out.parts.assign(static_cast<size_t>(m), {});
    for (int a : out.atoms) {
        long cls = ((pot[a] % m) + m) % m;
        out.parts[static_cast<size_t>(cls)].push_back(a);
    }
    return out;
}

CyclicDecomposition full_cyclic_decomposition(const SystemLevel& sys, const Rational& delta) {
    ChainGraph g = build_chain_graph(sys, delta, ChainMode::existential);
    CyclicDecomposition out;
    out.delta = delta;
    for (const auto& comp : chain_components(g)) out.components.push_back(cyclic_decomposition(g, comp));
    return out;
}

CyclicPropertyReport verify_cyclic_properties(const CyclicDecomposition& decomp,
                                              const SystemLevel& sys, const Rational& delta) {
    CyclicPropertyReport rep;
    ChainGraph g = build_chain_graph(sys, delta, ChainMode::existential);
    for (size_t ci = 0; ci < decomp.components.size(); ++ci) {
        const CyclicComponent& comp = decomp.components[ci];
        const long m = comp.period.get_si();

        // D1: parts partition the component.
        std::vector<int> gathered;
        for (const auto& part : comp.parts) gathered.insert(gathered.end(), part.begin(), part.end());
        std::sort(gathered.begin(), gathered.end());
        if (gathered != comp.atoms) {
            rep.d1_clopen_parts = false;
            rep.violations.push_back("component " + std::to_string(ci) +
                                     ": parts do not partition the component");
        }

        // D2: pi advances parts cyclically.
        std::vector<long> part_of(static_cast<size_t>(sys.size()), -1);
        for (size_t j = 0; j < comp.parts.size(); ++j)
            for (int a : comp.parts[j]) part_of[static_cast<size_t>(a)] = static_cast<long>(j);
        for (int a : comp.atoms) {
            int img = sys.pi[a];
            if (part_of[static_cast<size_t>(img)] == -1) continue;  // image leaves the component
            long expect = (part_of[static_cast<size_t>(a)] + 1) % m;
            if (part_of[static_cast<size_t>(img)] != expect) {
                rep.d2_advances = false;
                rep.violations.push_back("component " + std::to_string(ci) + ": atom " +
                                         std::to_string(a) + " advances to the wrong part");
            }
        }

        // D3: same-part atoms are joined by chains of length divisible by m,
        // decided by reachability over (atom, length mod m); the pigeonhole bound
        // |atoms| * m <= |atoms|^2 makes this complete.
        std::vector<bool> in_comp(static_cast<size_t>(sys.size()), false);
        for (int a : comp.atoms) in_comp[static_cast<size_t>(a)] = true;
        for (const auto& part : comp.parts) {
            for (int src : part) {
                std::vector<bool> seen(static_cast<size_t>(sys.size()) * static_cast<size_t>(m), false);
                std::deque<std::pair<int, long>> queue;
                queue.emplace_back(src, 0L);
                seen[static_cast<size_t>(src) * m] = true;
                while (!queue.empty()) {
                    auto [v, r] = queue.front();
                    queue.pop_front();
                    for (int w : g.adj[static_cast<size_t>(v)]) {
                        if (!in_comp[static_cast<size_t>(w)]) continue;
                        long nr = (r + 1) % m;
                        if (!seen[static_cast<size_t>(w) * m + nr]) {
                            seen[static_cast<size_t>(w) * m + nr] = true;
                            queue.emplace_back(w, nr);
                        }
                    }
                }
                for (int dst : part) {
                    if (dst == src) continue;
                    if (!seen[static_cast<size_t>(dst) * m]) {
                        rep.d3_connects = false;
                        rep.violations.push_back("no chain of length = 0 mod " + std::to_string(m) +
                                                 " from atom " + std::to_string(src) + " to " +
                                                 std::to_string(dst));
                    }
                }
            }
        }
    }
    return rep;
}

Rational r_delta(const SystemLevel& sys, const Rational& delta) {
    CyclicDecomposition decomp = full_cyclic_decomposition(sys, delta);
    const FiniteModel& m = *sys.model;
    Rational best(0);
    for (const auto& comp : decomp.components)
        for (const auto& part : comp.parts)
            for (size_t i = 0; i < part.size(); ++i)
                for (size_t j = i; j < part.size(); ++j)
                    best = std::max(best, m.dmax(part[i], part[j]));
    return best;
}

}  // namespace clopen
