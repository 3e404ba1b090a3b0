#include "clopen/swap.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace clopen {

namespace {

using Word = std::vector<uint8_t>;

const Word& word_of(const FiniteModel& model, int atom) {
    const auto* w = std::get_if<CylinderWord>(&model.atoms[static_cast<size_t>(atom)].geometry);
    if (!w) throw SwapError(SwapErrorKind::unsupported_model, "swap needs cylinder atoms");
    return w->digits;
}

Word word_xor(const Word& a, const Word& b) {
    Word out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
    return out;
}

void require_binary_complete(const FiniteModel& model) {
    if (model.metric_kind != MetricKind::cylinder_sup)
        throw SwapError(SwapErrorKind::unsupported_model, "swap needs a cylinder model");
    for (unsigned r : model.radix)
        if (r != 2) throw SwapError(SwapErrorKind::unsupported_model, "swap needs binary digits");
    if (model.size() != (1 << model.radix.size()))
        throw SwapError(SwapErrorKind::unsupported_model, "swap needs the complete word set");
}

void require_proper(const std::vector<int>& tuple, const char* name) {
    std::set<int> seen(tuple.begin(), tuple.end());
    if (seen.size() != tuple.size())
        throw SwapError(SwapErrorKind::not_proper, std::string(name) + " tuple has repeats");
}

// Single-layer XOR construction for an involution-consistent pairing.
SwapInvolution build_masks(const FiniteModel& model, const std::vector<std::pair<int, int>>& pairs) {
    SwapInvolution phi;
    phi.depth = static_cast<int>(model.radix.size());
    std::map<Word, Word> masks;
    for (auto [a, b] : pairs) {
        if (a == b) continue;
        const Word& wa = word_of(model, a);
        const Word& wb = word_of(model, b);
        Word m = word_xor(wa, wb);
        auto put = [&](const Word& w) {
            auto [it, fresh] = masks.emplace(w, m);
            if (!fresh && it->second != m)
                throw SwapError(SwapErrorKind::not_proper, "conflicting masks in pairing");
        };
        put(wa);
        put(wb);
    }
    for (auto& [w, m] : masks) phi.masked_cylinders.emplace_back(w, m);
    phi.is_involution = true;
    return phi;
}

Rational phi_distance_upper(const SwapInvolution& phi) {
    Rational best(0);
    for (const auto& [w, m] : phi.masked_cylinders) {
        for (size_t i = 0; i < m.size(); ++i) {
            if (m[i] != 0) {
                best = std::max(best, pow2(-static_cast<int>(i + 1)));
                break;
            }
        }
    }
    return best;
}

int atom_of_word(const FiniteModel& model, const Word& w) {
    // Complete binary models list words in construction order; scan is fine at
    // the sizes involved, but the builders keep id == little-endian value where
    // possible, so try that first.
    long guess = 0;
    for (size_t i = 0; i < w.size(); ++i) guess |= static_cast<long>(w[i]) << i;
    if (guess < model.size() && word_of(model, static_cast<int>(guess)) == w)
        return static_cast<int>(guess);
    for (int a = 0; a < model.size(); ++a)
        if (word_of(model, a) == w) return a;
    throw SwapError(SwapErrorKind::unsupported_model, "word missing from model");
}

}  // namespace

int SwapInvolution::apply_atom(const FiniteModel& model, int atom) const {
    const Word& w = word_of(model, atom);
    for (const auto& [cyl, mask] : masked_cylinders)
        if (cyl == w) return atom_of_word(model, word_xor(w, mask));
    return atom;
}

std::vector<int> SwapInvolution::atom_permutation(const FiniteModel& model) const {
    std::vector<int> tau(static_cast<size_t>(model.size()));
    for (int a = 0; a < model.size(); ++a) tau[static_cast<size_t>(a)] = a;
    for (const auto& [cyl, mask] : masked_cylinders) {
        int from = atom_of_word(model, cyl);
        tau[static_cast<size_t>(from)] = atom_of_word(model, word_xor(cyl, mask));
    }
    return tau;
}

Rational tuple_distance(const FiniteModel& model, const std::vector<int>& zeta,
                        const std::vector<int>& eta) {
    if (zeta.size() != eta.size()) throw SwapError(SwapErrorKind::not_proper, "tuple sizes differ");
    Rational best(0);
    for (size_t i = 0; i < zeta.size(); ++i)
        best = std::max(best, model.dmax(zeta[i], eta[i]));
    return best;
}

SwapBuildResult swap_homeomorphism(const FiniteModel& model, const std::vector<int>& zeta,
                                   const std::vector<int>& eta, const Rational& delta) {
    require_binary_complete(model);
    require_proper(zeta, "zeta");
    require_proper(eta, "eta");
    if (zeta.size() != eta.size()) throw SwapError(SwapErrorKind::not_proper, "tuple sizes differ");

    const Rational rho = tuple_distance(model, zeta, eta);
    if (!(rho < delta))
        throw SwapError(SwapErrorKind::precondition,
                        "d_n(zeta, eta) = " + format_rational(rho) + " is not below delta");

    SwapBuildResult out;
    if (zeta == eta) {  // identity involution
        out.phi.depth = static_cast<int>(model.radix.size());
        out.distance_upper = 0;
        return out;
    }

    // The pairing is realizable by an involution iff it never forces two images
    // for one atom: zeta_i = eta_j with eta_i != zeta_j is the obstruction.
    std::map<int, int> forced;
    bool consistent = true;
    for (size_t i = 0; i < zeta.size() && consistent; ++i) {
        auto put = [&](int from, int to) {
            auto [it, fresh] = forced.emplace(from, to);
            if (!fresh && it->second != to) consistent = false;
        };
        put(zeta[i], eta[i]);
        put(eta[i], zeta[i]);
    }

    if (consistent) {
        std::vector<std::pair<int, int>> pairs;
        for (size_t i = 0; i < zeta.size(); ++i) pairs.emplace_back(zeta[i], eta[i]);
        out.phi = build_masks(model, pairs);
        out.distance_upper = phi_distance_upper(out.phi);
        return out;
    }

    // General case: route through a fresh proper tuple theta near zeta, with
    // rho + 2*epsilon < delta, and compose the two involutions.
    const Rational epsilon = Rational(delta - rho) * 49 / 100;
    std::set<int> used(zeta.begin(), zeta.end());
    used.insert(eta.begin(), eta.end());
    std::vector<int> theta;
    for (size_t i = 0; i < zeta.size(); ++i) {
        int best = -1;
        Rational bestd(0);
        for (int cand = 0; cand < model.size(); ++cand) {
            if (used.count(cand)) continue;
            Rational d = model.dmax(zeta[i], cand);
            if (!(d < epsilon)) continue;
            if (best == -1 || d < bestd || (d == bestd && cand < best)) {
                best = cand;
                bestd = d;
            }
        }
        if (best == -1)
            throw SwapError(SwapErrorKind::refinement_request,
                            "no fresh cylinder within epsilon of component " + std::to_string(i) +
                                "; refine the model",
                            static_cast<int>(model.radix.size()) + 1);
        theta.push_back(best);
        used.insert(best);
    }

    std::vector<std::pair<int, int>> first, second;
    for (size_t i = 0; i < zeta.size(); ++i) {
        first.emplace_back(zeta[i], theta[i]);
        second.emplace_back(theta[i], eta[i]);
    }
    SwapInvolution phi1 = build_masks(model, first);
    SwapInvolution phi2 = build_masks(model, second);

    // Collapse the composite into one mask layer.
    std::vector<int> tau1 = phi1.atom_permutation(model);
    std::vector<int> tau2 = phi2.atom_permutation(model);
    SwapInvolution composite;
    composite.depth = static_cast<int>(model.radix.size());
    for (int a = 0; a < model.size(); ++a) {
        int img = tau2[static_cast<size_t>(tau1[static_cast<size_t>(a)])];
        if (img != a)
            composite.masked_cylinders.emplace_back(word_of(model, a),
                                                    word_xor(word_of(model, a), word_of(model, img)));
    }
    composite.is_involution = true;
    for (int a = 0; a < model.size(); ++a) {
        int img = tau2[static_cast<size_t>(tau1[static_cast<size_t>(a)])];
        int back = tau2[static_cast<size_t>(tau1[static_cast<size_t>(img)])];
        if (back != a) composite.is_involution = false;
    }

    out.phi = std::move(composite);
    out.used_two_step = true;
    out.theta = std::move(theta);
    out.distance_upper = phi_distance_upper(out.phi);
    if (!(out.distance_upper < delta))
        throw SwapError(SwapErrorKind::refinement_request,
                        "two-step composite does not certify below delta; refine the model",
                        static_cast<int>(model.radix.size()) + 1);
    return out;
}

}  // namespace clopen
