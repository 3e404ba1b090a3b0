#include "clopen/system.hpp"

#include <numeric>
#include <stdexcept>

namespace clopen {

namespace {

Integer gcd(const Integer& a, const Integer& b) {
    Integer out;
    mpz_gcd(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return out;
}

Interval ternary_child(const Interval& j, int bit) {
    if (bit == 0) return {j.lo, (2 * j.lo + j.hi) / 3};
    return {(j.lo + 2 * j.hi) / 3, j.hi};
}

Interval interval_for_word(const std::vector<int>& bits) {
    Interval j{Rational(0), Rational(1)};
    for (int b : bits) j = ternary_child(j, b);
    return j;
}

std::vector<int> little_endian_bits(long l, int k) {
    std::vector<int> bits(k);
    for (int i = 0; i < k; ++i) bits[i] = static_cast<int>((l >> i) & 1);
    return bits;
}

Atom make_atom(int id, Geometry g) {
    Atom a;
    a.id = id;
    a.diameter = geometry_diameter(g);
    a.geometry = std::move(g);
    return a;
}

std::vector<int> invert(const std::vector<int>& pi) {
    std::vector<int> inv(pi.size(), -1);
    for (size_t i = 0; i < pi.size(); ++i) {
        int img = pi[i];
        if (img < 0 || img >= static_cast<int>(pi.size()) || inv[img] != -1)
            throw std::runtime_error("permutation is not a bijection");
        inv[img] = static_cast<int>(i);
    }
    return inv;
}

}  // namespace

bool PeriodSet::must_divide(const Integer& m) const {
    switch (kind) {
        case Kind::exact:
        case Kind::tail:
            return divides(value, m);
        default:
            return false;
    }
}

bool PeriodSet::may_divide(const Integer& m) const {
    switch (kind) {
        case Kind::exact:
        case Kind::tail:
            return divides(value, m);
        case Kind::unknown:
            return true;
        case Kind::none:
            return false;
    }
    return true;
}

PeriodSet PeriodSet::power(long n) const {
    if (n == 0) throw std::invalid_argument("zero power of a system");
    Integer a = n < 0 ? Integer(-n) : Integer(n);
    switch (kind) {
        case Kind::exact:
            return make_exact(value / gcd(value, a));
        case Kind::tail:
            // {b*2^t} maps elementwise to c/gcd(c, n); the union is again a tail.
            return make_tail(value / gcd(value, a));
        case Kind::none:
            return make_none();
        case Kind::unknown:
            return make_unknown();
    }
    return make_unknown();
}

int SystemLevel::forward(int atom, long steps) const {
    const auto& fwd = steps >= 0 ? pi : pi_inv;
    long n = steps >= 0 ? steps : -steps;
    int a = atom;
    for (long i = 0; i < n; ++i) a = fwd[a];
    return a;
}

Integer SystemLevel::cycle_length(int atom) const {
    Integer len = 1;
    for (int a = pi[atom]; a != atom; a = pi[a]) ++len;
    return len;
}

int SystemFamily::ancestor(int from, int atom, int to) const {
    if (to > from || to < 1) throw std::invalid_argument("bad ancestor levels");
    int a = atom;
    for (int k = from; k > to; --k) a = parent.at(static_cast<size_t>(k) - 2)[a];
    return a;
}

SystemFamily build_odometer(const std::vector<Integer>& chain, int K) {
    if (chain.empty() || K < 1 || K > static_cast<int>(chain.size()))
        throw std::invalid_argument("odometer level out of range of the chain");
    if (chain[0] < 2) throw std::invalid_argument("odometer chain must start at m1 >= 2");
    for (size_t i = 0; i + 1 < chain.size(); ++i) {
        if (!(chain[i] < chain[i + 1]) || !divides(chain[i], chain[i + 1]))
            throw std::invalid_argument("odometer chain broken at index " + std::to_string(i + 2) +
                                        ": " + chain[i + 1].get_str() + " is not a proper multiple of " +
                                        chain[i].get_str());
    }

    SystemFamily fam;
    for (int k = 1; k <= K; ++k) {
        const Integer& mk = chain[static_cast<size_t>(k) - 1];
        if (!mk.fits_slong_p()) throw std::invalid_argument("odometer level too large");
        const long n = mk.get_si();

        std::vector<unsigned> radix(static_cast<size_t>(k));
        Integer prev = 1;
        for (int t = 0; t < k; ++t) {
            Integer r = chain[static_cast<size_t>(t)] / prev;
            if (r > 255) throw std::invalid_argument("odometer radix exceeds word digit range");
            radix[static_cast<size_t>(t)] = static_cast<unsigned>(r.get_ui());
            prev = chain[static_cast<size_t>(t)];
        }

        std::vector<Atom> atoms;
        atoms.reserve(static_cast<size_t>(n));
        for (long l = 0; l < n; ++l) {
            CylinderWord w;
            w.digits.resize(static_cast<size_t>(k));
            long rest = l;
            for (int t = 0; t < k; ++t) {
                w.digits[static_cast<size_t>(t)] =
                    static_cast<uint8_t>(rest % radix[static_cast<size_t>(t)]);
                rest /= radix[static_cast<size_t>(t)];
            }
            atoms.push_back(make_atom(static_cast<int>(l), Geometry(std::move(w))));
        }

        SystemLevel lvl;
        lvl.model = make_model(k, MetricKind::cylinder_sup, std::move(atoms), radix);
        lvl.pi.resize(static_cast<size_t>(n));
        for (long l = 0; l < n; ++l) lvl.pi[static_cast<size_t>(l)] = static_cast<int>((l + 1) % n);
        lvl.pi_inv = invert(lvl.pi);
        lvl.periods.assign(static_cast<size_t>(n), PeriodSet::make_none());
        fam.levels.push_back(std::move(lvl));

        if (k > 1) {
            const Integer& mprev = chain[static_cast<size_t>(k) - 2];
            std::vector<int> par(static_cast<size_t>(n));
            for (long l = 0; l < n; ++l)
                par[static_cast<size_t>(l)] = static_cast<int>(Integer(Integer(l) % mprev).get_si());
            fam.parent.push_back(std::move(par));
        }
    }
    return fam;
}

SystemFamily embed_binary_odometer(int K) {
    if (K < 1) throw std::invalid_argument("level must be positive");
    SystemFamily fam;
    for (int k = 1; k <= K; ++k) {
        const long n = 1L << k;
        std::vector<Atom> atoms;
        atoms.reserve(static_cast<size_t>(n));
        for (long l = 0; l < n; ++l) {
            Interval iv = interval_for_word(little_endian_bits(l, k));
            atoms.push_back(make_atom(static_cast<int>(l), Geometry(iv)));
        }
        SystemLevel lvl;
        lvl.model = make_model(k, MetricKind::interval, std::move(atoms));
        lvl.pi.resize(static_cast<size_t>(n));
        for (long l = 0; l < n; ++l) lvl.pi[static_cast<size_t>(l)] = static_cast<int>((l + 1) % n);
        lvl.pi_inv = invert(lvl.pi);
        lvl.periods.assign(static_cast<size_t>(n), PeriodSet::make_none());
        fam.levels.push_back(std::move(lvl));
        if (k > 1) {
            std::vector<int> par(static_cast<size_t>(n));
            for (long l = 0; l < n; ++l) par[static_cast<size_t>(l)] = static_cast<int>(l % (n / 2));
            fam.parent.push_back(std::move(par));
        }
    }
    return fam;
}

SystemFamily build_modified_odometer(int K) {
    if (K < 2) throw std::invalid_argument("the modified odometer example needs level >= 2");
    SystemFamily fam;
    for (int k = 1; k <= K; ++k) {
        const long jcount = 1L << k;
        std::vector<Atom> atoms;
        std::vector<int> pi;
        std::vector<PeriodSet> periods;

        for (long l = 0; l < jcount; ++l) {
            Interval iv = interval_for_word(little_endian_bits(l, k));
            atoms.push_back(make_atom(static_cast<int>(l), Geometry(iv)));
            pi.push_back(static_cast<int>((l + 1) % jcount));
            periods.push_back(PeriodSet::make_tail(Integer(3) * jcount));
        }

        for (int j = 1; j <= k - 1; ++j) {
            const long cyc = 3L * (1L << j);
            const int base = static_cast<int>(jcount) + 3 * ((1 << j) - 2);
            for (long i = 0; i < cyc; ++i) {
                const long l = i % (1L << j);
                const long c = i / (1L << j);
                Interval host = interval_for_word(little_endian_bits(l, j));
                const Rational h = host.hi - host.lo;
                ScaledCantor piece;
                piece.offset = (2 * host.lo + host.hi) / 3 + Rational(c + 1) * h / 12;
                piece.scale = h / 24;
                atoms.push_back(make_atom(base + static_cast<int>(i), Geometry(piece)));
                pi.push_back(base + static_cast<int>((i + 1) % cyc));
                periods.push_back(PeriodSet::make_exact(Integer(cyc)));
            }
        }

        SystemLevel lvl;
        lvl.model = make_model(k, MetricKind::interval, std::move(atoms));
        lvl.pi = std::move(pi);
        lvl.pi_inv = invert(lvl.pi);
        lvl.periods = std::move(periods);
        fam.levels.push_back(std::move(lvl));

        if (k > 1) {
            const long nprev = jcount / 2;
            std::vector<int> par;
            for (long n = 0; n < jcount; ++n) par.push_back(static_cast<int>(n % nprev));
            for (int j = 1; j <= k - 1; ++j) {
                const long cyc = 3L * (1L << j);
                for (long i = 0; i < cyc; ++i) {
                    if (j <= k - 2) {
                        par.push_back(static_cast<int>(nprev) + 3 * ((1 << j) - 2) +
                                      static_cast<int>(i));
                    } else {
                        // Pieces of the deepest band sit inside the previous level's
                        // interval atoms.
                        par.push_back(static_cast<int>(i % (1L << j)));
                    }
                }
            }
            fam.parent.push_back(std::move(par));
        }
    }
    return fam;
}

SystemLevel build_identity(ModelPtr model) {
    SystemLevel lvl;
    lvl.pi.resize(static_cast<size_t>(model->size()));
    std::iota(lvl.pi.begin(), lvl.pi.end(), 0);
    lvl.pi_inv = lvl.pi;
    lvl.periods.assign(static_cast<size_t>(model->size()), PeriodSet::make_exact(Integer(1)));
    lvl.model = std::move(model);
    return lvl;
}

SystemFamily build_identity_intervals(int atoms) {
    if (atoms < 1) throw std::invalid_argument("need at least one atom");
    std::vector<Atom> list;
    for (int i = 0; i < atoms; ++i) {
        Interval iv{Rational(2 * i, 2 * atoms), Rational(2 * i + 1, 2 * atoms)};
        iv.lo.canonicalize();
        iv.hi.canonicalize();
        list.push_back(make_atom(i, Geometry(iv)));
    }
    SystemFamily fam;
    fam.levels.push_back(build_identity(make_model(1, MetricKind::interval, std::move(list))));
    return fam;
}

SystemLevel level_power(const SystemLevel& sys, long n) {
    if (n == 0) throw std::invalid_argument("zero power of a system");
    SystemLevel out;
    out.model = sys.model;
    const int sz = sys.size();
    out.pi.resize(static_cast<size_t>(sz));
    for (int a = 0; a < sz; ++a) {
        // |n| is reduced along each atom's own cycle.
        Integer len = sys.cycle_length(a);
        Integer steps = Integer(n < 0 ? -n : n) % len;
        int img = a;
        for (Integer s = 0; s < steps; ++s) img = n >= 0 ? sys.pi[img] : sys.pi_inv[img];
        out.pi[static_cast<size_t>(a)] = img;
    }
    out.pi_inv = invert(out.pi);
    out.periods.reserve(static_cast<size_t>(sz));
    for (const PeriodSet& p : sys.periods) out.periods.push_back(p.power(n));
    return out;
}

SystemFamily family_power(const SystemFamily& sys, long n) {
    SystemFamily out;
    out.parent = sys.parent;
    out.levels.reserve(sys.levels.size());
    for (const SystemLevel& lvl : sys.levels) out.levels.push_back(level_power(lvl, n));
    return out;
}

SystemLevel perturb(const SystemLevel& sys, const std::vector<int>& tau) {
    if (tau.size() != sys.pi.size()) throw std::invalid_argument("perturbation size mismatch");
    invert(tau);  // validates bijectivity
    SystemLevel out;
    out.model = sys.model;
    out.pi.resize(tau.size());
    bool moved = false;
    for (size_t a = 0; a < tau.size(); ++a) {
        out.pi[a] = tau[static_cast<size_t>(sys.pi[a])];
        if (tau[a] != static_cast<int>(a)) moved = true;
    }
    out.pi_inv = invert(out.pi);
    out.periods = moved ? std::vector<PeriodSet>(tau.size(), PeriodSet::make_unknown())
                        : sys.periods;
    return out;
}

SystemDistance system_distance(const SystemLevel& f, const SystemLevel& g) {
    if (!models_equal(*f.model, *g.model))
        throw std::invalid_argument("system distance needs a shared model");
    const FiniteModel& m = *f.model;
    auto bound = [&](const std::vector<int>& a, const std::vector<int>& b) {
        DistanceBounds out{Rational(0), Rational(0)};
        for (int i = 0; i < m.size(); ++i) {
            out.lower = std::max(out.lower, m.dmin(a[i], b[i]));
            out.upper = std::max(out.upper, m.dmax(a[i], b[i]));
        }
        return out;
    };
    SystemDistance d;
    d.forward = bound(f.pi, g.pi);
    d.backward = bound(f.pi_inv, g.pi_inv);
    d.total = {std::max(d.forward.lower, d.backward.lower),
               std::max(d.forward.upper, d.backward.upper)};
    return d;
}

bool models_equal(const FiniteModel& a, const FiniteModel& b) {
    if (&a == &b) return true;
    if (a.level != b.level || a.metric_kind != b.metric_kind || a.radix != b.radix ||
        a.atoms.size() != b.atoms.size())
        return false;
    for (size_t i = 0; i < a.atoms.size(); ++i) {
        const Geometry& ga = a.atoms[i].geometry;
        const Geometry& gb = b.atoms[i].geometry;
        if (ga.index() != gb.index()) return false;
        if (const auto* wa = std::get_if<CylinderWord>(&ga)) {
            if (wa->digits != std::get<CylinderWord>(gb).digits) return false;
        } else if (const auto* ia = std::get_if<Interval>(&ga)) {
            const auto& ib = std::get<Interval>(gb);
            if (ia->lo != ib.lo || ia->hi != ib.hi) return false;
        } else {
            const auto& sa = std::get<ScaledCantor>(ga);
            const auto& sb = std::get<ScaledCantor>(gb);
            if (sa.offset != sb.offset || sa.scale != sb.scale) return false;
        }
    }
    return true;
}

namespace {

bool geometry_contains(const Geometry& parent, const Geometry& child) {
    if (const auto* wp = std::get_if<CylinderWord>(&parent)) {
        const auto* wc = std::get_if<CylinderWord>(&child);
        if (!wc || wc->digits.size() < wp->digits.size()) return false;
        for (size_t i = 0; i < wp->digits.size(); ++i)
            if (wp->digits[i] != wc->digits[i]) return false;
        return true;
    }
    return !(hull_lo(child) < hull_lo(parent)) && !(hull_hi(parent) < hull_hi(child));
}

}  // namespace

void check_family_invariants(const SystemFamily& family) {
    if (family.levels.empty()) throw std::runtime_error("empty family");
    if (family.parent.size() + 1 != family.levels.size())
        throw std::runtime_error("family parent maps do not match level count");
    for (const SystemLevel& lvl : family.levels) {
        if (static_cast<int>(lvl.pi.size()) != lvl.size() ||
            lvl.pi_inv.size() != lvl.pi.size() || lvl.periods.size() != lvl.pi.size())
            throw std::runtime_error("level arrays sized inconsistently");
        std::vector<int> inv = invert(lvl.pi);
        if (inv != lvl.pi_inv) throw std::runtime_error("stored inverse is wrong");
    }
    for (size_t k = 0; k + 1 < family.levels.size(); ++k) {
        const SystemLevel& coarse = family.levels[k];
        const SystemLevel& fine = family.levels[k + 1];
        const std::vector<int>& par = family.parent[k];
        if (par.size() != fine.pi.size()) throw std::runtime_error("parent map sized wrong");
        for (int a = 0; a < fine.size(); ++a) {
            int p = par[static_cast<size_t>(a)];
            if (p < 0 || p >= coarse.size()) throw std::runtime_error("parent id out of range");
            if (par[static_cast<size_t>(fine.pi[a])] != coarse.pi[static_cast<size_t>(p)])
                throw std::runtime_error("refinement does not commute with the dynamics at level " +
                                         std::to_string(k + 2) + ", atom " + std::to_string(a));
            if (!geometry_contains(coarse.model->atoms[static_cast<size_t>(p)].geometry,
                                   fine.model->atoms[static_cast<size_t>(a)].geometry))
                throw std::runtime_error("child atom escapes its parent at level " +
                                         std::to_string(k + 2) + ", atom " + std::to_string(a));
        }
    }
}

bool family_is_level_preserving(const SystemFamily& family) {
    try {
        check_family_invariants(family);
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace clopen
