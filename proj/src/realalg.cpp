#include "realalg.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "errors.hpp"

namespace qfi {

// ---------------------------------------------------------- monomial order

MonomialOrder MonomialOrder::grevlex() { return {}; }

MonomialOrder MonomialOrder::lex() {
    MonomialOrder o;
    o.kind_ = Kind::Lex;
    return o;
}

MonomialOrder MonomialOrder::elimination(const std::set<std::uint32_t>& eliminated) {
    MonomialOrder o;
    o.eliminated_ = eliminated;
    return o;
}

namespace {

// grevlex on a sparse exponent vector restricted to a variable filter
template <typename Filter>
int grevlex_cmp(const Monomial& a, const Monomial& b, Filter keep) {
    unsigned da = 0, db = 0;
    for (auto& [v, e] : a.factors)
        if (keep(v)) da += e;
    for (auto& [v, e] : b.factors)
        if (keep(v)) db += e;
    if (da != db) return da < db ? -1 : 1;
    // reverse lexicographic: scan from the highest variable downward; the
    // monomial with the larger exponent at the first difference is smaller.
    auto ia = a.factors.rbegin(), ib = b.factors.rbegin();
    while (true) {
        while (ia != a.factors.rend() && !keep(ia->first)) ++ia;
        while (ib != b.factors.rend() && !keep(ib->first)) ++ib;
        if (ia == a.factors.rend() && ib == b.factors.rend()) return 0;
        if (ia == a.factors.rend()) return 1;   // a ran out: b has trailing vars -> b smaller
        if (ib == b.factors.rend()) return -1;
        if (ia->first != ib->first) {
            // larger trailing variable present means smaller monomial
            return ia->first > ib->first ? -1 : 1;
        }
        if (ia->second != ib->second) return ia->second > ib->second ? -1 : 1;
        ++ia, ++ib;
    }
}

int lex_cmp(const Monomial& a, const Monomial& b) {
    std::size_t i = 0, j = 0;
    while (i < a.factors.size() && j < b.factors.size()) {
        if (a.factors[i].first != b.factors[j].first)
            return a.factors[i].first < b.factors[j].first ? 1 : -1;
        if (a.factors[i].second != b.factors[j].second)
            return a.factors[i].second < b.factors[j].second ? -1 : 1;
        ++i, ++j;
    }
    if (i < a.factors.size()) return 1;
    if (j < b.factors.size()) return -1;
    return 0;
}

}  // namespace

bool MonomialOrder::less(const Monomial& a, const Monomial& b) const {
    if (!eliminated_.empty()) {
        int c = grevlex_cmp(a, b, [&](std::uint32_t v) { return eliminated_.count(v) > 0; });
        if (c != 0) return c < 0;
        return grevlex_cmp(a, b, [&](std::uint32_t v) { return eliminated_.count(v) == 0; }) < 0;
    }
    if (kind_ == Kind::Lex) return lex_cmp(a, b) < 0;
    return grevlex_cmp(a, b, [](std::uint32_t) { return true; }) < 0;
}

// -------------------------------------------------------------- buchberger

namespace {

const Monomial& leading_monomial(const Poly& p, const MonomialOrder& order) {
    if (p.is_zero()) throw InternalError("leading monomial of zero");
    const Monomial* best = nullptr;
    for (auto& [m, c] : p.terms())
        if (!best || order.less(*best, m)) best = &m;
    return *best;
}

const Rat& coeff_of(const Poly& p, const Monomial& m) {
    static const Rat zero(0);
    auto it = p.terms().find(m);
    return it == p.terms().end() ? zero : it->second;
}

void check_poly_budget(const Poly& p, const GroebnerBudget& budget) {
    if (p.degree() > budget.max_degree)
        throw BudgetError("polynomial degree exceeded the basis budget");
    if (p.terms().size() > budget.max_terms)
        throw BudgetError("polynomial term count exceeded the basis budget");
}

Poly make_monic(const Poly& p, const MonomialOrder& order) {
    if (p.is_zero()) return p;
    const Rat lead = coeff_of(p, leading_monomial(p, order));
    return p.scaled(1 / lead);
}

Poly reduce_full(Poly p, std::span<const Poly> basis, const MonomialOrder& order,
                 const GroebnerBudget& budget) {
    Poly remainder;
    std::size_t steps = 0;
    while (!p.is_zero()) {
        if (++steps > budget.max_pairs + budget.max_terms)
            throw BudgetError("reduction step budget exceeded");
        const Monomial lead = leading_monomial(p, order);
        bool reduced = false;
        for (const Poly& g : basis) {
            if (g.is_zero()) continue;
            const Monomial& gl = leading_monomial(g, order);
            if (!gl.divides(lead)) continue;
            const Rat factor = coeff_of(p, lead) / coeff_of(g, gl);
            p -= g.times_term(lead.divided_by(gl), factor);
            check_poly_budget(p, budget);
            reduced = true;
            break;
        }
        if (!reduced) {
            const Rat c = coeff_of(p, lead);
            remainder.add_term(lead, c);
            p.add_term(lead, -c);
        }
    }
    return remainder;
}

}  // namespace

Poly normal_form(const Poly& p, std::span<const Poly> basis, const MonomialOrder& order,
                 const GroebnerBudget& budget) {
    return reduce_full(p, basis, order, budget);
}

std::vector<Poly> buchberger(std::vector<Poly> gens, const MonomialOrder& order,
                             const GroebnerBudget& budget) {
    std::vector<Poly> basis;
    for (Poly& g : gens) {
        if (g.is_zero()) continue;
        check_poly_budget(g, budget);
        basis.push_back(make_monic(g, order));
    }

    struct Pair {
        std::size_t i, j;
        Monomial l;
        unsigned degree;
    };
    auto pair_less = [&](const Pair& a, const Pair& b) {
        if (a.degree != b.degree) return a.degree < b.degree;
        if (a.l != b.l) return order.less(a.l, b.l);
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    };

    std::vector<Pair> queue;
    auto push_pairs = [&](std::size_t upto) {
        for (std::size_t i = 0; i < upto; ++i) {
            Monomial l = lcm(leading_monomial(basis[i], order), leading_monomial(basis[upto], order));
            queue.push_back({i, upto, l, l.degree()});
        }
        std::sort(queue.begin(), queue.end(), pair_less);
    };
    for (std::size_t k = 1; k < basis.size(); ++k) push_pairs(k);

    std::size_t processed = 0;
    while (!queue.empty()) {
        if (++processed > budget.max_pairs) throw BudgetError("critical pair budget exceeded");
        Pair pr = queue.front();
        queue.erase(queue.begin());

        const Monomial& li = leading_monomial(basis[pr.i], order);
        const Monomial& lj = leading_monomial(basis[pr.j], order);
        if (coprime(li, lj)) continue;  // first Buchberger criterion

        Poly s = basis[pr.i].times_term(pr.l.divided_by(li), 1) -
                 basis[pr.j].times_term(pr.l.divided_by(lj), 1);
        check_poly_budget(s, budget);
        Poly r = reduce_full(std::move(s), basis, order, budget);
        if (r.is_zero()) continue;
        if (r.is_constant()) return {Poly::constant(1)};  // unit ideal
        basis.push_back(make_monic(r, order));
        if (basis.size() > budget.max_basis) throw BudgetError("basis size budget exceeded");
        push_pairs(basis.size() - 1);
    }

    // minimalize: drop elements whose lead is divisible by another lead
    std::vector<Poly> minimal;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const Monomial& li = leading_monomial(basis[i], order);
        bool redundant = false;
        for (std::size_t j = 0; j < basis.size() && !redundant; ++j) {
            if (i == j) continue;
            const Monomial& lj = leading_monomial(basis[j], order);
            if (lj.divides(li) && (lj != li || j < i)) redundant = true;
        }
        if (!redundant) minimal.push_back(basis[i]);
    }

    // inter-reduce to the unique reduced basis
    std::vector<Poly> reduced;
    for (std::size_t i = 0; i < minimal.size(); ++i) {
        std::vector<Poly> others;
        for (std::size_t j = 0; j < minimal.size(); ++j)
            if (j != i) others.push_back(minimal[j]);
        Poly r = reduce_full(minimal[i], others, order, budget);
        if (!r.is_zero()) reduced.push_back(make_monic(r, order));
    }
    std::sort(reduced.begin(), reduced.end(), [&](const Poly& a, const Poly& b) {
        return order.less(leading_monomial(a, order), leading_monomial(b, order));
    });
    return reduced;
}

std::vector<Poly> eliminate(std::vector<Poly> gens, const std::set<std::uint32_t>& keep,
                            const GroebnerBudget& budget) {
    std::uint32_t universe = 0;
    for (const Poly& g : gens) universe = std::max(universe, g.max_var());
    std::set<std::uint32_t> eliminated;
    for (std::uint32_t v = 0; v < universe; ++v)
        if (!keep.count(v)) eliminated.insert(v);

    std::vector<Poly> gb = buchberger(std::move(gens), MonomialOrder::elimination(eliminated),
                                      budget);
    std::vector<Poly> kept;
    for (const Poly& g : gb) {
        bool ok = true;
        for (auto& [m, c] : g.terms())
            for (auto& [v, e] : m.factors)
                if (eliminated.count(v)) ok = false;
        if (ok) kept.push_back(g);
    }
    return kept;
}

// ----------------------------------------------------------------- UniPoly

UniPoly UniPoly::from_poly(const Poly& p, std::uint32_t var) {
    UniPoly u;
    for (auto& [m, c] : p.terms()) {
        unsigned e = 0;
        for (auto& [v, k] : m.factors) {
            if (v != var) throw DimensionError("polynomial is not univariate in the given variable");
            e = k;
        }
        if (u.coeffs.size() <= e) u.coeffs.resize(e + 1, Rat(0));
        u.coeffs[e] = c;
    }
    while (!u.coeffs.empty() && u.coeffs.back() == 0) u.coeffs.pop_back();
    return u;
}

Rat UniPoly::eval(const Rat& x) const {
    Rat v = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
    return v;
}

UniPoly UniPoly::derivative() const {
    UniPoly d;
    for (std::size_t i = 1; i < coeffs.size(); ++i) d.coeffs.push_back(coeffs[i] * Rat(static_cast<long>(i)));
    while (!d.coeffs.empty() && d.coeffs.back() == 0) d.coeffs.pop_back();
    return d;
}

std::string UniPoly::str() const {
    if (coeffs.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        if (coeffs[i] == 0) continue;
        Rat a = coeffs[i];
        if (first) {
            if (a < 0) {
                out << "-";
                a = -a;
            }
        } else {
            out << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        if (i == 0 || a != 1) out << rat_str(a);
        if (i >= 1) {
            if (a != 1) out << "*";
            out << "t";
            if (i > 1) out << "^" << i;
        }
    }
    return out.str();
}

// ------------------------------------------------------------------- Sturm

namespace {

UniPoly uni_rem(UniPoly a, const UniPoly& b) {
    if (b.is_zero()) throw InternalError("polynomial remainder by zero");
    while (!a.is_zero() && a.degree() >= b.degree()) {
        Rat factor = a.coeffs.back() / b.coeffs.back();
        int shift = a.degree() - b.degree();
        for (std::size_t i = 0; i < b.coeffs.size(); ++i)
            a.coeffs[i + shift] -= factor * b.coeffs[i];
        while (!a.coeffs.empty() && a.coeffs.back() == 0) a.coeffs.pop_back();
    }
    return a;
}

UniPoly uni_gcd(UniPoly a, UniPoly b) {
    while (!b.is_zero()) {
        UniPoly r = uni_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.is_zero()) {
        Rat lead = a.coeffs.back();
        for (auto& c : a.coeffs) c /= lead;
    }
    return a;
}

UniPoly uni_div_exact(const UniPoly& a, const UniPoly& b) {
    UniPoly rem = a;
    UniPoly q;
    q.coeffs.assign(std::max(0, a.degree() - b.degree() + 1), Rat(0));
    while (!rem.is_zero() && rem.degree() >= b.degree()) {
        Rat factor = rem.coeffs.back() / b.coeffs.back();
        int shift = rem.degree() - b.degree();
        q.coeffs[shift] = factor;
        for (std::size_t i = 0; i < b.coeffs.size(); ++i)
            rem.coeffs[i + shift] -= factor * b.coeffs[i];
        while (!rem.coeffs.empty() && rem.coeffs.back() == 0) rem.coeffs.pop_back();
    }
    if (!rem.is_zero()) throw InternalError("inexact polynomial division");
    while (!q.coeffs.empty() && q.coeffs.back() == 0) q.coeffs.pop_back();
    return q;
}

UniPoly squarefree_part(const UniPoly& p) {
    UniPoly d = p.derivative();
    if (d.is_zero()) return p;  // constant or zero
    UniPoly g = uni_gcd(p, d);
    if (g.degree() <= 0) return p;
    return uni_div_exact(p, g);
}

std::vector<UniPoly> sturm_chain(const UniPoly& p) {
    std::vector<UniPoly> chain;
    chain.push_back(p);
    UniPoly d = p.derivative();
    if (d.is_zero()) return chain;
    chain.push_back(d);
    while (true) {
        UniPoly r = uni_rem(chain[chain.size() - 2], chain.back());
        if (r.is_zero()) break;
        for (auto& c : r.coeffs) c = -c;
        chain.push_back(std::move(r));
    }
    return chain;
}

int sign_at(const UniPoly& p, const Rat& x) {
    Rat v = p.eval(x);
    return v == 0 ? 0 : (v > 0 ? 1 : -1);
}

int sign_at_plus_inf(const UniPoly& p) {
    if (p.is_zero()) return 0;
    return p.coeffs.back() > 0 ? 1 : -1;
}

int sign_at_minus_inf(const UniPoly& p) {
    if (p.is_zero()) return 0;
    int s = p.coeffs.back() > 0 ? 1 : -1;
    return (p.degree() % 2 == 0) ? s : -s;
}

int count_variations(const std::vector<int>& signs) {
    int count = 0, prev = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++count;
        prev = s;
    }
    return count;
}

int variations_at(const std::vector<UniPoly>& chain, const Rat& x) {
    std::vector<int> signs;
    signs.reserve(chain.size());
    for (const auto& q : chain) signs.push_back(sign_at(q, x));
    return count_variations(signs);
}

// roots in the half-open interval (a, b]
int roots_in(const std::vector<UniPoly>& chain, const Rat& a, const Rat& b) {
    return variations_at(chain, a) - variations_at(chain, b);
}

// power-of-two bound beyond every real root (Cauchy bound rounded up)
Rat root_bound(const UniPoly& p) {
    Rat maxratio = 0;
    const Rat& lead = p.coeffs.back();
    for (std::size_t i = 0; i + 1 < p.coeffs.size(); ++i)
        maxratio = std::max(maxratio, rat_abs(p.coeffs[i] / lead));
    Rat bound = maxratio + 1;
    Rat b = 1;
    while (b < bound) b *= 2;
    return b;
}

}  // namespace

std::vector<Interval> sturm_isolate(const UniPoly& p) {
    if (p.is_zero()) throw DimensionError("root isolation of the zero polynomial");
    if (p.degree() == 0) return {};
    UniPoly sf = squarefree_part(p);
    std::vector<UniPoly> chain = sturm_chain(sf);
    Rat bound = root_bound(sf);

    std::vector<Interval> isolated;
    // (lo, hi] segments; endpoints are never roots of sf by construction
    std::deque<Interval> work;
    work.push_back({-bound, bound});
    while (!work.empty()) {
        Interval iv = work.front();
        work.pop_front();
        int count = roots_in(chain, iv.lo, iv.hi);
        if (count == 0) continue;
        if (count == 1) {
            isolated.push_back(iv);
            continue;
        }
        Rat mid = (iv.lo + iv.hi) / 2;
        if (sf.eval(mid) == 0) {
            // exact rational root at the midpoint: emit a point interval and
            // shrink a gap around it that provably contains no other root
            isolated.push_back({mid, mid});
            Rat eps = (iv.hi - iv.lo) / 4;
            while (sf.eval(mid - eps) == 0 || sf.eval(mid + eps) == 0 ||
                   roots_in(chain, mid - eps, mid + eps) != 1)
                eps /= 2;
            work.push_back({iv.lo, mid - eps});
            work.push_back({mid + eps, iv.hi});
        } else {
            work.push_back({iv.lo, mid});
            work.push_back({mid, iv.hi});
        }
    }
    for (Interval& iv : isolated) iv = sturm_refine(sf, iv, Rat(1, 2));
    std::sort(isolated.begin(), isolated.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    return isolated;
}

Interval sturm_refine(const UniPoly& p, Interval iv, const Rat& width) {
    if (iv.lo == iv.hi) return iv;
    UniPoly sf = squarefree_part(p);
    std::vector<UniPoly> chain = sturm_chain(sf);
    while (iv.hi - iv.lo > width) {
        Rat mid = (iv.lo + iv.hi) / 2;
        if (sf.eval(mid) == 0) return {mid, mid};
        if (roots_in(chain, iv.lo, mid) == 1) iv.hi = mid;
        else iv.lo = mid;
    }
    return iv;
}

bool max_real_root_leq(const UniPoly& p, const Rat& c) {
    if (p.is_zero()) throw DimensionError("root bound test on the zero polynomial");
    if (p.degree() == 0) return true;  // no roots at all
    UniPoly sf = squarefree_part(p);
    std::vector<UniPoly> chain = sturm_chain(sf);
    std::vector<int> far;
    for (const auto& q : chain) far.push_back(sign_at_plus_inf(q));
    // roots in (c, +inf)
    return variations_at(chain, c) - count_variations(far) == 0;
}

// --------------------------------------------------------------- intervals

namespace {

Rat round_down(const Rat& x, unsigned bits) {
    Int scaled;
    Rat sx = x * Rat(Int(1) << bits);
    mpz_fdiv_q(scaled.get_mpz_t(), sx.get_num_mpz_t(), sx.get_den_mpz_t());
    return Rat(scaled) / Rat(Int(1) << bits);
}

Rat round_up(const Rat& x, unsigned bits) {
    Int scaled;
    Rat sx = x * Rat(Int(1) << bits);
    mpz_cdiv_q(scaled.get_mpz_t(), sx.get_num_mpz_t(), sx.get_den_mpz_t());
    return Rat(scaled) / Rat(Int(1) << bits);
}

Interval iv_pow(const Interval& x, unsigned e) {
    if (e == 0) return {Rat(1), Rat(1)};
    if (e == 1) return x;
    if (e % 2 == 1) {
        // odd powers are monotone
        Rat lo = x.lo, hi = x.hi;
        for (unsigned k = 1; k < e; ++k) {
            lo *= x.lo;
            hi *= x.hi;
        }
        return {lo, hi};
    }
    Rat alo = rat_abs(x.lo), ahi = rat_abs(x.hi);
    Rat big = std::max(alo, ahi), small = std::min(alo, ahi);
    Rat hi = 1, lo = 1;
    for (unsigned k = 0; k < e; ++k) hi *= big;
    if (x.contains_zero()) {
        lo = 0;
    } else {
        for (unsigned k = 0; k < e; ++k) lo *= small;
    }
    return {lo, hi};
}

Interval iv_mul(const Interval& a, const Interval& b) {
    Rat p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    return {std::min(std::min(p1, p2), std::min(p3, p4)),
            std::max(std::max(p1, p2), std::max(p3, p4))};
}

}  // namespace

Interval interval_eval(const Poly& p, const Box& box, unsigned round_bits) {
    Interval total{Rat(0), Rat(0)};
    for (auto& [m, c] : p.terms()) {
        Interval t{c, c};
        for (auto& [v, e] : m.factors) {
            if (v >= box.dims.size()) throw DimensionError("box does not cover the polynomial");
            t = iv_mul(t, iv_pow(box.dims[v], e));
        }
        total = {total.lo + t.lo, total.hi + t.hi};
    }
    return {round_down(total.lo, round_bits), round_up(total.hi, round_bits)};
}

// --------------------------------------------------------- branch & bound

BbResult bb_sup_bound(const Poly& objective, std::span<const Poly> constraints,
                      const Box& region, const BbBudget& budget) {
    // only variables that occur anywhere are worth splitting
    std::vector<std::uint32_t> support;
    {
        std::set<std::uint32_t> s;
        auto collect = [&](const Poly& p) {
            for (auto& [m, c] : p.terms())
                for (auto& [v, e] : m.factors) s.insert(v);
        };
        collect(objective);
        for (const Poly& c : constraints) collect(c);
        support.assign(s.begin(), s.end());
    }
    const Rat min_width = Rat(1) / Rat(Int(1) << budget.min_width_bits);

    struct Node {
        Box box;
        unsigned depth;
    };
    std::deque<Node> work;
    work.push_back({region, 0});

    BbResult result;
    bool any_leaf = false;
    Rat best = 0;

    auto fold_leaf = [&](const Rat& hi) {
        if (!any_leaf || hi > best) best = hi;
        any_leaf = true;
    };

    auto process = [&](const Node& node, bool allow_split) -> std::optional<Box> {
        unsigned bits = std::min(32u * (1u << std::min(node.depth / 8, 5u)), 4096u);
        for (const Poly& c : constraints) {
            Interval ci = interval_eval(c, node.box, bits);
            if (!ci.contains_zero()) return std::nullopt;  // infeasible: prune
        }
        Interval oi = interval_eval(objective, node.box, bits);
        if (budget.target && oi.hi <= *budget.target) {
            fold_leaf(oi.hi);
            return std::nullopt;
        }
        // widest supported dimension
        std::uint32_t widest = 0;
        Rat wmax = -1;
        for (std::uint32_t v : support) {
            if (v >= node.box.dims.size()) throw DimensionError("region does not cover variables");
            Rat w = node.box.dims[v].width();
            if (w > wmax) {
                wmax = w;
                widest = v;
            }
        }
        if (!allow_split || support.empty() || wmax <= min_width) {
            fold_leaf(oi.hi);
            return std::nullopt;
        }
        Box half = node.box;
        Rat mid = (node.box.dims[widest].lo + node.box.dims[widest].hi) / 2;
        half.dims[widest] = {node.box.dims[widest].lo, mid};
        Box other = node.box;
        other.dims[widest] = {mid, node.box.dims[widest].hi};
        work.push_back({std::move(other), node.depth + 1});
        return half;
    };

    bool exhausted = false;
    while (!work.empty()) {
        if (result.nodes >= budget.max_nodes) {
            exhausted = true;
            break;
        }
        Node node = std::move(work.front());
        work.pop_front();
        ++result.nodes;
        std::optional<Box> half = process(node, true);
        while (half) {
            if (result.nodes >= budget.max_nodes) {
                exhausted = true;
                work.push_front({std::move(*half), node.depth + 1});
                break;
            }
            ++result.nodes;
            Node next{std::move(*half), node.depth + 1};
            half = process(next, true);
        }
        if (exhausted) break;
    }

    if (exhausted) {
        // remaining boxes still contribute sound interval bounds
        for (const Node& node : work) {
            (void)process(node, false);
        }
    }

    result.certified = !exhausted;
    if (any_leaf) result.bound = best;
    return result;
}

}  // namespace qfi
