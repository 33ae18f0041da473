#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "poly.hpp"

namespace qfi {

// Term orders for basis computations. The elimination mask, when nonempty,
// ranks any monomial touching a masked variable above all unmasked ones, so
// a basis intersected with the kept variables generates the elimination
// ideal.
class MonomialOrder {
public:
    static MonomialOrder grevlex();
    static MonomialOrder lex();
    // grevlex within blocks, eliminated block first
    static MonomialOrder elimination(const std::set<std::uint32_t>& eliminated);

    bool less(const Monomial& a, const Monomial& b) const;

private:
    enum class Kind { Grevlex, Lex } kind_ = Kind::Grevlex;
    std::set<std::uint32_t> eliminated_;
};

// Hard caps; Buchberger is doubly exponential in the worst case, so every
// run carries explicit limits and overruns surface as BudgetError.
struct GroebnerBudget {
    std::size_t max_pairs = 20000;
    std::size_t max_basis = 256;
    unsigned max_degree = 24;
    std::size_t max_terms = 20000;
};

// Reduced monic Groebner basis of the generated ideal. The unit ideal comes
// back as the single polynomial 1.
std::vector<Poly> buchberger(std::vector<Poly> gens, const MonomialOrder& order,
                             const GroebnerBudget& budget = {});

// Full normal form of p against basis.
Poly normal_form(const Poly& p, std::span<const Poly> basis, const MonomialOrder& order,
                 const GroebnerBudget& budget = {});

// Generators of (ideal of gens) intersected with polynomials in keep.
std::vector<Poly> eliminate(std::vector<Poly> gens, const std::set<std::uint32_t>& keep,
                            const GroebnerBudget& budget = {});

// Dense univariate polynomial over Q, ascending coefficients.
struct UniPoly {
    std::vector<Rat> coeffs;

    static UniPoly from_poly(const Poly& p, std::uint32_t var);

    bool is_zero() const { return coeffs.empty(); }
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    Rat eval(const Rat& x) const;
    UniPoly derivative() const;
    std::string str() const;

    bool operator==(const UniPoly&) const = default;
};

struct Interval {
    Rat lo, hi;
    Rat width() const { return hi - lo; }
    bool contains_zero() const { return lo <= 0 && 0 <= hi; }
};

struct Box {
    std::vector<Interval> dims;
};

// Disjoint isolating intervals with rational endpoints, one per distinct
// real root. A rational root may come back as a point interval.
std::vector<Interval> sturm_isolate(const UniPoly& p);

// Bisects an isolating interval until it is no wider than width.
Interval sturm_refine(const UniPoly& p, Interval iv, const Rat& width);

// True iff every real root of p is <= c (vacuously true without real
// roots). Decided exactly by Sturm sign counts on (c, +inf).
bool max_real_root_leq(const UniPoly& p, const Rat& c);

// Encloses p over the box, outward-rounded to dyadics with round_bits
// fractional bits.
Interval interval_eval(const Poly& p, const Box& box, unsigned round_bits = 32);

struct BbBudget {
    std::size_t max_nodes = 8192;
    unsigned min_width_bits = 10;      // stop splitting below width 2^-bits
    std::optional<Rat> target;         // resolve a box once its bound is <= target
};

struct BbResult {
    std::optional<Rat> bound;  // empty = infeasible everywhere (sup over the empty set)
    bool certified = false;    // all boxes resolved within the node budget
    std::size_t nodes = 0;
};

// Certified upper bound of sup { objective(x) : x in region, all
// constraints = 0 } by recursive box splitting; boxes where a constraint
// enclosure excludes zero are pruned. The bound is sound regardless of the
// budget; certified reports whether every box was resolved.
BbResult bb_sup_bound(const Poly& objective, std::span<const Poly> constraints,
                      const Box& region, const BbBudget& budget = {});

}  // namespace qfi
