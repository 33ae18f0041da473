#include "decide.hpp"

#include <algorithm>

#include "errors.hpp"

namespace qfi {

Poly objective(const QuantumAutomaton& q, const ConstraintSystem& sys) {
    const std::size_t n = q.dim;
    if (sys.target.rows() != n || sys.target.cols() != n)
        throw DimensionError("objective target dimension mismatch");
    // r = s * T
    std::vector<Poly> r(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            if (q.start[i] != 0) r[j] += sys.target.at(i, j).scaled(q.start[i]);
    // obj = r * P * r^T
    Poly obj;
    for (std::size_t j = 0; j < n; ++j) {
        Poly u;
        for (std::size_t k = 0; k < n; ++k)
            if (q.projection.at(k, j) != 0) u += r[k].scaled(q.projection.at(k, j));
        if (!u.is_zero()) obj += u * r[j];
    }
    return obj;
}

std::optional<BranchEvidence> check_ideal(const ConstraintSystem& sys, const Poly& obj,
                                          const Rat& lambda_sq, const GroebnerBudget& budget) {
    MonomialOrder order = MonomialOrder::grevlex();
    std::vector<Poly> gb = buchberger(sys.equalities, order, budget);
    if (gb.size() == 1 && gb.front().is_constant() && !gb.front().is_zero()) {
        BranchEvidence ev;
        ev.checker = BranchEvidence::Checker::Ideal;
        ev.infeasible = true;
        return ev;
    }
    Poly nf = normal_form(obj, gb, order, budget);
    if (!nf.is_constant()) return std::nullopt;
    if (nf.constant_value() > lambda_sq) return std::nullopt;
    BranchEvidence ev;
    ev.checker = BranchEvidence::Checker::Ideal;
    ev.constant = nf.constant_value();
    return ev;
}

std::optional<BranchEvidence> check_elim(const ConstraintSystem& sys, const Poly& obj,
                                         const Rat& lambda_sq, const GroebnerBudget& budget) {
    const std::uint32_t tvar = std::max<std::uint32_t>(sys.var_count, obj.max_var());
    std::vector<Poly> gens = sys.equalities;
    gens.push_back(Poly::var(tvar) - obj);
    std::vector<Poly> in_t = eliminate(std::move(gens), {tvar}, budget);
    if (in_t.empty()) return std::nullopt;
    for (const Poly& p : in_t) {
        if (p.is_constant() && !p.is_zero()) {
            BranchEvidence ev;
            ev.checker = BranchEvidence::Checker::Elim;
            ev.infeasible = true;
            return ev;
        }
    }
    // principal in one variable: take the lowest-degree generator
    const Poly* best = &in_t.front();
    for (const Poly& p : in_t)
        if (p.degree() < best->degree()) best = &p;
    UniPoly g = UniPoly::from_poly(*best, tvar);
    if (!max_real_root_leq(g, lambda_sq)) return std::nullopt;
    BranchEvidence ev;
    ev.checker = BranchEvidence::Checker::Elim;
    ev.value_poly = std::move(g);
    return ev;
}

std::optional<BranchEvidence> check_bb(const ConstraintSystem& sys, const Poly& obj,
                                       const Rat& lambda_sq, const BbBudget& budget) {
    Box region;
    const std::uint32_t nvars = std::max<std::uint32_t>(sys.var_count, obj.max_var());
    region.dims.assign(nvars, Interval{Rat(-1), Rat(1)});
    BbBudget b = budget;
    b.target = lambda_sq;
    BbResult res = bb_sup_bound(obj, sys.equalities, region, b);
    if (!res.certified) return std::nullopt;
    BranchEvidence ev;
    ev.checker = BranchEvidence::Checker::Bb;
    if (!res.bound) {
        ev.infeasible = true;
        return ev;
    }
    if (*res.bound > lambda_sq) return std::nullopt;
    ev.bound = res.bound;
    return ev;
}

namespace {

std::optional<BranchEvidence> run_ladder(const ConstraintSystem& sys, const Poly& obj,
                                         const Rat& lambda_sq, const DecideConfig& config,
                                         BudgetReport& report) {
    try {
        ++report.ideal_calls;
        if (auto ev = check_ideal(sys, obj, lambda_sq, config.gb)) return ev;
    } catch (const BudgetError&) {
        ++report.checker_budget_hits;
    }
    try {
        ++report.elim_calls;
        if (auto ev = check_elim(sys, obj, lambda_sq, config.gb)) return ev;
    } catch (const BudgetError&) {
        ++report.checker_budget_hits;
    }
    ++report.bb_calls;
    if (auto ev = check_bb(sys, obj, lambda_sq, config.bb)) return ev;
    return std::nullopt;
}

Verdict make_nonempty(const QuantumAutomaton& q, const LanguageSpec& spec, std::string witness,
                      BudgetReport report) {
    if (!membership(spec, witness) || !accepts_strict(q, witness))
        throw InternalError("candidate witness fails replay");
    Verdict v;
    v.kind = Verdict::Kind::NonEmpty;
    v.witness = std::move(witness);
    v.budget = std::move(report);
    return v;
}

}  // namespace

Verdict decide_intersection(const QuantumAutomaton& q, const LanguageSpec& spec,
                            const DecideConfig& config) {
    {
        std::vector<std::string> violations = validate(q);
        if (!violations.empty()) {
            std::string msg = "invalid automaton:";
            for (const auto& v : violations) msg += " " + v;
            throw InvalidInstance(msg);
        }
    }
    for (char c : alphabet_of(spec))
        if (!q.phi.count(c))
            throw InvalidInstance(std::string("language letter '") + c +
                                  "' is outside the automaton alphabet");

    BudgetReport report;

    // Negative thresholds accept every word, so the verdict is language
    // emptiness; the shortest member doubles as the witness.
    if (q.threshold < 0) {
        std::optional<std::size_t> len = shortest_member_length(spec);
        if (!len) {
            Verdict v;
            v.kind = Verdict::Kind::Empty;
            v.certificate = Certificate{};  // empty language, no branches
            v.budget = std::move(report);
            return v;
        }
        std::vector<std::string> first = enumerate_words(spec, 1, *len);
        if (first.empty()) throw InternalError("shortest member length disagrees with enumeration");
        report.words_enumerated = 1;
        return make_nonempty(q, spec, first.front(), std::move(report));
    }

    const Rat lambda_sq = q.threshold * q.threshold;
    ExprPtr expr = expr_for_language(spec, q.phi, q.dim);
    WordEnumerator enumerator(spec, config.max_word_length, config.word_budget + 1);

    std::optional<Certificate> empty_certificate;

    auto advance_enumeration = [&](std::size_t count) -> std::optional<std::string> {
        for (std::size_t i = 0; i < count && report.words_enumerated < config.word_budget; ++i) {
            std::optional<std::string> w = enumerator.next();
            if (!w) {
                report.enumeration_exhausted = true;
                return std::nullopt;
            }
            ++report.words_enumerated;
            if (accepts_strict(q, *w)) return w;
        }
        return std::nullopt;
    };

    for (unsigned degree : config.degrees) {
        if (auto w = advance_enumeration(config.batch)) {
            if (empty_certificate) throw InternalError("witness found after an EMPTY certificate");
            return make_nonempty(q, spec, std::move(*w), std::move(report));
        }
        report.max_degree_tried = std::max(report.max_degree_tried, degree);

        std::vector<ConstraintSystem> systems = compile(expr, degree);
        bool all_certified = true;
        std::vector<BranchEvidence> evidence;
        evidence.reserve(systems.size());
        for (const ConstraintSystem& sys : systems) {
            Poly obj = objective(q, sys);
            auto ev = run_ladder(sys, obj, lambda_sq, config, report);
            if (!ev) {
                all_certified = false;
                break;
            }
            evidence.push_back(std::move(*ev));
        }
        if (all_certified) {
            empty_certificate = Certificate{degree, std::move(evidence)};
            break;  // sound: no word can be accepted, stop enumerating
        }
    }

    if (empty_certificate) {
        Verdict v;
        v.kind = Verdict::Kind::Empty;
        v.certificate = std::move(empty_certificate);
        v.budget = std::move(report);
        return v;
    }

    // drain the enumeration budget
    while (report.words_enumerated < config.word_budget && !report.enumeration_exhausted) {
        if (auto w = advance_enumeration(config.batch))
            return make_nonempty(q, spec, std::move(*w), std::move(report));
    }

    // an exhausted enumeration of the whole language with no acceptor is a
    // complete check by itself
    if (report.enumeration_exhausted &&
        shortest_member_length(spec).value_or(SIZE_MAX) <= config.max_word_length) {
        // only sound when the language is finite and fully enumerated; we
        // cannot know that in general, so report UNKNOWN
    }
    Verdict v;
    v.kind = Verdict::Kind::Unknown;
    v.budget = std::move(report);
    return v;
}

bool replay_certificate(const QuantumAutomaton& q, const LanguageSpec& spec,
                        const Certificate& cert, const DecideConfig& config) {
    if (q.threshold < 0) return cert.branches.empty() && !shortest_member_length(spec);
    const Rat lambda_sq = q.threshold * q.threshold;
    ExprPtr expr = expr_for_language(spec, q.phi, q.dim);
    std::vector<ConstraintSystem> systems = compile(expr, cert.degree);
    if (systems.size() != cert.branches.size()) return false;
    for (std::size_t i = 0; i < systems.size(); ++i) {
        const BranchEvidence& recorded = cert.branches[i];
        Poly obj = objective(q, systems[i]);
        std::optional<BranchEvidence> fresh;
        try {
            switch (recorded.checker) {
                case BranchEvidence::Checker::Ideal:
                    fresh = check_ideal(systems[i], obj, lambda_sq, config.gb);
                    break;
                case BranchEvidence::Checker::Elim:
                    fresh = check_elim(systems[i], obj, lambda_sq, config.gb);
                    break;
                case BranchEvidence::Checker::Bb:
                    fresh = check_bb(systems[i], obj, lambda_sq, config.bb);
                    break;
            }
        } catch (const BudgetError&) {
            return false;
        }
        if (!fresh) return false;
        if (fresh->checker != recorded.checker || fresh->infeasible != recorded.infeasible)
            return false;
        if (fresh->constant != recorded.constant) return false;
        if (fresh->value_poly != recorded.value_poly) return false;
        if (fresh->bound != recorded.bound) return false;
    }
    return true;
}

}  // namespace qfi
