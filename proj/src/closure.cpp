#include "closure.hpp"

#include <algorithm>

#include "errors.hpp"

namespace qfi {

// ------------------------------------------------------------ construction

ExprPtr ClosureExpr::group_closure(std::size_t dim, std::vector<QMat> generators) {
    if (dim == 0) throw DimensionError("group closure of dimension zero");
    for (const QMat& g : generators) {
        if (g.rows() != dim || g.cols() != dim)
            throw DimensionError("group closure generator has the wrong shape");
        if (!is_orthogonal(g)) throw DimensionError("group closure generator is not orthogonal");
    }
    return ExprPtr(new ClosureExpr(GroupClosureNode{dim, std::move(generators)}, dim, 1));
}

ExprPtr ClosureExpr::fixed(QMat value) {
    if (!value.is_square()) throw DimensionError("fixed node must be square");
    std::size_t dim = value.rows();
    return ExprPtr(new ClosureExpr(FixedNode{std::move(value)}, dim, 0));
}

ExprPtr ClosureExpr::coset(QMat left, ExprPtr of) {
    if (!left.is_square() || left.rows() != of->dim())
        throw DimensionError("coset factor dimension mismatch");
    std::size_t dim = of->dim();
    std::size_t leaves = of->leaf_count();
    return ExprPtr(new ClosureExpr(CosetNode{std::move(left), std::move(of)}, dim, leaves));
}

ExprPtr ClosureExpr::product(std::vector<ExprPtr> factors) {
    if (factors.empty()) throw DimensionError("product of no factors");
    std::size_t dim = factors.front()->dim();
    std::size_t leaves = 0;
    for (const ExprPtr& f : factors) {
        if (f->dim() != dim) throw DimensionError("product factor dimension mismatch");
        leaves += f->leaf_count();
    }
    return ExprPtr(new ClosureExpr(ProductNode{std::move(factors)}, dim, leaves));
}

ExprPtr ClosureExpr::sandwich(ExprPtr pairs, ExprPtr middle) {
    if (pairs->dim() != 2 * middle->dim())
        throw DimensionError("sandwich pair set must have twice the middle dimension");
    std::size_t dim = middle->dim();
    std::size_t leaves = pairs->leaf_count() + middle->leaf_count();
    return ExprPtr(new ClosureExpr(SandwichNode{std::move(pairs), std::move(middle)}, dim, leaves));
}

ExprPtr ClosureExpr::block_sum(std::vector<ExprPtr> parts) {
    if (parts.empty()) throw DimensionError("block sum of no parts");
    std::size_t dim = 0, leaves = 0;
    for (const ExprPtr& p : parts) {
        dim += p->dim();
        leaves += p->leaf_count();
    }
    return ExprPtr(new ClosureExpr(BlockSumNode{std::move(parts)}, dim, leaves));
}

ExprPtr ClosureExpr::block_product(ExprPtr of, std::size_t count, std::size_t block_dim) {
    if (count == 0 || of->dim() != count * block_dim)
        throw DimensionError("block product shape mismatch");
    std::size_t leaves = of->leaf_count();
    return ExprPtr(
        new ClosureExpr(BlockProductNode{std::move(of), count, block_dim}, block_dim, leaves));
}

ExprPtr ClosureExpr::union_of(std::size_t dim, std::vector<ExprPtr> alternatives) {
    std::size_t leaves = 0;
    for (const ExprPtr& a : alternatives) {
        if (a->dim() != dim) throw DimensionError("union alternative dimension mismatch");
        leaves += a->leaf_count();
    }
    return ExprPtr(new ClosureExpr(UnionNode{dim, std::move(alternatives)}, dim, leaves));
}

ExprPtr ClosureExpr::permute(EntryPermutation pi, ExprPtr of) {
    if (!is_entry_bijection(pi, of->dim()))
        throw DimensionError("entry map is not a bijection of the right size");
    std::size_t dim = of->dim();
    std::size_t leaves = of->leaf_count();
    return ExprPtr(new ClosureExpr(PermuteNode{std::move(pi), std::move(of)}, dim, leaves));
}

// ------------------------------------------------------------- compilation

namespace {

struct Part {
    std::uint32_t var_count = 0;
    std::vector<CompiledLeaf> leaves;
    std::vector<Poly> equalities;
    PolyMat target;
};

// Renames b's variables above a's and concatenates everything except the
// targets, which the caller combines.
Part merge_vars(const Part& a, const Part& b, PolyMat target) {
    Part r;
    r.var_count = a.var_count + b.var_count;
    r.leaves = a.leaves;
    for (CompiledLeaf leaf : b.leaves) {
        leaf.var_offset += a.var_count;
        r.leaves.push_back(leaf);
    }
    r.equalities = a.equalities;
    for (const Poly& e : b.equalities) r.equalities.push_back(e.shifted_vars(a.var_count));
    r.target = std::move(target);
    return r;
}

// Adds shape equalities forcing every entry outside the diagonal blocks to
// vanish; sound because the denoted elements are exact block sums.
void require_block_shape(Part& part, const PolyMat& m, std::size_t count, std::size_t block) {
    for (std::size_t i = 0; i < count * block; ++i)
        for (std::size_t j = 0; j < count * block; ++j) {
            if (i / block == j / block) continue;
            const Poly& entry = m.at(i, j);
            if (!entry.is_zero()) part.equalities.push_back(entry);
        }
}

std::vector<Part> compile_rec(const ExprPtr& e, unsigned degree, std::size_t& leaf_counter);

std::vector<Part> compile_children_product(const std::vector<ExprPtr>& factors, unsigned degree,
                                           std::size_t& leaf_counter, bool block_sum_mode) {
    std::vector<Part> acc;
    bool first = true;
    for (const ExprPtr& f : factors) {
        std::vector<Part> parts = compile_rec(f, degree, leaf_counter);
        if (first) {
            acc = std::move(parts);
            first = false;
            continue;
        }
        std::vector<Part> next;
        for (const Part& a : acc)
            for (const Part& b : parts) {
                PolyMat bt = b.target.shifted_vars(a.var_count);
                PolyMat target;
                if (block_sum_mode) {
                    std::size_t n = a.target.rows() + bt.rows();
                    target = PolyMat(n, n);
                    for (std::size_t i = 0; i < a.target.rows(); ++i)
                        for (std::size_t j = 0; j < a.target.cols(); ++j)
                            target.at(i, j) = a.target.at(i, j);
                    for (std::size_t i = 0; i < bt.rows(); ++i)
                        for (std::size_t j = 0; j < bt.cols(); ++j)
                            target.at(a.target.rows() + i, a.target.cols() + j) = bt.at(i, j);
                } else {
                    target = a.target * bt;
                }
                next.push_back(merge_vars(a, b, std::move(target)));
            }
        acc = std::move(next);
    }
    return acc;
}

std::vector<Part> compile_rec(const ExprPtr& e, unsigned degree, std::size_t& leaf_counter) {
    const auto& node = e->node();

    if (std::holds_alternative<GroupClosureNode>(node)) {
        const auto& g = std::get<GroupClosureNode>(node);
        Part part;
        part.var_count = static_cast<std::uint32_t>(g.dim * g.dim);
        part.leaves.push_back({leaf_counter++, g.dim, 0});
        const PolyBasis& basis = invariant_space_cached(g.dim, g.generators, degree);
        part.equalities = basis.polys;
        part.target = PolyMat::vars(0, g.dim);
        return {std::move(part)};
    }
    if (std::holds_alternative<FixedNode>(node)) {
        Part part;
        part.target = PolyMat::constant(std::get<FixedNode>(node).value);
        return {std::move(part)};
    }
    if (std::holds_alternative<CosetNode>(node)) {
        const auto& c = std::get<CosetNode>(node);
        std::vector<Part> parts = compile_rec(c.of, degree, leaf_counter);
        for (Part& p : parts) p.target = c.left * p.target;
        return parts;
    }
    if (std::holds_alternative<ProductNode>(node)) {
        return compile_children_product(std::get<ProductNode>(node).factors, degree, leaf_counter,
                                        false);
    }
    if (std::holds_alternative<SandwichNode>(node)) {
        const auto& s = std::get<SandwichNode>(node);
        const std::size_t n = s.middle->dim();
        std::vector<Part> pair_parts = compile_rec(s.pairs, degree, leaf_counter);
        std::vector<Part> mid_parts = compile_rec(s.middle, degree, leaf_counter);
        std::vector<Part> out;
        for (const Part& a : pair_parts)
            for (const Part& b : mid_parts) {
                PolyMat bt = b.target.shifted_vars(a.var_count);
                PolyMat x = a.target.block(0, 0, n, n);
                PolyMat y = a.target.block(n, n, n, n);
                Part merged = merge_vars(a, b, x * bt * y.transpose());
                require_block_shape(merged, a.target, 2, n);
                out.push_back(std::move(merged));
            }
        return out;
    }
    if (std::holds_alternative<BlockSumNode>(node)) {
        return compile_children_product(std::get<BlockSumNode>(node).parts, degree, leaf_counter,
                                        true);
    }
    if (std::holds_alternative<BlockProductNode>(node)) {
        const auto& bp = std::get<BlockProductNode>(node);
        std::vector<Part> parts = compile_rec(bp.of, degree, leaf_counter);
        for (Part& p : parts) {
            PolyMat inner = p.target;
            require_block_shape(p, inner, bp.count, bp.block_dim);
            PolyMat prod = inner.block(0, 0, bp.block_dim, bp.block_dim);
            for (std::size_t b = 1; b < bp.count; ++b)
                prod = prod *
                       inner.block(b * bp.block_dim, b * bp.block_dim, bp.block_dim, bp.block_dim);
            p.target = std::move(prod);
        }
        return parts;
    }
    if (std::holds_alternative<UnionNode>(node)) {
        std::vector<Part> out;
        for (const ExprPtr& alt : std::get<UnionNode>(node).alternatives) {
            std::vector<Part> parts = compile_rec(alt, degree, leaf_counter);
            for (Part& p : parts) out.push_back(std::move(p));
        }
        return out;
    }
    const auto& pm = std::get<PermuteNode>(node);
    std::vector<Part> parts = compile_rec(pm.of, degree, leaf_counter);
    const std::size_t n = pm.of->dim();
    for (Part& p : parts) {
        PolyMat permuted(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                std::size_t src = pm.pi[i * n + j];
                permuted.at(i, j) = p.target.at(src / n, src % n);
            }
        p.target = std::move(permuted);
    }
    return parts;
}

}  // namespace

std::vector<ConstraintSystem> compile(const ExprPtr& e, unsigned degree) {
    std::size_t leaf_counter = 0;
    std::vector<Part> parts = compile_rec(e, degree, leaf_counter);
    std::vector<ConstraintSystem> systems;
    systems.reserve(parts.size());
    for (Part& p : parts) {
        ConstraintSystem sys;
        sys.var_count = p.var_count;
        sys.leaves = std::move(p.leaves);
        sys.equalities = std::move(p.equalities);
        sys.target = std::move(p.target);
        if (sys.target.rows() != e->dim() || sys.target.cols() != e->dim())
            throw InternalError("compiled target has the wrong shape");
        systems.push_back(std::move(sys));
    }
    return systems;
}

bool witness_check(const ExprPtr& e, unsigned degree, const LeafAssignment& witness,
                   const QMat& expected) {
    std::vector<ConstraintSystem> systems = compile(e, degree);
    for (const ConstraintSystem& sys : systems) {
        std::vector<Rat> point(sys.var_count, Rat(0));
        bool covered = true;
        for (const CompiledLeaf& leaf : sys.leaves) {
            auto it = witness.by_leaf.find(leaf.leaf_index);
            if (it == witness.by_leaf.end()) {
                covered = false;
                break;
            }
            const QMat& m = it->second;
            if (m.rows() != leaf.dim || m.cols() != leaf.dim)
                throw DimensionError("witness matrix has the wrong shape");
            for (std::size_t i = 0; i < leaf.dim; ++i)
                for (std::size_t j = 0; j < leaf.dim; ++j)
                    point[leaf.var_offset + i * leaf.dim + j] = m.at(i, j);
        }
        if (!covered) continue;
        bool ok = true;
        for (const Poly& eq : sys.equalities)
            if (eq.eval(point) != 0) {
                ok = false;
                break;
            }
        if (!ok) continue;
        if (sys.target.eval(point) == expected) return true;
    }
    return false;
}

// ---------------------------------------------------------------- builders

ExprPtr expr_sigma_star(const SigmaStar& lang, const LetterMap& phi, std::size_t dim) {
    std::vector<QMat> gens;
    for (char c : lang.alphabet) gens.push_back(phi_word(phi, dim, std::string(1, c)));
    return ClosureExpr::group_closure(dim, std::move(gens));
}

namespace {

QMat semilinear_period_matrix(const SemilinearComponent& c, const LetterMap& phi, std::size_t dim,
                              const std::vector<unsigned long>& exponents) {
    std::vector<QMat> blocks;
    blocks.reserve(c.words.size());
    for (std::size_t i = 0; i < c.words.size(); ++i)
        blocks.push_back(mat_pow(phi_word(phi, dim, c.words[i]), exponents[i]));
    return block_sum(std::span<const QMat>(blocks));
}

}  // namespace

ExprPtr expr_semilinear(const SemilinearLanguage& lang, const LetterMap& phi, std::size_t dim) {
    std::vector<ExprPtr> alternatives;
    for (const SemilinearComponent& c : lang.components) {
        const std::size_t k = c.words.size();
        QMat base = semilinear_period_matrix(c, phi, dim, c.base);
        std::vector<QMat> gens;
        gens.reserve(c.periods.size());
        for (const auto& period : c.periods)
            gens.push_back(semilinear_period_matrix(c, phi, dim, period));
        ExprPtr group = ClosureExpr::group_closure(k * dim, std::move(gens));
        ExprPtr coset = ClosureExpr::coset(std::move(base), std::move(group));
        alternatives.push_back(ClosureExpr::block_product(std::move(coset), k, dim));
    }
    return ClosureExpr::union_of(dim, std::move(alternatives));
}

ExprPtr expr_linear_cfg(const LinearGrammar& g, const LetterMap& phi, std::size_t dim) {
    validate_grammar(g);
    ContextAutomaton ca = context_automaton(g, phi, dim);
    std::vector<QMat> gens = context_generators(ca);
    Decomposition dec = decompose(g);

    std::vector<ExprPtr> alternatives;
    for (const DecompBranch& br : dec.branches) {
        ExprPtr middle;
        if (!br.nonterminal) {
            middle = ClosureExpr::fixed(phi_word(phi, dim, br.w1));
        } else {
            ExprPtr inner = expr_linear_cfg(sub_grammar(g, *br.nonterminal), phi, dim);
            middle = ClosureExpr::product({ClosureExpr::fixed(phi_word(phi, dim, br.w1)),
                                           std::move(inner),
                                           ClosureExpr::fixed(phi_word(phi, dim, br.w2))});
        }
        if (gens.empty()) {
            // trivial context set {(eps, eps)}: the sandwich is the identity
            alternatives.push_back(std::move(middle));
        } else {
            ExprPtr pair_group = ClosureExpr::group_closure(2 * dim, gens);
            alternatives.push_back(
                ClosureExpr::sandwich(std::move(pair_group), std::move(middle)));
        }
    }
    return ClosureExpr::union_of(dim, std::move(alternatives));
}

ExprPtr expr_for_language(const LanguageSpec& spec, const LetterMap& phi, std::size_t dim) {
    if (std::holds_alternative<SigmaStar>(spec))
        return expr_sigma_star(std::get<SigmaStar>(spec), phi, dim);
    if (std::holds_alternative<SemilinearLanguage>(spec))
        return expr_semilinear(std::get<SemilinearLanguage>(spec), phi, dim);
    return expr_linear_cfg(std::get<LinearGrammar>(spec), phi, dim);
}

// ------------------------------------------------------ derivation witness

namespace {

// Witness construction mirrors expr_linear_cfg: same branch order, same
// leaf preorder. leaf_base is the preorder index of the union node's first
// leaf.
bool cfg_witness_rec(const LinearGrammar& g, const LetterMap& phi, std::size_t dim,
                     std::string_view w, std::size_t leaf_base, LeafAssignment& out) {
    ContextAutomaton ca = context_automaton(g, phi, dim);
    std::vector<QMat> gens = context_generators(ca);
    Decomposition dec = decompose(g);

    auto rules = derive(g, w);
    if (!rules) return false;

    // split the derivation at the last occurrence of the axiom
    std::size_t last_axiom_step = 0;  // number of leading rules kept as context
    {
        std::string current = g.axiom;
        for (std::size_t t = 0; t < rules->size(); ++t) {
            if (current == g.axiom) last_axiom_step = t;
            const LinearRule& r = g.rules[(*rules)[t]];
            current = r.terminal ? std::string() : r.inner;
        }
    }

    std::string alpha, beta;
    for (std::size_t t = 0; t < last_axiom_step; ++t) {
        const LinearRule& r = g.rules[(*rules)[t]];
        alpha += r.u;
        beta = r.v + beta;
    }

    const std::size_t exit_rule = (*rules)[last_axiom_step];
    std::size_t branch_pos = dec.branches.size();
    for (std::size_t b = 0; b < dec.branches.size(); ++b)
        if (dec.branches[b].rule_index == exit_rule) branch_pos = b;
    if (branch_pos == dec.branches.size())
        throw InternalError("derivation exit rule is not a decomposition branch");

    // leaf offset of the chosen branch inside the union
    std::size_t offset = leaf_base;
    const bool has_sandwich = !gens.empty();
    auto branch_leaf_count = [&](const DecompBranch& br) -> std::size_t {
        std::size_t inner = 0;
        if (br.nonterminal) {
            ExprPtr sub = expr_linear_cfg(sub_grammar(g, *br.nonterminal), phi, dim);
            inner = sub->leaf_count();
        }
        return inner + (has_sandwich ? 1 : 0);
    };
    for (std::size_t b = 0; b < branch_pos; ++b) offset += branch_leaf_count(dec.branches[b]);

    if (has_sandwich) {
        out.by_leaf[offset] =
            block_sum({phi_word(phi, dim, alpha), phi_word(phi, dim, beta).transpose()});
        offset += 1;
    }
    // without generators every context path label is the identity, so the
    // sandwich is omitted and the context words contribute nothing

    const DecompBranch& br = dec.branches[branch_pos];
    // middle word: strip the context from w
    if (w.size() < alpha.size() + beta.size() ||
        w.substr(0, alpha.size()) != alpha ||
        w.substr(w.size() - beta.size()) != beta)
        throw InternalError("derivation context does not match the word");
    std::string_view middle = w.substr(alpha.size(), w.size() - alpha.size() - beta.size());

    if (!br.nonterminal) {
        if (middle != br.w1) throw InternalError("terminal branch does not match the word");
        return true;
    }
    if (middle.size() < br.w1.size() + br.w2.size() ||
        middle.substr(0, br.w1.size()) != br.w1 ||
        middle.substr(middle.size() - br.w2.size()) != br.w2)
        throw InternalError("branch affixes do not match the word");
    std::string_view inner_word =
        middle.substr(br.w1.size(), middle.size() - br.w1.size() - br.w2.size());
    return cfg_witness_rec(sub_grammar(g, *br.nonterminal), phi, dim, inner_word, offset, out);
}

}  // namespace

std::optional<LeafAssignment> derivation_witness(const LanguageSpec& spec, const LetterMap& phi,
                                                 std::size_t dim, std::string_view w) {
    LeafAssignment out;
    if (std::holds_alternative<SigmaStar>(spec)) {
        if (!membership(spec, w)) return std::nullopt;
        out.by_leaf[0] = phi_word(phi, dim, w);
        return out;
    }
    if (std::holds_alternative<SemilinearLanguage>(spec)) {
        const auto& l = std::get<SemilinearLanguage>(spec);
        auto decomp = semilinear_decompose_word(l, w);
        if (!decomp) return std::nullopt;
        const SemilinearComponent& c = l.components[decomp->component];
        QMat m = QMat::identity(c.words.size() * dim);
        for (std::size_t t = 0; t < c.periods.size(); ++t) {
            QMat gt = semilinear_period_matrix(c, phi, dim, c.periods[t]);
            m = m * mat_pow(gt, decomp->lambdas[t]);
        }
        out.by_leaf[decomp->component] = std::move(m);
        return out;
    }
    const auto& g = std::get<LinearGrammar>(spec);
    if (!cfg_witness_rec(g, phi, dim, w, 0, out)) return std::nullopt;
    return out;
}

}  // namespace qfi
