#pragma once

#include <map>
#include <memory>
#include <variant>
#include <vector>

#include "lang.hpp"
#include "poly.hpp"

namespace qfi {

class ClosureExpr;
using ExprPtr = std::shared_ptr<const ClosureExpr>;

// Leaves and combinators of closure expressions. A GroupClosure leaf
// denotes the closure of the group generated by its orthogonal generators;
// the combinators mirror products, coset shifts, sandwiches, block sums,
// block products, unions and entry permutations of matrix sets.
struct GroupClosureNode {
    std::size_t dim;
    std::vector<QMat> generators;
};
struct FixedNode {
    QMat value;
};
struct CosetNode {
    QMat left;
    ExprPtr of;
};
struct ProductNode {
    std::vector<ExprPtr> factors;
};
// pairs ranges over 2n x 2n block sums X (+) Y; denotes { X Z Y^T }.
struct SandwichNode {
    ExprPtr pairs;
    ExprPtr middle;
};
struct BlockSumNode {
    std::vector<ExprPtr> parts;
};
// of ranges over kn x kn block sums; denotes the products of the k blocks.
struct BlockProductNode {
    ExprPtr of;
    std::size_t count;
    std::size_t block_dim;
};
struct UnionNode {
    std::size_t dim;
    std::vector<ExprPtr> alternatives;
};
struct PermuteNode {
    EntryPermutation pi;
    ExprPtr of;
};

class ClosureExpr {
public:
    using Node = std::variant<GroupClosureNode, FixedNode, CosetNode, ProductNode, SandwichNode,
                              BlockSumNode, BlockProductNode, UnionNode, PermuteNode>;

    static ExprPtr group_closure(std::size_t dim, std::vector<QMat> generators);
    static ExprPtr fixed(QMat value);
    static ExprPtr coset(QMat left, ExprPtr of);
    static ExprPtr product(std::vector<ExprPtr> factors);
    static ExprPtr sandwich(ExprPtr pairs, ExprPtr middle);
    static ExprPtr block_sum(std::vector<ExprPtr> parts);
    static ExprPtr block_product(ExprPtr of, std::size_t count, std::size_t block_dim);
    static ExprPtr union_of(std::size_t dim, std::vector<ExprPtr> alternatives);
    static ExprPtr permute(EntryPermutation pi, ExprPtr of);

    const Node& node() const { return node_; }
    std::size_t dim() const { return dim_; }

    // GroupClosure leaves in preorder (children in field order).
    std::size_t leaf_count() const { return leaf_count_; }

private:
    ClosureExpr(Node node, std::size_t dim, std::size_t leaves)
        : node_(std::move(node)), dim_(dim), leaf_count_(leaves) {}

    Node node_;
    std::size_t dim_;
    std::size_t leaf_count_;
};

// One polynomial system per union branch. Every GroupClosure leaf owns a
// block of n'^2 fresh variables; equalities are the leaf invariant bases
// plus block-shape constraints; target expresses the denoted matrix in the
// leaf variables. The solution set at any degree is a superset of the
// denoted closure, which is the soundness direction EMPTY certificates
// need.
struct CompiledLeaf {
    std::size_t leaf_index;  // preorder index in the expression
    std::size_t dim;
    std::uint32_t var_offset;
};

struct ConstraintSystem {
    std::uint32_t var_count = 0;
    std::vector<CompiledLeaf> leaves;
    std::vector<Poly> equalities;
    PolyMat target;
};

std::vector<ConstraintSystem> compile(const ExprPtr& e, unsigned degree);

// Exact matrix per GroupClosure leaf, keyed by preorder index.
struct LeafAssignment {
    std::map<std::size_t, QMat> by_leaf;
};

// True iff some compiled branch has all its leaves assigned, every equality
// vanishes at the assignment, and the target evaluates to expected.
bool witness_check(const ExprPtr& e, unsigned degree, const LeafAssignment& witness,
                   const QMat& expected);

// Closure expressions for the three supported language shapes.
ExprPtr expr_sigma_star(const SigmaStar& lang, const LetterMap& phi, std::size_t dim);
ExprPtr expr_semilinear(const SemilinearLanguage& lang, const LetterMap& phi, std::size_t dim);
ExprPtr expr_linear_cfg(const LinearGrammar& g, const LetterMap& phi, std::size_t dim);
ExprPtr expr_for_language(const LanguageSpec& spec, const LetterMap& phi, std::size_t dim);

// Derivation-induced witness for a member word: leaf matrices assembled
// from an actual derivation (or coefficient decomposition), together with
// phi(w) as the expected value. Nothing when w is not a member.
std::optional<LeafAssignment> derivation_witness(const LanguageSpec& spec, const LetterMap& phi,
                                                 std::size_t dim, std::string_view w);

}  // namespace qfi
