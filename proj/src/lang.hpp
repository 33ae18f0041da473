#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qfa.hpp"

namespace qfi {

// One linear production: either a terminal rule A -> w, or A -> u B v with
// terminal context words u, v (possibly empty).
struct LinearRule {
    std::string lhs;
    bool terminal = true;
    std::string w;              // terminal rules
    std::string u, inner, v;    // context rules; inner is the nonterminal
};

struct LinearGrammar {
    std::vector<std::string> nonterminals;
    std::vector<char> alphabet;  // declared order, used for word enumeration
    std::vector<LinearRule> rules;
    std::string axiom;
};

// Throws InvalidInstance naming the first violated structural constraint.
void validate_grammar(const LinearGrammar& g);

struct SemilinearComponent {
    std::vector<std::string> words;               // w_1 ... w_k, k >= 1
    std::vector<unsigned long> base;              // v_0
    std::vector<std::vector<unsigned long>> periods;
};

struct SemilinearLanguage {
    std::vector<char> alphabet;
    std::vector<SemilinearComponent> components;
};

void validate_semilinear(const SemilinearLanguage& l);

struct SigmaStar {
    std::vector<char> alphabet;
};

using LanguageSpec = std::variant<SigmaStar, SemilinearLanguage, LinearGrammar>;

const std::vector<char>& alphabet_of(const LanguageSpec& spec);

// The grammar over V \ {axiom} with the given start symbol, keeping exactly
// the rules that avoid the old axiom entirely.
LinearGrammar sub_grammar(const LinearGrammar& g, const std::string& a);

// One branch per axiom rule whose right-hand side is free of the axiom;
// axiom-recursive rules are absorbed by the context automaton instead.
struct DecompBranch {
    std::size_t rule_index;
    std::string w1;
    std::optional<std::string> nonterminal;  // absent for terminal branches
    std::string w2;                          // meaningful only with a nonterminal
};

struct Decomposition {
    std::vector<DecompBranch> branches;
};

Decomposition decompose(const LinearGrammar& g);

// Finite automaton over the nonterminals whose labels are the block sums
// phi(u) (+) phi(v)^T of rule contexts; its axiom-to-axiom path labels are
// exactly the terminal-context matrices of the axiom.
struct ContextTransition {
    std::string from, to;
    QMat label;
    std::size_t rule_index;
};

struct ContextAutomaton {
    std::vector<std::string> states;  // trimmed: every state lies on an axiom-axiom path
    std::vector<ContextTransition> transitions;
    std::string initial_final;
};

ContextAutomaton context_automaton(const LinearGrammar& g, const LetterMap& phi,
                                   std::size_t dim);

// Finite generating set of the subgroup generated by all axiom-to-axiom path
// labels: a spanning tree from the axiom assigns a path label l_q to every
// state, and each transition q -> q' with label m contributes
// l_q * m * l_{q'}^T. Identity generators are dropped.
std::vector<QMat> context_generators(const ContextAutomaton& ca);

// Words in length-lexicographic order (declared alphabet order), duplicates
// removed, stopping at either bound.
std::vector<std::string> enumerate_words(const LanguageSpec& spec, std::size_t max_count,
                                         std::size_t max_len);

bool membership(const LanguageSpec& spec, std::string_view w);

// Length of the shortest member, or nothing when the language is empty.
std::optional<std::size_t> shortest_member_length(const LanguageSpec& spec);

// Incremental enumeration; the driver advances it batch by batch.
class WordEnumerator {
public:
    WordEnumerator(LanguageSpec spec, std::size_t max_len, std::size_t max_count = SIZE_MAX);

    // Next word in length-lexicographic order, or nothing once every word of
    // length <= max_len (or the count cap) has been produced.
    std::optional<std::string> next();

private:
    LanguageSpec spec_;
    std::size_t max_len_;
    std::size_t max_count_;
    std::size_t current_bound_;
    std::size_t index_ = 0;
    std::vector<std::string> words_;
    bool done_ = false;

    void extend();
};

// Coefficient witness for a semilinear member: component index plus the
// period multipliers lambda.
struct SemilinearWitness {
    std::size_t component;
    std::vector<unsigned long> lambdas;
};

std::optional<SemilinearWitness> semilinear_decompose_word(const SemilinearLanguage& l,
                                                           std::string_view w);

// Rule sequence of a derivation axiom => ... => w, applied to the single
// nonterminal at each step; empty when w is not in the language.
std::optional<std::vector<std::size_t>> derive(const LinearGrammar& g, std::string_view w);

}  // namespace qfi
