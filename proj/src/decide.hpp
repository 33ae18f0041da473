#pragma once

#include <optional>
#include <string>
#include <vector>

#include "closure.hpp"
#include "realalg.hpp"

namespace qfi {

// Evidence produced by one sound checker on one compiled branch. Replaying
// the checker must reproduce it.
struct BranchEvidence {
    enum class Checker { Ideal, Elim, Bb };
    Checker checker = Checker::Ideal;
    bool infeasible = false;           // the branch system has no solutions at all
    std::optional<Rat> constant;       // Ideal: normal form of the objective
    std::optional<UniPoly> value_poly; // Elim: candidate-value polynomial in t
    std::optional<Rat> bound;          // Bb: certified upper bound
};

struct Certificate {
    unsigned degree = 0;
    std::vector<BranchEvidence> branches;
};

struct BudgetReport {
    std::size_t words_enumerated = 0;
    unsigned max_degree_tried = 0;
    std::size_t ideal_calls = 0;
    std::size_t elim_calls = 0;
    std::size_t bb_calls = 0;
    std::size_t checker_budget_hits = 0;
    bool enumeration_exhausted = false;
};

struct Verdict {
    enum class Kind { Empty, NonEmpty, Unknown };
    Kind kind = Kind::Unknown;
    std::optional<std::string> witness;      // NonEmpty
    std::optional<Certificate> certificate;  // Empty
    BudgetReport budget;
};

struct DecideConfig {
    std::vector<unsigned> degrees = {1, 2, 3, 4};
    std::size_t word_budget = 10000;
    std::size_t batch = 64;               // words advanced per degree level
    std::size_t max_word_length = 64;
    GroebnerBudget gb;
    BbBudget bb;
};

// Squared acceptance value of the system's denoted matrix, as a polynomial
// in the leaf variables: s * T * P * T^T * s^T with T the compiled target.
Poly objective(const QuantumAutomaton& q, const ConstraintSystem& sys);

// Cheapest certificate: reduce the objective modulo a basis of the branch
// ideal; a constant normal form bounds the objective on the whole variety.
std::optional<BranchEvidence> check_ideal(const ConstraintSystem& sys, const Poly& obj,
                                          const Rat& lambda_sq, const GroebnerBudget& budget);

// Adjoin t - objective and eliminate everything else; a nonzero candidate
// polynomial confines the objective values to its real roots.
std::optional<BranchEvidence> check_elim(const ConstraintSystem& sys, const Poly& obj,
                                         const Rat& lambda_sq, const GroebnerBudget& budget);

// Interval branch-and-bound over [-1,1]^vars; sound because every denoted
// matrix has orthogonal-entry leaves.
std::optional<BranchEvidence> check_bb(const ConstraintSystem& sys, const Poly& obj,
                                       const Rat& lambda_sq, const BbBudget& budget);

// Interleaves word enumeration with degree-increasing certification: first
// strict acceptor wins NONEMPTY, a fully certified level wins EMPTY, and
// exhausted budgets yield UNKNOWN. The two conclusions are mutually
// exclusive by soundness; reaching both aborts with InternalError.
Verdict decide_intersection(const QuantumAutomaton& q, const LanguageSpec& spec,
                            const DecideConfig& config = {});

// Re-runs every branch checker recorded in the certificate and compares the
// reproduced evidence.
bool replay_certificate(const QuantumAutomaton& q, const LanguageSpec& spec,
                        const Certificate& cert, const DecideConfig& config = {});

}  // namespace qfi
