#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ratmat.hpp"

namespace qfi {

// Letter-indexed orthogonal images, the representation of the free monoid.
using LetterMap = std::map<char, QMat>;

// Measure-once quantum recognizer: start row vector, letter representation,
// projection and threshold. Acceptance of w compares ||start * phi(w) * P||
// against the threshold, strictly.
struct QuantumAutomaton {
    std::size_t dim = 0;
    QVec start;                  // unit row vector
    std::vector<char> letters;   // declared alphabet order
    LetterMap phi;               // orthogonal dim x dim images
    QMat projection;             // symmetric idempotent
    Rat threshold;
};

// Empty when all structural invariants hold; otherwise one message per
// failed invariant ("s not unit norm", "phi(b) not orthogonal", ...).
std::vector<std::string> validate(const QuantumAutomaton& q);

// Image of a single letter; throws DimensionError on unknown letters.
const QMat& phi_letter(const QuantumAutomaton& q, char c);

// phi(w1)...phi(wm) over a letter map; the empty word maps to the identity.
QMat phi_word(const LetterMap& phi, std::size_t dim, std::string_view w);
QMat phi_word(const QuantumAutomaton& q, std::string_view w);

// ||s phi(w) P||^2 as an exact rational.
Rat acceptance_sq(const QuantumAutomaton& q, std::string_view w);

// Strict cut-point membership. Negative thresholds accept everything since
// norms are nonnegative; otherwise compares squared values inside Q.
bool accepts_strict(const QuantumAutomaton& q, std::string_view w);

}  // namespace qfi
