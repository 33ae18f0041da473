#include "qfa.hpp"

#include "errors.hpp"

namespace qfi {

std::vector<std::string> validate(const QuantumAutomaton& q) {
    std::vector<std::string> violations;
    if (q.dim == 0) {
        violations.push_back("dimension must be positive");
        return violations;
    }
    if (q.start.size() != q.dim) violations.push_back("s has wrong length");
    else if (dot(q.start, q.start) != 1) violations.push_back("s not unit norm");

    for (char c : q.letters) {
        auto it = q.phi.find(c);
        if (it == q.phi.end()) {
            violations.push_back(std::string("phi(") + c + ") missing");
            continue;
        }
        const QMat& m = it->second;
        if (m.rows() != q.dim || m.cols() != q.dim)
            violations.push_back(std::string("phi(") + c + ") has wrong shape");
        else if (!is_orthogonal(m))
            violations.push_back(std::string("phi(") + c + ") not orthogonal");
    }
    if (q.projection.rows() != q.dim || q.projection.cols() != q.dim)
        violations.push_back("P has wrong shape");
    else if (!is_projection(q.projection))
        violations.push_back("P not a projection");
    return violations;
}

const QMat& phi_letter(const QuantumAutomaton& q, char c) {
    auto it = q.phi.find(c);
    if (it == q.phi.end()) throw DimensionError(std::string("unknown letter '") + c + "'");
    return it->second;
}

QMat phi_word(const LetterMap& phi, std::size_t dim, std::string_view w) {
    QMat m = QMat::identity(dim);
    for (char c : w) {
        auto it = phi.find(c);
        if (it == phi.end()) throw DimensionError(std::string("unknown letter '") + c + "'");
        m = m * it->second;
    }
    return m;
}

QMat phi_word(const QuantumAutomaton& q, std::string_view w) { return phi_word(q.phi, q.dim, w); }

Rat acceptance_sq(const QuantumAutomaton& q, std::string_view w) {
    QVec u = (q.start * phi_word(q, w)) * q.projection;
    return dot(u, u);
}

bool accepts_strict(const QuantumAutomaton& q, std::string_view w) {
    if (q.threshold < 0) return true;
    return acceptance_sq(q, w) > q.threshold * q.threshold;
}

}  // namespace qfi
