#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ratmat.hpp"

namespace qfi {

// Sparse monomial: sorted (variable, exponent) pairs, exponents positive.
struct Monomial {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> factors;

    static Monomial one() { return {}; }
    static Monomial var(std::uint32_t v, std::uint32_t e = 1);

    unsigned degree() const;
    bool is_one() const { return factors.empty(); }
    std::uint32_t exponent_of(std::uint32_t v) const;
    std::uint32_t max_var() const;  // 0 when constant

    Monomial operator*(const Monomial& o) const;
    bool divides(const Monomial& o) const;
    Monomial divided_by(const Monomial& o) const;  // requires divisibility

    bool operator==(const Monomial&) const = default;
};

// Graded lexicographic order; the canonical storage order for Poly terms.
struct GrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

Monomial lcm(const Monomial& a, const Monomial& b);
bool coprime(const Monomial& a, const Monomial& b);

// Sparse polynomial over Q. No zero coefficients are stored; equality is
// structural equality of the term maps.
class Poly {
public:
    using TermMap = std::map<Monomial, Rat, GrlexLess>;

    Poly() = default;
    static Poly zero() { return {}; }
    static Poly constant(Rat c);
    static Poly var(std::uint32_t v);
    static Poly term(Monomial m, Rat c);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    const Rat& constant_value() const;  // requires is_constant; zero poly -> 0
    unsigned degree() const;
    std::uint32_t max_var() const;  // one past the highest variable used; 0 if constant

    const TermMap& terms() const { return terms_; }

    void add_term(const Monomial& m, const Rat& c);

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);

    Poly scaled(const Rat& c) const;
    Poly times_term(const Monomial& m, const Rat& c) const;

    // Value at a point given by one rational per variable index.
    Rat eval(std::span<const Rat> point) const;

    // Renames variable v to v + offset for every variable.
    Poly shifted_vars(std::uint32_t offset) const;

    bool operator==(const Poly&) const = default;

    std::string str(const std::function<std::string(std::uint32_t)>& var_name) const;
    std::string str() const;  // default names x0, x1, ...

private:
    TermMap terms_;
};

// Matrix with polynomial entries; the symbolic counterpart of QMat used by
// closure compilation targets.
class PolyMat {
public:
    PolyMat() : rows_(0), cols_(0) {}
    PolyMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static PolyMat constant(const QMat& m);
    // The n x n matrix of variables offset + i*n + j.
    static PolyMat vars(std::uint32_t offset, std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Poly& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    Poly& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }

    PolyMat operator*(const PolyMat& o) const;
    PolyMat transpose() const;
    PolyMat block(std::size_t i0, std::size_t j0, std::size_t r, std::size_t c) const;
    PolyMat shifted_vars(std::uint32_t offset) const;

    QMat eval(std::span<const Rat> point) const;

private:
    std::size_t rows_, cols_;
    std::vector<Poly> a_;
};

PolyMat operator*(const QMat& a, const PolyMat& b);

// Basis of a finite-dimensional space of polynomials of bounded total
// degree, each vanishing at the identity matrix.
struct PolyBasis {
    unsigned degree = 0;
    std::vector<Poly> polys;
};

// Exact rational nullspace of the row span, via fraction-free elimination
// on denominator-cleared rows. Basis vectors are primitive with positive
// leading entry.
std::vector<QVec> kernel(const std::vector<QVec>& rows);

// The polynomial X -> p(gX) under the variable convention x_{i,j} = i*n+j.
// Left multiplication is a linear change of variables, so the total degree
// is preserved.
Poly subst_left_mul(const Poly& p, const QMat& g);

// Value of p at the point whose coordinates are the entries of m.
Rat eval_at(const Poly& p, const QMat& m);

// Basis of { p : deg p <= d, p(I) = 0, p(gX) = p(X) for all g in gens } over
// the n^2 matrix-entry variables. The common zero set approximates the
// closure of the group generated by gens from above, degree by degree.
PolyBasis invariant_space(std::size_t n, std::span<const QMat> gens, unsigned degree);

// Memoized variant; safe under concurrent lookup-or-compute.
const PolyBasis& invariant_space_cached(std::size_t n, std::span<const QMat> gens,
                                        unsigned degree);

// True when p is a rational linear combination of basis.
bool in_span(const Poly& p, std::span<const Poly> basis);

}  // namespace qfi
