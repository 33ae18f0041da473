#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "rat.hpp"

namespace qfi {

// Dense exact rational vector.
class QVec {
public:
    QVec() = default;
    explicit QVec(std::size_t size) : entries_(size, Rat(0)) {}
    QVec(std::initializer_list<Rat> init) : entries_(init) {}
    explicit QVec(std::vector<Rat> entries) : entries_(std::move(entries)) {}

    std::size_t size() const { return entries_.size(); }
    const Rat& operator[](std::size_t i) const { return entries_[i]; }
    Rat& operator[](std::size_t i) { return entries_[i]; }
    bool operator==(const QVec&) const = default;

    const std::vector<Rat>& entries() const { return entries_; }

private:
    std::vector<Rat> entries_;
};

// Dense exact rational matrix, row major. Instances stay tiny (n <= ~6 for
// automata, a few dozen rows for linear systems), so no sparsity machinery.
class QMat {
public:
    QMat() : rows_(0), cols_(0) {}
    QMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, Rat(0)) {}
    QMat(std::initializer_list<std::initializer_list<Rat>> rows);

    static QMat identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    const Rat& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    Rat& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }

    bool operator==(const QMat&) const = default;

    QMat transpose() const;
    bool is_identity() const;

    // Canonical text form, used for cache keys and diagnostics.
    std::string str() const;

private:
    std::size_t rows_, cols_;
    std::vector<Rat> a_;
};

QMat operator*(const QMat& a, const QMat& b);
QMat operator+(const QMat& a, const QMat& b);
QVec operator*(const QVec& v, const QMat& m);
Rat dot(const QVec& a, const QVec& b);

QMat mat_pow(const QMat& m, unsigned long e);

// Exact tests against the defining identities.
bool is_orthogonal(const QMat& m);
bool is_projection(const QMat& m);  // symmetric idempotent

// Block-diagonal sum M1 (+) ... (+) Mk of square matrices.
QMat block_sum(std::span<const QMat> blocks);
QMat block_sum(std::initializer_list<QMat> blocks);

// The k diagonal n x n blocks of a kn x kn matrix. Off-diagonal blocks must
// be exactly zero; anything else means the input is not a block sum.
std::vector<QMat> block_extract(const QMat& m, std::size_t k, std::size_t n);

// Bijection on matrix positions, flattened row major: entry (i,j) of the
// result is read from position pi[i*n+j] of the argument.
using EntryPermutation = std::vector<std::size_t>;

EntryPermutation identity_permutation(std::size_t n);
EntryPermutation transpose_permutation(std::size_t n);
bool is_entry_bijection(const EntryPermutation& pi, std::size_t n);

QMat permute_entries(const EntryPermutation& pi, const QMat& m);

}  // namespace qfi
