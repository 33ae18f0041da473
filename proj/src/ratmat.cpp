#include "ratmat.hpp"

#include <algorithm>

#include "errors.hpp"

namespace qfi {

QMat::QMat(std::initializer_list<std::initializer_list<Rat>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    a_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) throw DimensionError("ragged matrix initializer");
        for (const auto& x : row) a_.push_back(x);
    }
}

QMat QMat::identity(std::size_t n) {
    QMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

QMat QMat::transpose() const {
    QMat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

bool QMat::is_identity() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (at(i, j) != (i == j ? 1 : 0)) return false;
    return true;
}

std::string QMat::str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        if (i) s += ";";
        for (std::size_t j = 0; j < cols_; ++j) {
            if (j) s += ",";
            s += rat_str(at(i, j));
        }
    }
    s += "]";
    return s;
}

QMat operator*(const QMat& a, const QMat& b) {
    if (a.cols() != b.rows()) throw DimensionError("matrix product dimension mismatch");
    QMat c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Rat& aik = a.at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c.at(i, j) += aik * b.at(k, j);
        }
    return c;
}

QMat operator+(const QMat& a, const QMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("matrix sum dimension mismatch");
    QMat c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c.at(i, j) = a.at(i, j) + b.at(i, j);
    return c;
}

QVec operator*(const QVec& v, const QMat& m) {
    if (v.size() != m.rows()) throw DimensionError("vector-matrix dimension mismatch");
    QVec r(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (v[i] == 0) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) r[j] += v[i] * m.at(i, j);
    }
    return r;
}

Rat dot(const QVec& a, const QVec& b) {
    if (a.size() != b.size()) throw DimensionError("dot product dimension mismatch");
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

QMat mat_pow(const QMat& m, unsigned long e) {
    if (!m.is_square()) throw DimensionError("power of a non-square matrix");
    QMat acc = QMat::identity(m.rows());
    QMat base = m;
    while (e) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return acc;
}

bool is_orthogonal(const QMat& m) {
    if (!m.is_square()) throw DimensionError("orthogonality test on non-square matrix");
    return (m * m.transpose()).is_identity();
}

bool is_projection(const QMat& m) {
    if (!m.is_square()) throw DimensionError("projection test on non-square matrix");
    return m == m.transpose() && m * m == m;
}

QMat block_sum(std::span<const QMat> blocks) {
    if (blocks.empty()) throw DimensionError("block sum of an empty list");
    std::size_t total = 0;
    for (const QMat& b : blocks) {
        if (!b.is_square()) throw DimensionError("block sum of a non-square block");
        total += b.rows();
    }
    QMat m(total, total);
    std::size_t off = 0;
    for (const QMat& b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) m.at(off + i, off + j) = b.at(i, j);
        off += b.rows();
    }
    return m;
}

QMat block_sum(std::initializer_list<QMat> blocks) {
    std::vector<QMat> v(blocks);
    return block_sum(std::span<const QMat>(v));
}

std::vector<QMat> block_extract(const QMat& m, std::size_t k, std::size_t n) {
    if (m.rows() != k * n || m.cols() != k * n)
        throw DimensionError("block extraction expects a kn x kn matrix");
    for (std::size_t i = 0; i < k * n; ++i)
        for (std::size_t j = 0; j < k * n; ++j)
            if (i / n != j / n && m.at(i, j) != 0)
                throw DimensionError("nonzero off-diagonal block in block extraction");
    std::vector<QMat> blocks;
    blocks.reserve(k);
    for (std::size_t b = 0; b < k; ++b) {
        QMat blk(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) blk.at(i, j) = m.at(b * n + i, b * n + j);
        blocks.push_back(std::move(blk));
    }
    return blocks;
}

EntryPermutation identity_permutation(std::size_t n) {
    EntryPermutation pi(n * n);
    for (std::size_t i = 0; i < n * n; ++i) pi[i] = i;
    return pi;
}

EntryPermutation transpose_permutation(std::size_t n) {
    EntryPermutation pi(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) pi[i * n + j] = j * n + i;
    return pi;
}

bool is_entry_bijection(const EntryPermutation& pi, std::size_t n) {
    if (pi.size() != n * n) return false;
    std::vector<bool> seen(n * n, false);
    for (std::size_t t : pi) {
        if (t >= n * n || seen[t]) return false;
        seen[t] = true;
    }
    return true;
}

QMat permute_entries(const EntryPermutation& pi, const QMat& m) {
    if (!m.is_square()) throw DimensionError("entry permutation of a non-square matrix");
    const std::size_t n = m.rows();
    if (!is_entry_bijection(pi, n)) throw DimensionError("entry map is not a bijection");
    QMat r(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t src = pi[i * n + j];
            r.at(i, j) = m.at(src / n, src % n);
        }
    return r;
}

}  // namespace qfi
