#include "poly.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>

#include "errors.hpp"

namespace qfi {

// ---------------------------------------------------------------- Monomial

Monomial Monomial::var(std::uint32_t v, std::uint32_t e) {
    Monomial m;
    if (e > 0) m.factors.push_back({v, e});
    return m;
}

unsigned Monomial::degree() const {
    unsigned d = 0;
    for (auto& [v, e] : factors) d += e;
    return d;
}

std::uint32_t Monomial::exponent_of(std::uint32_t v) const {
    for (auto& [w, e] : factors)
        if (w == v) return e;
    return 0;
}

std::uint32_t Monomial::max_var() const { return factors.empty() ? 0 : factors.back().first; }

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial r;
    std::size_t i = 0, j = 0;
    while (i < factors.size() || j < o.factors.size()) {
        if (j == o.factors.size() || (i < factors.size() && factors[i].first < o.factors[j].first))
            r.factors.push_back(factors[i++]);
        else if (i == factors.size() || o.factors[j].first < factors[i].first)
            r.factors.push_back(o.factors[j++]);
        else {
            r.factors.push_back({factors[i].first, factors[i].second + o.factors[j].second});
            ++i, ++j;
        }
    }
    return r;
}

bool Monomial::divides(const Monomial& o) const {
    std::size_t j = 0;
    for (auto& [v, e] : factors) {
        while (j < o.factors.size() && o.factors[j].first < v) ++j;
        if (j == o.factors.size() || o.factors[j].first != v || o.factors[j].second < e)
            return false;
    }
    return true;
}

Monomial Monomial::divided_by(const Monomial& o) const {
    Monomial r;
    std::size_t j = 0;
    for (auto& [v, e] : factors) {
        std::uint32_t sub = 0;
        while (j < o.factors.size() && o.factors[j].first < v) ++j;
        if (j < o.factors.size() && o.factors[j].first == v) sub = o.factors[j].second;
        if (sub > e) throw DimensionError("monomial quotient does not exist");
        if (e - sub > 0) r.factors.push_back({v, e - sub});
    }
    return r;
}

bool GrlexLess::operator()(const Monomial& a, const Monomial& b) const {
    unsigned da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    // same degree: lexicographic with lower variable index more significant
    std::size_t i = 0, j = 0;
    while (i < a.factors.size() && j < b.factors.size()) {
        if (a.factors[i].first != b.factors[j].first)
            // the one whose next factor has the smaller variable index is larger
            return a.factors[i].first > b.factors[j].first;
        if (a.factors[i].second != b.factors[j].second)
            return a.factors[i].second < b.factors[j].second;
        ++i, ++j;
    }
    return false;  // equal
}

Monomial lcm(const Monomial& a, const Monomial& b) {
    Monomial r;
    std::size_t i = 0, j = 0;
    while (i < a.factors.size() || j < b.factors.size()) {
        if (j == b.factors.size() ||
            (i < a.factors.size() && a.factors[i].first < b.factors[j].first))
            r.factors.push_back(a.factors[i++]);
        else if (i == a.factors.size() || b.factors[j].first < a.factors[i].first)
            r.factors.push_back(b.factors[j++]);
        else {
            r.factors.push_back(
                {a.factors[i].first, std::max(a.factors[i].second, b.factors[j].second)});
            ++i, ++j;
        }
    }
    return r;
}

bool coprime(const Monomial& a, const Monomial& b) {
    std::size_t i = 0, j = 0;
    while (i < a.factors.size() && j < b.factors.size()) {
        if (a.factors[i].first == b.factors[j].first) return false;
        if (a.factors[i].first < b.factors[j].first) ++i;
        else ++j;
    }
    return true;
}

// -------------------------------------------------------------------- Poly

Poly Poly::constant(Rat c) {
    Poly p;
    if (c != 0) p.terms_.emplace(Monomial::one(), std::move(c));
    return p;
}

Poly Poly::var(std::uint32_t v) { return term(Monomial::var(v), 1); }

Poly Poly::term(Monomial m, Rat c) {
    Poly p;
    if (c != 0) p.terms_.emplace(std::move(m), std::move(c));
    return p;
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

const Rat& Poly::constant_value() const {
    static const Rat zero(0);
    if (terms_.empty()) return zero;
    return terms_.begin()->second;
}

unsigned Poly::degree() const {
    unsigned d = 0;
    for (auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
}

std::uint32_t Poly::max_var() const {
    std::uint32_t v = 0;
    for (auto& [m, c] : terms_)
        if (!m.is_one()) v = std::max(v, m.max_var() + 1);
    return v;
}

void Poly::add_term(const Monomial& m, const Rat& c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly Poly::operator+(const Poly& o) const {
    Poly r = *this;
    r += o;
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    for (auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Poly Poly::operator-(const Poly& o) const {
    Poly r = *this;
    r -= o;
    return r;
}

Poly& Poly::operator-=(const Poly& o) {
    for (auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Poly Poly::operator-() const {
    Poly r;
    for (auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    Poly r;
    for (auto& [m1, c1] : terms_)
        for (auto& [m2, c2] : o.terms_) r.add_term(m1 * m2, c1 * c2);
    return r;
}

Poly Poly::scaled(const Rat& c) const {
    Poly r;
    if (c == 0) return r;
    for (auto& [m, k] : terms_) r.terms_.emplace(m, k * c);
    return r;
}

Poly Poly::times_term(const Monomial& m, const Rat& c) const {
    Poly r;
    if (c == 0) return r;
    for (auto& [m1, c1] : terms_) r.terms_.emplace(m1 * m, c1 * c);
    return r;
}

Rat Poly::eval(std::span<const Rat> point) const {
    Rat total = 0;
    for (auto& [m, c] : terms_) {
        Rat v = c;
        for (auto& [var, e] : m.factors) {
            if (var >= point.size()) throw DimensionError("evaluation point too short");
            for (std::uint32_t k = 0; k < e; ++k) v *= point[var];
        }
        total += v;
    }
    return total;
}

Poly Poly::shifted_vars(std::uint32_t offset) const {
    if (offset == 0) return *this;
    Poly r;
    for (auto& [m, c] : terms_) {
        Monomial m2 = m;
        for (auto& [v, e] : m2.factors) v += offset;
        r.terms_.emplace(std::move(m2), c);
    }
    return r;
}

std::string Poly::str(const std::function<std::string(std::uint32_t)>& var_name) const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    // print leading terms first
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        Rat a = c;
        if (first) {
            if (a < 0) {
                out << "-";
                a = -a;
            }
        } else {
            out << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        bool coeff_shown = false;
        if (m.is_one() || a != 1) {
            out << rat_str(a);
            coeff_shown = true;
        }
        bool first_factor = true;
        for (auto& [v, e] : m.factors) {
            if (coeff_shown || !first_factor) out << "*";
            out << var_name(v);
            if (e > 1) out << "^" << e;
            first_factor = false;
        }
    }
    return out.str();
}

std::string Poly::str() const {
    return str([](std::uint32_t v) { return "x" + std::to_string(v); });
}

// ----------------------------------------------------------------- PolyMat

PolyMat PolyMat::constant(const QMat& m) {
    PolyMat r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r.at(i, j) = Poly::constant(m.at(i, j));
    return r;
}

PolyMat PolyMat::vars(std::uint32_t offset, std::size_t n) {
    PolyMat r(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            r.at(i, j) = Poly::var(offset + static_cast<std::uint32_t>(i * n + j));
    return r;
}

PolyMat PolyMat::operator*(const PolyMat& o) const {
    if (cols_ != o.rows_) throw DimensionError("polynomial matrix product dimension mismatch");
    PolyMat r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Poly& p = at(i, k);
            if (p.is_zero()) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) {
                if (o.at(k, j).is_zero()) continue;
                r.at(i, j) += p * o.at(k, j);
            }
        }
    return r;
}

PolyMat PolyMat::transpose() const {
    PolyMat r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

PolyMat PolyMat::block(std::size_t i0, std::size_t j0, std::size_t r, std::size_t c) const {
    if (i0 + r > rows_ || j0 + c > cols_) throw DimensionError("block out of range");
    PolyMat b(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) b.at(i, j) = at(i0 + i, j0 + j);
    return b;
}

PolyMat PolyMat::shifted_vars(std::uint32_t offset) const {
    PolyMat r(rows_, cols_);
    for (std::size_t i = 0; i < rows_ * cols_; ++i) r.a_[i] = a_[i].shifted_vars(offset);
    return r;
}

QMat PolyMat::eval(std::span<const Rat> point) const {
    QMat m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m.at(i, j) = at(i, j).eval(point);
    return m;
}

PolyMat operator*(const QMat& a, const PolyMat& b) { return PolyMat::constant(a) * b; }

// ------------------------------------------------------------------ kernel

namespace {

// Clears denominators and divides by the content, keeping the sign of the
// leading nonzero entry.
std::vector<Int> primitive_int_row(const QVec& row) {
    Int den = 1;
    for (std::size_t i = 0; i < row.size(); ++i) {
        Int d = row[i].get_den();
        den = den / gcd(den, d) * d;
    }
    std::vector<Int> r(row.size());
    Int content = 0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        Rat scaled = row[i] * Rat(den);
        r[i] = scaled.get_num();
        content = gcd(content, r[i]);
    }
    if (content > 1)
        for (auto& x : r) x /= content;
    return r;
}

}  // namespace

std::vector<QVec> kernel(const std::vector<QVec>& rows) {
    if (rows.empty()) return {};
    const std::size_t ncols = rows[0].size();
    for (const auto& r : rows)
        if (r.size() != ncols) throw DimensionError("kernel rows of unequal length");

    std::vector<std::vector<Int>> m;
    m.reserve(rows.size());
    for (const auto& r : rows) m.push_back(primitive_int_row(r));

    // fraction-free forward elimination with per-row content reduction
    std::vector<std::size_t> pivot_col;  // per eliminated row
    std::size_t rank = 0;
    for (std::size_t col = 0; col < ncols && rank < m.size(); ++col) {
        std::size_t sel = rank;
        while (sel < m.size() && m[sel][col] == 0) ++sel;
        if (sel == m.size()) continue;
        std::swap(m[rank], m[sel]);
        const std::vector<Int>& prow = m[rank];
        for (std::size_t i = rank + 1; i < m.size(); ++i) {
            if (m[i][col] == 0) continue;
            Int a = prow[col], b = m[i][col];
            Int g = gcd(a, b);
            Int fa = a / g, fb = b / g;
            Int content = 0;
            for (std::size_t j = 0; j < ncols; ++j) {
                m[i][j] = fa * m[i][j] - fb * prow[j];
                content = gcd(content, m[i][j]);
            }
            if (content > 1)
                for (auto& x : m[i]) x /= content;
        }
        pivot_col.push_back(col);
        ++rank;
    }

    std::vector<bool> is_pivot(ncols, false);
    for (std::size_t c : pivot_col) is_pivot[c] = true;

    std::vector<QVec> basis;
    for (std::size_t f = 0; f < ncols; ++f) {
        if (is_pivot[f]) continue;
        QVec v(ncols);
        v[f] = 1;
        for (std::size_t r = rank; r-- > 0;) {
            std::size_t pc = pivot_col[r];
            Rat s = 0;
            for (std::size_t j = pc + 1; j < ncols; ++j)
                if (v[j] != 0) s += Rat(m[r][j]) * v[j];
            v[pc] = -s / Rat(m[r][pc]);
        }
        // normalize: primitive integer entries, first nonzero positive
        Int den = 1;
        for (std::size_t i = 0; i < ncols; ++i) {
            Int d = v[i].get_den();
            den = den / gcd(den, d) * d;
        }
        Int content = 0;
        std::vector<Int> iv(ncols);
        for (std::size_t i = 0; i < ncols; ++i) {
            iv[i] = Rat(v[i] * Rat(den)).get_num();
            content = gcd(content, iv[i]);
        }
        int lead_sign = 0;
        for (std::size_t i = 0; i < ncols && lead_sign == 0; ++i)
            lead_sign = sgn(iv[i]);
        for (std::size_t i = 0; i < ncols; ++i) {
            Int x = content > 1 ? Int(iv[i] / content) : iv[i];
            v[i] = Rat(lead_sign < 0 ? Int(-x) : x);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

// ------------------------------------------------- invariant polynomials

Poly subst_left_mul(const Poly& p, const QMat& g) {
    if (!g.is_square()) throw DimensionError("left-multiplication by a non-square matrix");
    const std::size_t n = g.rows();
    Poly result;
    for (auto& [m, c] : p.terms()) {
        Poly term = Poly::constant(c);
        for (auto& [v, e] : m.factors) {
            if (v >= n * n) throw DimensionError("variable outside the matrix universe");
            std::size_t i = v / n, j = v % n;
            // (gX)_{i,j} = sum_k g_{i,k} x_{k,j}
            Poly repl;
            for (std::size_t k = 0; k < n; ++k)
                if (g.at(i, k) != 0)
                    repl += Poly::term(Monomial::var(static_cast<std::uint32_t>(k * n + j)),
                                       g.at(i, k));
            for (std::uint32_t t = 0; t < e; ++t) term = term * repl;
        }
        result += term;
    }
    return result;
}

Rat eval_at(const Poly& p, const QMat& m) {
    if (!m.is_square()) throw DimensionError("evaluation at a non-square matrix");
    const std::size_t n = m.rows();
    std::vector<Rat> point(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) point[i * n + j] = m.at(i, j);
    return p.eval(point);
}

namespace {

// Left multiplication maps x_{i,j} into the span of { x_{k,j} : k in the
// row-component of i }, so per-(component, column) degrees are preserved.
// The fixed-vector computation therefore splits into small independent
// blocks indexed by degree profiles over these variable classes.
struct VariableClasses {
    std::vector<std::vector<std::uint32_t>> members;  // variables per class
};

VariableClasses variable_classes(std::size_t n, std::span<const QMat> gens) {
    std::vector<std::size_t> comp(n);
    std::iota(comp.begin(), comp.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (comp[x] != x) x = comp[x] = comp[comp[x]];
        return x;
    };
    auto unite = [&](std::size_t a, std::size_t b) { comp[find(a)] = find(b); };
    for (const QMat& g : gens)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                if (g.at(i, k) != 0) unite(i, k);

    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::uint32_t>> grouped;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            grouped[{find(i), j}].push_back(static_cast<std::uint32_t>(i * n + j));

    VariableClasses vc;
    for (auto& [key, vars] : grouped) vc.members.push_back(std::move(vars));
    return vc;
}

// All monomials of the given degree over the given variables, grlex order.
void monomials_of_degree(const std::vector<std::uint32_t>& vars, unsigned degree,
                         std::size_t from, Monomial& current, std::vector<Monomial>& out) {
    if (degree == 0) {
        out.push_back(current);
        return;
    }
    if (from == vars.size()) return;
    if (from + 1 == vars.size()) {
        Monomial m = current * Monomial::var(vars[from], degree);
        out.push_back(std::move(m));
        return;
    }
    for (unsigned e = 0; e <= degree; ++e) {
        Monomial saved = current;
        if (e > 0) current = current * Monomial::var(vars[from], e);
        monomials_of_degree(vars, degree - e, from + 1, current, out);
        current = std::move(saved);
    }
}

void profiles_rec(const VariableClasses& vc, unsigned remaining, std::size_t from,
                  std::vector<unsigned>& current, std::vector<std::vector<unsigned>>& out) {
    if (from == vc.members.size()) {
        out.push_back(current);
        return;
    }
    for (unsigned e = 0; e <= remaining; ++e) {
        current[from] = e;
        profiles_rec(vc, remaining - e, from + 1, current, out);
    }
    current[from] = 0;
}

bool diagonal_only(const Monomial& m, std::size_t n) {
    for (auto& [v, e] : m.factors)
        if (v / n != v % n) return false;
    return true;
}

}  // namespace

PolyBasis invariant_space(std::size_t n, std::span<const QMat> gens, unsigned degree) {
    for (const QMat& g : gens)
        if (g.rows() != n || g.cols() != n)
            throw DimensionError("generator dimension mismatch in invariant space");

    VariableClasses vc = variable_classes(n, gens);

    std::vector<std::vector<unsigned>> profiles;
    std::vector<unsigned> current(vc.members.size(), 0);
    for (unsigned total = 1; total <= degree; ++total)
        profiles_rec(vc, total, 0, current, profiles);
    // keep only profiles with the exact total (profiles_rec pads with zeros)
    std::vector<std::vector<unsigned>> exact;
    for (auto& pr : profiles) {
        unsigned total = std::accumulate(pr.begin(), pr.end(), 0u);
        if (total >= 1) exact.push_back(pr);
    }
    std::sort(exact.begin(), exact.end(), [](const auto& a, const auto& b) {
        unsigned sa = std::accumulate(a.begin(), a.end(), 0u);
        unsigned sb = std::accumulate(b.begin(), b.end(), 0u);
        if (sa != sb) return sa < sb;
        return a < b;
    });
    exact.erase(std::unique(exact.begin(), exact.end()), exact.end());

    PolyBasis basis;
    basis.degree = degree;

    for (const auto& profile : exact) {
        // monomials of this block: product over classes of per-class monomials
        std::vector<Monomial> block{Monomial::one()};
        for (std::size_t c = 0; c < vc.members.size(); ++c) {
            if (profile[c] == 0) continue;
            std::vector<Monomial> per_class;
            Monomial scratch;
            monomials_of_degree(vc.members[c], profile[c], 0, scratch, per_class);
            std::vector<Monomial> next;
            next.reserve(block.size() * per_class.size());
            for (const Monomial& b : block)
                for (const Monomial& m : per_class) next.push_back(b * m);
            block = std::move(next);
        }
        std::sort(block.begin(), block.end(),
                  [](const Monomial& a, const Monomial& b) { return GrlexLess{}(a, b); });

        std::map<Monomial, std::size_t, GrlexLess> index;
        for (std::size_t i = 0; i < block.size(); ++i) index.emplace(block[i], i);

        // stacked (M_g - I) rows over all generators
        std::vector<QVec> rows;
        for (const QMat& g : gens) {
            // column m': coefficients of subst(m') distribute over rows
            std::vector<QVec> mg(block.size(), QVec(block.size()));
            for (std::size_t mp = 0; mp < block.size(); ++mp) {
                Poly image = subst_left_mul(Poly::term(block[mp], 1), g);
                for (auto& [m, c] : image.terms()) {
                    auto it = index.find(m);
                    if (it == index.end())
                        throw InternalError("substitution left its degree block");
                    mg[it->second][mp] = c;
                }
            }
            for (std::size_t r = 0; r < block.size(); ++r) {
                mg[r][r] -= 1;
                bool nonzero = false;
                for (std::size_t j = 0; j < block.size(); ++j)
                    if (mg[r][j] != 0) {
                        nonzero = true;
                        break;
                    }
                if (nonzero) rows.push_back(std::move(mg[r]));
            }
        }

        std::vector<QVec> fixed;
        if (rows.empty()) {
            // no constraints: every block vector is fixed
            for (std::size_t i = 0; i < block.size(); ++i) {
                QVec v(block.size());
                v[i] = 1;
                fixed.push_back(std::move(v));
            }
        } else {
            fixed = kernel(rows);
        }

        for (const QVec& v : fixed) {
            Poly p;
            Rat at_identity = 0;
            for (std::size_t i = 0; i < block.size(); ++i) {
                if (v[i] == 0) continue;
                p.add_term(block[i], v[i]);
                if (diagonal_only(block[i], n)) at_identity += v[i];
            }
            // pivot on the constant polynomial to enforce p(I) = 0
            p -= Poly::constant(at_identity);
            if (!p.is_zero()) basis.polys.push_back(std::move(p));
        }
    }
    return basis;
}

namespace {

std::string gens_cache_key(std::size_t n, std::span<const QMat> gens, unsigned degree) {
    std::vector<std::string> parts;
    parts.reserve(gens.size());
    for (const QMat& g : gens) parts.push_back(g.str());
    std::sort(parts.begin(), parts.end());
    parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
    std::string key = std::to_string(n) + "@" + std::to_string(degree);
    for (auto& p : parts) key += "|" + p;
    return key;
}

}  // namespace

const PolyBasis& invariant_space_cached(std::size_t n, std::span<const QMat> gens,
                                        unsigned degree) {
    static std::mutex mutex;
    static std::map<std::string, PolyBasis> cache;
    const std::string key = gens_cache_key(n, gens, degree);
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    PolyBasis computed = invariant_space(n, gens, degree);
    std::lock_guard<std::mutex> lock(mutex);
    auto [it, inserted] = cache.emplace(key, std::move(computed));
    return it->second;
}

bool in_span(const Poly& p, std::span<const Poly> basis) {
    if (p.is_zero()) return true;
    // collect the monomial universe
    std::map<Monomial, std::size_t, GrlexLess> index;
    auto note = [&](const Poly& q) {
        for (auto& [m, c] : q.terms())
            if (!index.count(m)) index.emplace(m, index.size());
    };
    note(p);
    for (const Poly& b : basis) note(b);

    const std::size_t cols = index.size();
    std::vector<QVec> rows;
    for (const Poly& b : basis) {
        QVec row(cols);
        for (auto& [m, c] : b.terms()) row[index.at(m)] = c;
        rows.push_back(std::move(row));
    }
    // solve: p in span(basis) iff appending p does not raise the rank.
    auto rank_of = [](std::vector<std::vector<Int>> m) {
        std::size_t rank = 0;
        if (m.empty()) return rank;
        std::size_t ncols = m[0].size();
        for (std::size_t col = 0; col < ncols && rank < m.size(); ++col) {
            std::size_t sel = rank;
            while (sel < m.size() && m[sel][col] == 0) ++sel;
            if (sel == m.size()) continue;
            std::swap(m[rank], m[sel]);
            for (std::size_t i = rank + 1; i < m.size(); ++i) {
                if (m[i][col] == 0) continue;
                Int a = m[rank][col], b = m[i][col];
                Int g = gcd(a, b);
                Int fa = a / g, fb = b / g;
                Int content = 0;
                for (std::size_t j = 0; j < ncols; ++j) {
                    m[i][j] = fa * m[i][j] - fb * m[rank][j];
                    content = gcd(content, m[i][j]);
                }
                if (content > 1)
                    for (auto& x : m[i]) x /= content;
            }
            ++rank;
        }
        return rank;
    };

    std::vector<std::vector<Int>> base_int;
    for (const auto& r : rows) base_int.push_back(primitive_int_row(r));
    std::size_t base_rank = rank_of(base_int);

    QVec prow(cols);
    for (auto& [m, c] : p.terms()) prow[index.at(m)] = c;
    base_int.push_back(primitive_int_row(prow));
    return rank_of(base_int) == base_rank;
}

}  // namespace qfi
