#include "lang.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "errors.hpp"

namespace qfi {

namespace {

bool contains(const std::vector<std::string>& v, const std::string& x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

bool contains(const std::vector<char>& v, char x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

void check_terminal_word(const LinearGrammar& g, const std::string& w, const char* where) {
    for (char c : w)
        if (!contains(g.alphabet, c))
            throw InvalidInstance(std::string("letter '") + c + "' in " + where +
                                  " is not in the alphabet");
}

// length-lexicographic comparison under the declared alphabet order
struct LenLex {
    const std::vector<char>* alphabet;
    int rank(char c) const {
        for (std::size_t i = 0; i < alphabet->size(); ++i)
            if ((*alphabet)[i] == c) return static_cast<int>(i);
        return static_cast<int>(alphabet->size());
    }
    bool operator()(const std::string& a, const std::string& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return rank(a[i]) < rank(b[i]);
        return false;
    }
};

}  // namespace

void validate_grammar(const LinearGrammar& g) {
    if (g.nonterminals.empty()) throw InvalidInstance("grammar has no nonterminals");
    if (!contains(g.nonterminals, g.axiom)) throw InvalidInstance("axiom is not a nonterminal");
    for (const LinearRule& r : g.rules) {
        if (!contains(g.nonterminals, r.lhs))
            throw InvalidInstance("rule left-hand side '" + r.lhs + "' is not a nonterminal");
        if (r.terminal) {
            check_terminal_word(g, r.w, "a terminal rule");
        } else {
            if (!contains(g.nonterminals, r.inner))
                throw InvalidInstance("rule nonterminal '" + r.inner + "' is not declared");
            check_terminal_word(g, r.u, "a rule context");
            check_terminal_word(g, r.v, "a rule context");
        }
    }
}

void validate_semilinear(const SemilinearLanguage& l) {
    for (const SemilinearComponent& c : l.components) {
        if (c.words.empty()) throw InvalidInstance("semilinear component with no words");
        if (c.base.size() != c.words.size())
            throw InvalidInstance("semilinear base vector has wrong length");
        for (const auto& p : c.periods)
            if (p.size() != c.words.size())
                throw InvalidInstance("semilinear period vector has wrong length");
        for (const std::string& w : c.words)
            for (char ch : w)
                if (!contains(l.alphabet, ch))
                    throw InvalidInstance(std::string("letter '") + ch +
                                          "' in a semilinear word is not in the alphabet");
    }
}

const std::vector<char>& alphabet_of(const LanguageSpec& spec) {
    return std::visit([](const auto& s) -> const std::vector<char>& { return s.alphabet; }, spec);
}

LinearGrammar sub_grammar(const LinearGrammar& g, const std::string& a) {
    if (a == g.axiom) throw InvalidInstance("sub-grammar axiom equals the original axiom");
    if (!contains(g.nonterminals, a)) throw InvalidInstance("sub-grammar axiom is not declared");
    LinearGrammar sub;
    sub.alphabet = g.alphabet;
    sub.axiom = a;
    for (const std::string& n : g.nonterminals)
        if (n != g.axiom) sub.nonterminals.push_back(n);
    for (const LinearRule& r : g.rules) {
        if (r.lhs == g.axiom) continue;
        if (!r.terminal && r.inner == g.axiom) continue;
        sub.rules.push_back(r);
    }
    return sub;
}

Decomposition decompose(const LinearGrammar& g) {
    Decomposition d;
    for (std::size_t i = 0; i < g.rules.size(); ++i) {
        const LinearRule& r = g.rules[i];
        if (r.lhs != g.axiom) continue;
        if (r.terminal) {
            d.branches.push_back({i, r.w, std::nullopt, ""});
        } else if (r.inner != g.axiom) {
            d.branches.push_back({i, r.u, r.inner, r.v});
        }
        // axiom-recursive rules feed the context automaton only
    }
    return d;
}

ContextAutomaton context_automaton(const LinearGrammar& g, const LetterMap& phi,
                                   std::size_t dim) {
    std::vector<ContextTransition> all;
    for (std::size_t i = 0; i < g.rules.size(); ++i) {
        const LinearRule& r = g.rules[i];
        if (r.terminal) continue;
        QMat label = block_sum({phi_word(phi, dim, r.u), phi_word(phi, dim, r.v).transpose()});
        all.push_back({r.lhs, r.inner, std::move(label), i});
    }

    // trim to states on some axiom-to-axiom path
    std::set<std::string> forward{g.axiom};
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& t : all)
            if (forward.count(t.from) && !forward.count(t.to)) {
                forward.insert(t.to);
                changed = true;
            }
    }
    std::set<std::string> backward{g.axiom};
    changed = true;
    while (changed) {
        changed = false;
        for (const auto& t : all)
            if (backward.count(t.to) && !backward.count(t.from)) {
                backward.insert(t.from);
                changed = true;
            }
    }

    ContextAutomaton ca;
    ca.initial_final = g.axiom;
    for (const std::string& n : g.nonterminals)
        if (forward.count(n) && backward.count(n)) ca.states.push_back(n);
    for (auto& t : all)
        if (forward.count(t.from) && backward.count(t.from) && forward.count(t.to) &&
            backward.count(t.to))
            ca.transitions.push_back(std::move(t));
    return ca;
}

std::vector<QMat> context_generators(const ContextAutomaton& ca) {
    if (ca.transitions.empty()) return {};
    const std::size_t dim = ca.transitions.front().label.rows();

    // breadth-first spanning tree from the axiom; l_q = label of tree path
    std::map<std::string, QMat> path_label;
    path_label.emplace(ca.initial_final, QMat::identity(dim));
    std::deque<std::string> frontier{ca.initial_final};
    while (!frontier.empty()) {
        std::string q = frontier.front();
        frontier.pop_front();
        for (const auto& t : ca.transitions) {
            if (t.from != q || path_label.count(t.to)) continue;
            path_label.emplace(t.to, path_label.at(q) * t.label);
            frontier.push_back(t.to);
        }
    }

    std::vector<QMat> gens;
    for (const auto& t : ca.transitions) {
        QMat y = path_label.at(t.from) * t.label * path_label.at(t.to).transpose();
        if (y.is_identity()) continue;
        if (std::find(gens.begin(), gens.end(), y) == gens.end()) gens.push_back(std::move(y));
    }
    return gens;
}

// ------------------------------------------------------------- enumeration

namespace {

constexpr std::size_t kEnumerationNodeCap = 4000000;

std::vector<std::string> enumerate_sigma_star(const SigmaStar& s, std::size_t max_count,
                                              std::size_t max_len) {
    std::vector<std::string> out;
    if (max_count == 0) return out;
    out.push_back("");
    for (std::size_t len = 1; len <= max_len && out.size() < max_count; ++len) {
        if (s.alphabet.empty()) break;
        std::vector<std::size_t> idx(len, 0);
        while (out.size() < max_count) {
            std::string w(len, ' ');
            for (std::size_t i = 0; i < len; ++i) w[i] = s.alphabet[idx[i]];
            out.push_back(std::move(w));
            std::size_t pos = len;
            while (pos > 0) {
                if (++idx[pos - 1] < s.alphabet.size()) break;
                idx[pos - 1] = 0;
                --pos;
            }
            if (pos == 0) break;
        }
    }
    if (out.size() > max_count) out.resize(max_count);
    return out;
}

std::string build_semilinear_word(const SemilinearComponent& c,
                                  const std::vector<unsigned long>& exponents) {
    std::string w;
    for (std::size_t i = 0; i < c.words.size(); ++i)
        for (unsigned long k = 0; k < exponents[i]; ++k) w += c.words[i];
    return w;
}

void semilinear_collect(const SemilinearComponent& c, std::size_t max_len,
                        std::set<std::string, LenLex>& out, std::size_t& nodes) {
    std::vector<std::size_t> weight(c.periods.size());
    std::size_t base_len = 0;
    for (std::size_t i = 0; i < c.words.size(); ++i) base_len += c.base[i] * c.words[i].size();
    if (base_len > max_len) return;
    for (std::size_t t = 0; t < c.periods.size(); ++t) {
        std::size_t d = 0;
        for (std::size_t i = 0; i < c.words.size(); ++i)
            d += c.periods[t][i] * c.words[i].size();
        weight[t] = d;
    }
    // depth-first over period multipliers; zero-weight periods never change
    // the produced word and are pinned at zero
    std::vector<unsigned long> exponents(c.base.begin(), c.base.end());
    auto rec = [&](auto&& self, std::size_t t, std::size_t used) -> void {
        if (++nodes > kEnumerationNodeCap)
            throw BudgetError("semilinear enumeration node cap exceeded");
        if (t == c.periods.size()) {
            out.insert(build_semilinear_word(c, exponents));
            return;
        }
        if (weight[t] == 0) {
            self(self, t + 1, used);
            return;
        }
        for (unsigned long lam = 0; used + lam * weight[t] <= max_len; ++lam) {
            for (std::size_t i = 0; i < c.words.size(); ++i)
                exponents[i] += lam * c.periods[t][i];
            self(self, t + 1, used + lam * weight[t]);
            for (std::size_t i = 0; i < c.words.size(); ++i)
                exponents[i] -= lam * c.periods[t][i];
        }
    };
    rec(rec, 0, base_len);
}

std::vector<std::string> enumerate_semilinear(const SemilinearLanguage& l, std::size_t max_count,
                                              std::size_t max_len) {
    std::set<std::string, LenLex> words{LenLex{&l.alphabet}};
    std::size_t nodes = 0;
    for (const SemilinearComponent& c : l.components) semilinear_collect(c, max_len, words, nodes);
    std::vector<std::string> out;
    for (const std::string& w : words) {
        if (out.size() >= max_count) break;
        out.push_back(w);
    }
    return out;
}

// breadth-first search over sentential forms u A v of a linear grammar
std::vector<std::string> enumerate_linear_cfg(const LinearGrammar& g, std::size_t max_count,
                                              std::size_t max_len) {
    std::map<std::string, std::vector<const LinearRule*>> by_lhs;
    for (const LinearRule& r : g.rules) by_lhs[r.lhs].push_back(&r);

    std::set<std::string, LenLex> words{LenLex{&g.alphabet}};
    std::set<std::tuple<std::string, std::string, std::string>> visited;
    std::deque<std::tuple<std::string, std::string, std::string>> queue;
    queue.push_back({"", g.axiom, ""});
    visited.insert(queue.front());
    std::size_t nodes = 0;
    while (!queue.empty()) {
        if (++nodes > kEnumerationNodeCap)
            throw BudgetError("grammar enumeration node cap exceeded");
        auto [u, a, v] = queue.front();
        queue.pop_front();
        auto it = by_lhs.find(a);
        if (it == by_lhs.end()) continue;
        for (const LinearRule* r : it->second) {
            if (r->terminal) {
                if (u.size() + r->w.size() + v.size() <= max_len) words.insert(u + r->w + v);
            } else {
                std::string nu = u + r->u;
                std::string nv = r->v + v;
                if (nu.size() + nv.size() > max_len) continue;
                auto form = std::make_tuple(std::move(nu), r->inner, std::move(nv));
                if (visited.insert(form).second) queue.push_back(std::move(form));
            }
        }
    }
    std::vector<std::string> out;
    for (const std::string& w : words) {
        if (out.size() >= max_count) break;
        out.push_back(w);
    }
    return out;
}

}  // namespace

std::vector<std::string> enumerate_words(const LanguageSpec& spec, std::size_t max_count,
                                         std::size_t max_len) {
    if (std::holds_alternative<SigmaStar>(spec))
        return enumerate_sigma_star(std::get<SigmaStar>(spec), max_count, max_len);
    if (std::holds_alternative<SemilinearLanguage>(spec))
        return enumerate_semilinear(std::get<SemilinearLanguage>(spec), max_count, max_len);
    return enumerate_linear_cfg(std::get<LinearGrammar>(spec), max_count, max_len);
}

// -------------------------------------------------------------- membership

namespace {

std::optional<SemilinearWitness> semilinear_match_component(const SemilinearComponent& c,
                                                            std::size_t index,
                                                            std::string_view w) {
    std::vector<std::size_t> weight(c.periods.size());
    std::size_t base_len = 0;
    for (std::size_t i = 0; i < c.words.size(); ++i) base_len += c.base[i] * c.words[i].size();
    if (base_len > w.size()) return std::nullopt;
    for (std::size_t t = 0; t < c.periods.size(); ++t) {
        std::size_t d = 0;
        for (std::size_t i = 0; i < c.words.size(); ++i)
            d += c.periods[t][i] * c.words[i].size();
        weight[t] = d;
    }
    std::vector<unsigned long> lambdas(c.periods.size(), 0);
    std::vector<unsigned long> exponents(c.base.begin(), c.base.end());
    std::optional<SemilinearWitness> found;
    auto rec = [&](auto&& self, std::size_t t, std::size_t used) -> bool {
        if (t == c.periods.size()) {
            if (used != w.size()) return false;
            if (build_semilinear_word(c, exponents) != w) return false;
            found = SemilinearWitness{index, lambdas};
            return true;
        }
        if (weight[t] == 0) return self(self, t + 1, used);
        for (unsigned long lam = 0; used + lam * weight[t] <= w.size(); ++lam) {
            lambdas[t] = lam;
            for (std::size_t i = 0; i < c.words.size(); ++i)
                exponents[i] += lam * c.periods[t][i];
            bool ok = self(self, t + 1, used + lam * weight[t]);
            for (std::size_t i = 0; i < c.words.size(); ++i)
                exponents[i] -= lam * c.periods[t][i];
            if (ok) return true;
            lambdas[t] = 0;
        }
        return false;
    };
    rec(rec, 0, base_len);
    return found;
}

// nonterminals deriving each span, plus the first rule found, computed by
// increasing span length with a unit-rule closure per span
struct ParseTable {
    // (nonterminal, i, j) -> (rule index, inner span) ; terminal rules use
    // an empty inner marker
    std::map<std::tuple<std::string, std::size_t, std::size_t>,
             std::pair<std::size_t, std::optional<std::tuple<std::string, std::size_t, std::size_t>>>>
        entries;
};

ParseTable parse_all(const LinearGrammar& g, std::string_view w) {
    ParseTable table;
    const std::size_t n = w.size();
    for (std::size_t len = 0; len <= n; ++len) {
        for (std::size_t i = 0; i + len <= n; ++i) {
            std::size_t j = i + len;
            bool changed = true;
            while (changed) {
                changed = false;
                for (std::size_t ri = 0; ri < g.rules.size(); ++ri) {
                    const LinearRule& r = g.rules[ri];
                    auto key = std::make_tuple(r.lhs, i, j);
                    if (table.entries.count(key)) continue;
                    if (r.terminal) {
                        if (r.w.size() == len && w.substr(i, len) == r.w) {
                            table.entries.emplace(key, std::make_pair(ri, std::nullopt));
                            changed = true;
                        }
                    } else {
                        if (r.u.size() + r.v.size() > len) continue;
                        if (w.substr(i, r.u.size()) != r.u) continue;
                        if (w.substr(j - r.v.size(), r.v.size()) != r.v) continue;
                        auto inner =
                            std::make_tuple(r.inner, i + r.u.size(), j - r.v.size());
                        if (!table.entries.count(inner)) continue;
                        table.entries.emplace(key, std::make_pair(ri, inner));
                        changed = true;
                    }
                }
            }
        }
    }
    return table;
}

}  // namespace

bool membership(const LanguageSpec& spec, std::string_view w) {
    for (char c : w)
        if (!contains(alphabet_of(spec), c)) return false;
    if (std::holds_alternative<SigmaStar>(spec)) return true;
    if (std::holds_alternative<SemilinearLanguage>(spec)) {
        const auto& l = std::get<SemilinearLanguage>(spec);
        for (std::size_t i = 0; i < l.components.size(); ++i)
            if (semilinear_match_component(l.components[i], i, w)) return true;
        return false;
    }
    const auto& g = std::get<LinearGrammar>(spec);
    ParseTable t = parse_all(g, w);
    return t.entries.count({g.axiom, 0, w.size()}) > 0;
}

std::optional<SemilinearWitness> semilinear_decompose_word(const SemilinearLanguage& l,
                                                           std::string_view w) {
    for (std::size_t i = 0; i < l.components.size(); ++i)
        if (auto found = semilinear_match_component(l.components[i], i, w)) return found;
    return std::nullopt;
}

std::optional<std::vector<std::size_t>> derive(const LinearGrammar& g, std::string_view w) {
    ParseTable t = parse_all(g, w);
    auto key = std::make_tuple(g.axiom, std::size_t(0), w.size());
    if (!t.entries.count(key)) return std::nullopt;
    std::vector<std::size_t> rules;
    while (true) {
        auto& [rule, inner] = t.entries.at(key);
        rules.push_back(rule);
        if (!inner) break;
        key = *inner;
    }
    return rules;
}

std::optional<std::size_t> shortest_member_length(const LanguageSpec& spec) {
    if (std::holds_alternative<SigmaStar>(spec)) return 0;
    if (std::holds_alternative<SemilinearLanguage>(spec)) {
        const auto& l = std::get<SemilinearLanguage>(spec);
        std::optional<std::size_t> best;
        for (const SemilinearComponent& c : l.components) {
            std::size_t len = 0;
            for (std::size_t i = 0; i < c.words.size(); ++i) len += c.base[i] * c.words[i].size();
            if (!best || len < *best) best = len;
        }
        return best;
    }
    const auto& g = std::get<LinearGrammar>(spec);
    // Bellman-style relaxation of shortest derivable word lengths
    std::map<std::string, std::size_t> len;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const LinearRule& r : g.rules) {
            std::optional<std::size_t> cand;
            if (r.terminal) {
                cand = r.w.size();
            } else if (len.count(r.inner)) {
                cand = r.u.size() + r.v.size() + len.at(r.inner);
            }
            if (cand && (!len.count(r.lhs) || *cand < len.at(r.lhs))) {
                len[r.lhs] = *cand;
                changed = true;
            }
        }
    }
    if (!len.count(g.axiom)) return std::nullopt;
    return len.at(g.axiom);
}

WordEnumerator::WordEnumerator(LanguageSpec spec, std::size_t max_len, std::size_t max_count)
    : spec_(std::move(spec)),
      max_len_(max_len),
      max_count_(max_count),
      current_bound_(std::min<std::size_t>(8, max_len)) {
    words_ = enumerate_words(spec_, max_count_, current_bound_);
}

void WordEnumerator::extend() {
    while (index_ >= words_.size() && words_.size() < max_count_ && current_bound_ < max_len_) {
        current_bound_ = std::min(current_bound_ + 8, max_len_);
        words_ = enumerate_words(spec_, max_count_, current_bound_);
    }
    if (index_ >= words_.size()) done_ = true;
}

std::optional<std::string> WordEnumerator::next() {
    if (done_) return std::nullopt;
    if (index_ >= words_.size()) {
        extend();
        if (done_) return std::nullopt;
    }
    return words_[index_++];
}

}  // namespace qfi
