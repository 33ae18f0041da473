#include "rat.hpp"

#include <cctype>

namespace qfi {

Rat rat_parse(const std::string& text) {
    if (text.empty()) throw ParseError("empty rational literal");
    for (char c : text) {
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '+'))
            throw ParseError("bad character in rational literal '" + text + "'");
    }
    mpq_class q;
    if (mpq_set_str(q.get_mpq_t(), text.c_str(), 10) != 0)
        throw ParseError("unparsable rational literal '" + text + "'");
    if (q.get_den() == 0) throw ParseError("zero denominator in rational literal '" + text + "'");
    q.canonicalize();
    return q;
}

std::string rat_str(const Rat& r) { return r.get_str(); }

Int rat_floor(const Rat& r) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

Int rat_round(const Rat& r) { return rat_floor(r + Rat(1, 2)); }

}  // namespace qfi
