#include "km/sequent.hpp"

namespace km {

FMultiset measure_multiset(const Sequent& s) { return s.lhs + s.rhs + s.rhs; }

bool seq_less(const Sequent& a, const Sequent& b) { return dm_less(measure_multiset(a), measure_multiset(b)); }

boost::multiprecision::cpp_int sequent_weight(const Sequent& s) {
    boost::multiprecision::cpp_int total = 0;
    for (const auto& [f, c] : measure_multiset(s)) {
        boost::multiprecision::cpp_int term = boost::multiprecision::pow(boost::multiprecision::cpp_int(3),
                                                                         static_cast<unsigned>(f.weight()));
        total += term * c;
    }
    return total;
}

std::set<std::string> vars(const Sequent& s) {
    auto out = vars(s.lhs);
    out.merge(vars(s.rhs));
    return out;
}

Sequent contract(const Sequent& s) {
    Sequent out;
    for (const auto& [f, c] : s.lhs)
        out.lhs.insert(f);
    for (const auto& [f, c] : s.rhs)
        out.rhs.insert(f);
    return out;
}

} // namespace km
