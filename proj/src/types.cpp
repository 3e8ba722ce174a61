#include "torpid/types.hpp"

#include <algorithm>
#include <cctype>

namespace torpid {

bool VertexSet::contains(int idx) const {
    return std::binary_search(members.begin(), members.end(), idx);
}

VertexSet make_vertex_set(Side side, std::vector<int> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    return VertexSet{side, std::move(members)};
}

Rational rational_from_decimal(const std::string& text) {
    if (text.empty()) throw InvalidInput("empty rational literal");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) throw InvalidInput("zero denominator: " + text);
        return Rational(num, den);
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(BigInt(text));
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    if (digits.empty() ||
        !std::all_of(digits.begin(), digits.end(),
                     [](unsigned char c) { return std::isdigit(c) || c == '-'; }))
        throw InvalidInput("bad rational literal: " + text);
    BigInt den = 1;
    for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
    return Rational(BigInt(digits), den);
}

std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace torpid
