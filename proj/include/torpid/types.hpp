#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace torpid {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class Side { Even, Odd };

inline Side opposite(Side s) { return s == Side::Even ? Side::Odd : Side::Even; }
inline char side_char(Side s) { return s == Side::Even ? 'E' : 'O'; }

/// A vertex is identified by its partition class and its index within that
/// class. Even-class indices and odd-class indices are independent ranges.
struct Vertex {
    Side side;
    int index;

    friend bool operator==(const Vertex&, const Vertex&) = default;
    friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

/// Subset of a single partition class; members sorted ascending, no duplicates.
struct VertexSet {
    Side side = Side::Even;
    std::vector<int> members;

    bool contains(int idx) const;
    int size() const { return static_cast<int>(members.size()); }
    bool empty() const { return members.empty(); }

    friend bool operator==(const VertexSet&, const VertexSet&) = default;
};

/// Normalise (sort, dedup) a member list into a VertexSet.
VertexSet make_vertex_set(Side side, std::vector<int> members);

/// Subset of the whole vertex set, kept as one sorted list per class.
struct VertexSubset {
    std::vector<int> even_members;
    std::vector<int> odd_members;

    int size() const {
        return static_cast<int>(even_members.size() + odd_members.size());
    }
    bool empty() const { return even_members.empty() && odd_members.empty(); }
};

// Error taxonomy, mirrored by the CLI exit codes.

/// A configurable brute-force limit was exceeded (exit code 2).
struct GuardExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (exit code 3).
struct InvalidInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A graph lacks a structural property an operation relies on (exit code 4).
/// Carries a witness: two same-level vertices with a common upper neighbour
/// but no common lower neighbour.
struct StructuralFailure : std::runtime_error {
    Vertex witness_a;
    Vertex witness_b;
    Vertex witness_upper;

    StructuralFailure(const std::string& msg, Vertex a, Vertex b, Vertex upper)
        : std::runtime_error(msg), witness_a(a), witness_b(b), witness_upper(upper) {}
};

/// Parse a non-negative decimal string ("0.2", "1/5", "3") into an exact rational.
Rational rational_from_decimal(const std::string& text);

std::string to_string(const Rational& r);

}  // namespace torpid
