#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

// Brute-force reference implementations for the test suite. Inputs and outputs are the
// text serializations; nothing here reads the main modules' in-memory structures.
namespace cnsg::oracle {

inline constexpr int kMaxWeight = 8;

struct Matchings {
    std::size_t count = 0;
    std::vector<std::vector<int>> partners;  // partner arrays in lexicographic order
};

// All non-crossing perfect matchings of the points on a triangle boundary, listed side 0,
// then 1, then 2. Throws std::invalid_argument on an odd or negative total.
Matchings oracle_matchings(const std::array<int, 3>& points_per_side);

// Calls visit with every valid surface serialization of weight at most W until it returns
// false. When given, only weight vectors accepted by `weights` are expanded. Throws
// std::invalid_argument when W exceeds kMaxWeight.
void oracle_surfaces(std::string_view triangulation, int W, const std::function<bool(const std::string&)>& visit,
                     const std::function<bool(const std::vector<int>&)>& weights = {});
std::set<std::string> oracle_surfaces(std::string_view triangulation, int W);

// Fixed point of the text-level move application from the seed, keeping results of weight
// at most W. move_set is comma separated (V0,E1,F2,F2',PINCH,UNPINCH).
std::set<std::string> oracle_closure(std::string_view triangulation, std::string_view seed, int W,
                                     std::string_view move_set);

}  // namespace cnsg::oracle
