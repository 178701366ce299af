#pragma once

// Strategy tables used by the constructive builders. Two-axis tables are
// written table[x][y] for the axis order documented next to each one.

#include <array>

#include "hats/strategy.hpp"

namespace hats::fixtures {

using Table1 = std::array<Color, 3>;
using Table2 = std::array<std::array<Color, 3>, 3>;
using Table3 = std::array<Table2, 3>;
using Table4 = std::array<std::array<Table2, 3>, 3>;

// Cycle A, S1, .., Sk. Axes [previous][next] along A -> S1 -> .. -> Sk -> A.
// Every disproving placement of the unhinted game gives A color 2.
inline constexpr Table2 kCycleA{{{0, 1, 1}, {0, 1, 0}, {1, 1, 1}}};
// kCycleA with cell [2][2] set to 0; breaks the k+1 law (kept for tests).
inline constexpr Table2 kCycleALiteral{{{0, 1, 1}, {0, 1, 0}, {1, 1, 0}}};
inline constexpr Table2 kCycleS{{{2, 1, 1}, {0, 0, 0}, {2, 1, 1}}};

// Four sages A - B - C - D of the worked example. B: [c_A][c_C], C: [c_B][c_D].
inline constexpr Table2 kExampleB{{{1, 0, 0}, {1, 2, 1}, {2, 2, 0}}};
inline constexpr Table2 kExampleC{{{2, 1, 1}, {0, 0, 0}, {2, 1, 1}}};
inline constexpr Table1 kSayWhatISee{0, 1, 2};

// Paths A .. B. Ends guess neighbor + 1; inner sages [toward A][toward B].
inline constexpr Table1 kPathEnd{1, 2, 0};
inline constexpr Table2 kPathInner{{{1, 1, 0}, {1, 2, 2}, {0, 2, 0}}};

// Leaf pushed onto a hinted pivot, indexed by the pivot's color.
inline constexpr Table1 kPushLeaf{0, 0, 1};

// Two cycles A, B1..Bk and A, D1..Dm sharing A. Cycle tables are
// [previous][next] along A -> B1 -> .. -> Bk -> A and A -> D1 -> .. -> Dm -> A;
// T sits at Bk and D1, S elsewhere. A is read [c_B1][c_Bk][c_D1][c_Dm].
inline constexpr Table2 kSharedX{{{2, 0, 2}, {2, 0, 2}, {0, 0, 2}}};
inline constexpr Table2 kSharedO{{{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}};
inline constexpr Table4 kSharedA{{
    {{kSharedX, kSharedX, kSharedX}},
    {{kSharedO, kSharedX, kSharedX}},
    {{kSharedO, kSharedO, kSharedX}},
}};
inline constexpr Table2 kSharedT{{{0, 2, 1}, {0, 1, 0}, {2, 2, 1}}};
inline constexpr Table2 kSharedS{{{2, 2, 1}, {0, 0, 1}, {2, 2, 1}}};

// Theta with three nontrivial paths (upper, middle, lower) from A to B.
// A: [upper first][middle first][lower first]; B: [upper last][middle last][lower last].
// Upper sages use S as [toward B][toward A], middle sages S as
// [toward A][toward B]; the lower path is W next to A then S', both
// [toward A][toward B].
inline constexpr Table3 kThetaA{{
    {{{0, 0, 0}, {1, 1, 1}, {1, 1, 1}}},
    {{{0, 0, 0}, {2, 1, 2}, {0, 0, 2}}},
    {{{0, 0, 0}, {2, 2, 2}, {0, 0, 2}}},
}};
inline constexpr Table3 kThetaB{{
    {{{1, 2, 2}, {0, 2, 0}, {0, 0, 0}}},
    {{{1, 1, 1}, {1, 2, 2}, {1, 2, 2}}},
    {{{1, 1, 1}, {0, 2, 0}, {0, 2, 0}}},
}};
inline constexpr Table2 kThetaW{{{2, 2, 2}, {1, 2, 0}, {1, 1, 0}}};
inline constexpr Table2 kThetaS{{{1, 1, 1}, {0, 2, 0}, {0, 2, 0}}};
inline constexpr Table2 kThetaSLower{{{1, 1, 0}, {1, 2, 2}, {1, 2, 0}}};

// Theta whose shortest path is the edge AB. A: [c_B][middle first][lower first];
// B: [c_A][middle last][lower last]. Middle sages [toward A][toward B],
// lower sages [toward B][toward A].
inline constexpr Table3 kEdgeThetaA{{
    {{{1, 1, 0}, {2, 0, 2}, {1, 1, 0}}},
    {{{0, 0, 0}, {2, 2, 2}, {0, 0, 0}}},
    {{{1, 1, 0}, {2, 2, 2}, {1, 1, 2}}},
}};
inline constexpr Table3 kEdgeThetaB{{
    {{{0, 2, 1}, {1, 2, 1}, {0, 2, 2}}},
    {{{1, 2, 1}, {1, 2, 1}, {1, 2, 1}}},
    {{{1, 2, 1}, {1, 0, 1}, {0, 2, 0}}},
}};
inline constexpr Table2 kEdgeThetaS{{{1, 2, 1}, {1, 1, 1}, {0, 2, 0}}};

}  // namespace hats::fixtures
