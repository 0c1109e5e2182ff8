#pragma once

// Published census figures for three colors, transcribed for comparison with computed
// results. Tile sets are phi lists; each listed set stands for its symmetry class.

#include <cstdint>
#include <vector>

namespace tessella::reference_tables {

// k, g1(k), classes of g1(k), g2(k), classes of g2(k): subsets of G1 (resp. G2) with k
// tiles containing no minimal cycle generator of that group.
struct DRow {
  int k;
  std::uint64_t g1, g1_classes, g2, g2_classes;
};

inline const std::vector<DRow> d_counts = {
    {1, 36, 1, 36, 1},
    {2, 576, 8, 612, 8},
    {3, 5304, 31, 6504, 34},
    {4, 31032, 146, 47988, 219},
    {5, 122184, 475, 256320, 971},
    {6, 342204, 1290, 998136, 3692},
    {7, 711288, 2581, 2812752, 10043},
    {8, 1129896, 4092, 5771988, 20554},
    {9, 1397892, 5005, 8886612, 31338},
    {10, 1361448, 4903, 10558368, 37319},
    {11, 1047816, 3763, 9807336, 34539},
    {12, 635580, 2321, 7125612, 25253},
    {13, 300888, 1106, 4007484, 14203},
    {14, 109080, 423, 1708632, 6162},
    {15, 29304, 118, 533664, 1945},
    {16, 5508, 28, 115164, 453},
    {17, 648, 4, 15336, 65},
    {18, 36, 1, 948, 8},
};

// Minimal cycle generators inside G1 and inside G2, one set per class.
inline const std::vector<std::vector<int>> g1_mcg_classes = {
    {2, 10},
    {2, 40},
    {2, 12, 19},
    {2, 12, 49},
    {2, 42, 79},
};

inline const std::vector<std::vector<int>> g2_mcg_classes = {
    {5, 37},
    {5, 45, 73},
    {5, 13, 30, 46},
    {5, 16, 30, 73},
    {5, 16, 39, 74},
    {5, 9, 46, 64},
    {5, 13, 35, 64},
    {5, 13, 30, 43, 74},
    {5, 15, 30, 52, 73},
    {5, 9, 39, 46, 76},
    {5, 6, 35, 52, 64},
    {5, 15, 35, 46, 66},
    {5, 13, 35, 43, 57, 73},
    {5, 6, 43, 53, 66, 73},
    {5, 13, 36, 53, 66, 73},
    {5, 9, 39, 52, 67, 74},
    {5, 9, 39, 43, 74, 76},
    {5, 13, 30, 43, 47, 64},
    {5, 6, 13, 43, 47, 66},
    {5, 9, 13, 25, 39, 74},
    {5, 9, 13, 30, 47, 64},
    {5, 6, 16, 47, 57, 64},
    {5, 9, 16, 53, 66, 74},
    {5, 9, 13, 39, 53, 74},
    {5, 6, 13, 30, 52, 73},
    {5, 9, 15, 43, 60, 74},
    {5, 13, 35, 45, 66, 74},
    {5, 9, 13, 30, 52, 64, 74},
    {5, 9, 13, 47, 52, 57, 64},
    {5, 6, 16, 36, 53, 66, 73},
    {5, 9, 16, 39, 47, 69, 76},
    {5, 6, 13, 35, 43, 66, 73},
    {5, 6, 16, 35, 39, 47, 76},
    {5, 9, 13, 30, 52, 56, 64},
    {5, 6, 16, 35, 36, 57, 73},
    {5, 9, 15, 22, 46, 56, 66},
    {5, 15, 25, 35, 45, 64, 74},
    {5, 9, 13, 26, 35, 43, 57, 74},
    {5, 9, 13, 35, 39, 52, 74, 76},
    {5, 9, 13, 45, 47, 52, 56, 64},
};

// Maximal non-cycle generators with 36 tiles, one set per class.
inline const std::vector<std::vector<int>> mncg36_classes = {
    {2, 3, 4, 5, 6, 7, 8, 9, 12, 13, 14, 15, 16, 17, 18, 22, 23, 24, 25, 26, 27, 32, 33, 34, 35, 36, 42, 43, 44, 45, 52, 53, 54, 62, 63, 72},
    {2, 3, 4, 5, 6, 7, 8, 9, 12, 13, 14, 15, 16, 17, 18, 22, 23, 24, 25, 26, 27, 32, 33, 34, 35, 36, 42, 43, 44, 45, 53, 54, 60, 62, 63, 72},
    {2, 3, 4, 5, 6, 7, 8, 9, 12, 13, 14, 15, 16, 17, 18, 22, 23, 24, 25, 26, 27, 32, 33, 34, 35, 36, 42, 43, 44, 45, 54, 60, 62, 63, 69, 72},
    {2, 3, 4, 5, 6, 7, 8, 9, 12, 13, 14, 15, 16, 17, 18, 22, 23, 24, 25, 26, 27, 32, 33, 34, 35, 36, 42, 44, 45, 54, 59, 60, 62, 63, 69, 72},
    {2, 3, 4, 5, 6, 7, 8, 9, 12, 13, 14, 15, 16, 17, 18, 22, 23, 24, 26, 27, 32, 33, 35, 36, 42, 45, 57, 58, 59, 60, 62, 63, 68, 69, 72, 78},
    {2, 3, 4, 5, 6, 7, 8, 9, 12, 13, 14, 15, 16, 17, 18, 22, 23, 24, 26, 27, 32, 33, 35, 36, 42, 57, 58, 59, 60, 62, 63, 68, 69, 72, 77, 78},
    {2, 3, 4, 5, 6, 7, 8, 9, 12, 13, 14, 15, 16, 17, 18, 22, 23, 24, 26, 27, 32, 33, 36, 42, 57, 58, 59, 60, 62, 63, 67, 68, 69, 72, 77, 78},
    {2, 3, 4, 5, 6, 7, 8, 9, 12, 13, 14, 15, 16, 17, 18, 22, 23, 24, 27, 32, 33, 36, 42, 45, 57, 58, 59, 60, 62, 63, 66, 67, 68, 69, 72, 78},
};

struct SizeRow {
  int k;
  std::uint64_t members, classes;
};

// Minimal cycle generators of the whole 81-tile universe, by size (descending as printed).
inline const std::vector<SizeRow> mcg_by_size = {
    {9, 84600, 301},
    {8, 305388, 1094},
    {7, 264384, 952},
    {6, 105012, 406},
    {5, 21060, 102},
    {4, 3672, 29},
    {3, 528, 8},
    {2, 72, 3},
    {1, 9, 1},
    {36, 1296, 8},
};

// Maximal non-cycle generators of the whole universe, by size.
inline const std::vector<SizeRow> mncg_by_size = {
    {34, 720, 3},
    {32, 1152, 4},
    {31, 3168, 11},
    {30, 576, 2},
    {29, 288, 1},
    {28, 3168, 12},
    {27, 3456, 12},
    {26, 6048, 21},
    {25, 5760, 20},
    {24, 5184, 18},
    {23, 6624, 23},
    {22, 8640, 30},
    {21, 12672, 44},
    {20, 20160, 70},
    {19, 35280, 123},
    {18, 50256, 175},
    {17, 90000, 313},
    {16, 93024, 324},
    {15, 108720, 379},
    {14, 120384, 422},
    {13, 148536, 522},
    {12, 163512, 576},
    {11, 157536, 556},
    {10, 186480, 657},
    {9, 133200, 483},
    {8, 42624, 156},
    {7, 2160, 9},
};

// Two colors: minimal cycle generators and maximal non-cycle generators.
inline constexpr std::uint64_t two_color_mcg_count = 38;
inline constexpr std::uint64_t two_color_mncg_count = 9;

// Search-space sizes as printed, six significant figures.
inline constexpr double search_space_i = 1.35075e12;
inline constexpr double search_space_i_prime = 1.38458e12;

// Strip widths at which the two extremal sets first show their behavior.
inline const std::vector<int> slow_empty_set = {2, 4, 5, 6, 9, 13, 14, 16, 18, 27, 32, 39, 60, 67, 78, 79};
inline constexpr int slow_empty_width = 13;
inline const std::vector<int> slow_periodic_set = {2, 5, 13, 36, 53, 60, 62, 64, 77};
inline constexpr int slow_periodic_width = 35;

}  // namespace tessella::reference_tables
