#include <sstream>

#include "qmcar/nets.hpp"

namespace qmcar {

namespace {

// Joe-Kuo D6 direction numbers for dimensions 2..21, same layout as
// data/joe-kuo-d6.txt. Dimension 1 is the van der Corput identity matrix and
// needs no record.
constexpr const char* kBuiltinTable = R"(d       s       a       m_i
2       1       0       1
3       2       1       1 3
4       3       1       1 3 1
5       3       2       1 1 1
6       4       1       1 1 3 3
7       4       4       1 3 5 13
8       5       2       1 1 5 5 17
9       5       4       1 1 5 5 5
10      5       7       1 1 7 11 19
11      5       11      1 1 5 1 1
12      5       13      1 1 1 3 11
13      5       14      1 3 5 5 31
14      6       1       1 3 3 9 7 49
15      6       13      1 1 1 15 21 21
16      6       16      1 3 1 13 27 49
17      6       19      1 1 1 15 7 5
18      6       22      1 3 1 15 13 25
19      6       25      1 1 5 5 19 61
20      7       1       1 3 7 11 23 15 103
21      7       4       1 3 7 13 13 15 69
)";

}  // namespace

const DirectionNumberTable& builtin_direction_table() {
    static const DirectionNumberTable table = [] {
        std::istringstream in(kBuiltinTable);
        return load_direction_numbers(in);
    }();
    return table;
}

}  // namespace qmcar
