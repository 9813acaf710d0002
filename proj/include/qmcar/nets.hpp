#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace qmcar {

// Coordinates are dyadic fractions: a 64-bit numerator over 2^64. Conversion
// to double is exact for every point of a net with m <= 53.
inline constexpr unsigned kCoordBits = 64;

struct DirectionNumberRecord {
    unsigned dimension = 0;             // d >= 2
    unsigned degree = 0;                // s_d, degree of the primitive polynomial
    std::uint32_t poly = 0;             // a_d, encoded inner coefficients
    std::vector<std::uint32_t> initial; // m_1..m_{s_d}, each odd and m_i < 2^i
};

struct DirectionNumberTable {
    std::vector<DirectionNumberRecord> entries; // ascending, contiguous from dimension 2
    unsigned max_dimension = 1;                 // dimension 1 needs no record (van der Corput)

    const DirectionNumberRecord& record(unsigned dimension) const;
};

// Parses the Joe-Kuo text layout: whitespace-separated lines "d s a m_1 ... m_s"
// with an optional header line starting with a non-digit.
DirectionNumberTable load_direction_numbers(std::istream& in);

// The table bundled with the library (Joe-Kuo D6 values, dimensions 1..21).
const DirectionNumberTable& builtin_direction_table();

// A batch of exact dyadic points in [0,1)^dimension, row-major.
class NetPoints {
public:
    NetPoints() = default;
    NetPoints(unsigned dimension, std::vector<std::uint64_t> raw);

    unsigned dimension() const { return dimension_; }
    std::size_t count() const { return dimension_ ? raw_.size() / dimension_ : 0; }
    std::uint64_t raw(std::size_t n, unsigned j) const { return raw_[n * dimension_ + j]; }
    double coord(std::size_t n, unsigned j) const;
    std::span<const std::uint64_t> raw_row(std::size_t n) const;
    const std::vector<std::uint64_t>& raw_data() const { return raw_; }
    std::vector<double> to_doubles() const;

private:
    unsigned dimension_ = 0;
    std::vector<std::uint64_t> raw_;
};

// Base-2 digital net described by its generating-matrix columns. Column k of
// dimension j is the direction integer applied when bit k of the point index
// is set.
struct DigitalNet {
    unsigned base = 2;
    unsigned m = 0;
    unsigned s = 0;
    std::vector<std::array<std::uint64_t, kCoordBits>> generating_columns;

    static DigitalNet sobol(unsigned m, unsigned s, const DirectionNumberTable& table);
    NetPoints points() const; // the 2^m points in generation order; point 0 is the origin
};

// Incremental generator of the same sequence in natural index order, so any
// prefix can be consumed without fixing the length in advance.
class SobolStream {
public:
    SobolStream(unsigned s, const DirectionNumberTable& table);

    unsigned dimension() const { return static_cast<unsigned>(columns_.size()); }
    std::uint64_t index() const { return index_; } // points emitted so far
    void reset();
    // Writes the next point and advances. out.size() must equal dimension().
    void next(std::span<double> out);
    std::span<const std::uint64_t> peek_raw() const { return state_; }

private:
    std::vector<std::array<std::uint64_t, kCoordBits>> columns_;
    std::vector<std::uint64_t> state_;
    std::uint64_t index_ = 0;
};

NetPoints sobol_points(unsigned m, unsigned s, const DirectionNumberTable& table);
NetPoints sobol_prefix(std::size_t count, unsigned s, const DirectionNumberTable& table);

// Axis-aligned dyadic box prod_j [a_j 2^-d_j, (a_j+1) 2^-d_j).
struct ElementaryInterval {
    std::vector<unsigned> log2_width;   // d_j
    std::vector<std::uint64_t> offset;  // a_j < 2^{d_j}

    unsigned order() const;
    double volume() const; // 2^-order
};

std::int64_t count_in_interval(const NetPoints& points, const ElementaryInterval& interval);

// True when every elementary interval of order exactly k holds its exact
// share (count / 2^m == 2^-k) of the 2^m points. Fairness at order k implies
// fairness at every smaller order.
bool is_fair_at_order(const NetPoints& points, unsigned m, unsigned k);

// Smallest t such that all elementary intervals of order <= m - t are fair.
// k_max caps the exhaustive search, so the result never exceeds m - min(k_max, m)
// from below: it returns max(true t, m - k_max).
unsigned audit_t_value(const NetPoints& points, unsigned m, unsigned s, unsigned k_max);

}  // namespace qmcar
