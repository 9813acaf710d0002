#include "qmcar/nets.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <sstream>
#include <string>

#include "qmcar/errors.hpp"

namespace qmcar {

const DirectionNumberRecord& DirectionNumberTable::record(unsigned dimension) const {
    if (dimension < 2 || dimension > max_dimension)
        throw DimensionError("no direction-number record for dimension " + std::to_string(dimension));
    return entries[dimension - 2];
}

namespace {

bool blank_or_comment(const std::string& line) {
    for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c))) return c == '#';
    return true;
}

bool starts_with_digit(const std::string& line) {
    for (char c : line) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return std::isdigit(static_cast<unsigned char>(c)) != 0;
    }
    return false;
}

}  // namespace

DirectionNumberTable load_direction_numbers(std::istream& in) {
    DirectionNumberTable table;
    std::string line;
    std::size_t line_no = 0;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank_or_comment(line)) continue;
        if (first_content_line && !starts_with_digit(line)) {
            first_content_line = false; // header line, e.g. "d s a m_i"
            continue;
        }
        first_content_line = false;

        std::istringstream fields(line);
        long long d = 0, deg = 0, a = 0;
        if (!(fields >> d >> deg >> a) || d < 2 || deg < 1 || a < 0)
            throw ParseError("direction numbers: malformed line " + std::to_string(line_no));

        DirectionNumberRecord rec;
        rec.dimension = static_cast<unsigned>(d);
        rec.degree = static_cast<unsigned>(deg);
        rec.poly = static_cast<std::uint32_t>(a);
        for (long long i = 0; i < deg; ++i) {
            long long mi = 0;
            if (!(fields >> mi))
                throw ParseError("direction numbers: malformed line " + std::to_string(line_no) +
                                 " (expected " + std::to_string(deg) + " initial values)");
            rec.initial.push_back(static_cast<std::uint32_t>(mi));
        }
        long long extra;
        if (fields >> extra)
            throw ParseError("direction numbers: malformed line " + std::to_string(line_no) +
                             " (trailing fields)");

        if (rec.degree > 32)
            throw ValidationError("dimension " + std::to_string(rec.dimension) + ": degree too large");
        if (rec.degree >= 1 && rec.poly >= (1u << (rec.degree - 1)) && rec.degree > 1)
            throw ValidationError("dimension " + std::to_string(rec.dimension) +
                                  ": polynomial coefficient out of range");
        if (rec.degree == 1 && rec.poly != 0)
            throw ValidationError("dimension " + std::to_string(rec.dimension) +
                                  ": polynomial coefficient out of range");
        for (unsigned i = 0; i < rec.degree; ++i) {
            std::uint32_t mi = rec.initial[i];
            if (mi % 2 == 0)
                throw ValidationError("dimension " + std::to_string(rec.dimension) + ": m_" +
                                      std::to_string(i + 1) + " is even");
            if (mi >= (1u << (i + 1)))
                throw ValidationError("dimension " + std::to_string(rec.dimension) + ": m_" +
                                      std::to_string(i + 1) + " >= 2^" + std::to_string(i + 1));
        }
        if (!table.entries.empty() && rec.dimension != table.entries.back().dimension + 1)
            throw ValidationError("dimensions must be contiguous; got " +
                                  std::to_string(rec.dimension) + " after " +
                                  std::to_string(table.entries.back().dimension));
        if (table.entries.empty() && rec.dimension != 2)
            throw ValidationError("first record must be dimension 2, got " +
                                  std::to_string(rec.dimension));
        table.entries.push_back(std::move(rec));
    }
    table.max_dimension = table.entries.empty() ? 1 : table.entries.back().dimension;
    return table;
}

namespace {

std::array<std::uint64_t, kCoordBits> sobol_columns_for_dimension(
    unsigned dim, const DirectionNumberTable& table) {
    std::array<std::uint64_t, kCoordBits> v{};
    if (dim == 1) {
        for (unsigned k = 0; k < kCoordBits; ++k) v[k] = 1ull << (kCoordBits - 1 - k);
        return v;
    }
    const DirectionNumberRecord& rec = table.record(dim);
    const unsigned g = rec.degree;
    for (unsigned k = 0; k < g && k < kCoordBits; ++k)
        v[k] = static_cast<std::uint64_t>(rec.initial[k]) << (kCoordBits - 1 - k);
    for (unsigned k = g; k < kCoordBits; ++k) {
        v[k] = v[k - g] ^ (v[k - g] >> g);
        for (unsigned j = 1; j < g; ++j)
            if ((rec.poly >> (g - 1 - j)) & 1u) v[k] ^= v[k - j];
    }
    return v;
}

}  // namespace

NetPoints::NetPoints(unsigned dimension, std::vector<std::uint64_t> raw)
    : dimension_(dimension), raw_(std::move(raw)) {
    if (dimension_ == 0 || raw_.size() % dimension_ != 0)
        throw ValidationError("NetPoints: raw size is not a multiple of the dimension");
}

double NetPoints::coord(std::size_t n, unsigned j) const {
    return std::ldexp(static_cast<double>(raw_[n * dimension_ + j]), -64);
}

std::span<const std::uint64_t> NetPoints::raw_row(std::size_t n) const {
    return {raw_.data() + n * dimension_, dimension_};
}

std::vector<double> NetPoints::to_doubles() const {
    std::vector<double> out(raw_.size());
    for (std::size_t i = 0; i < raw_.size(); ++i)
        out[i] = std::ldexp(static_cast<double>(raw_[i]), -64);
    return out;
}

DigitalNet DigitalNet::sobol(unsigned m, unsigned s, const DirectionNumberTable& table) {
    if (s == 0) throw DimensionError("net dimension must be >= 1");
    if (s > table.max_dimension && s != 1)
        throw DimensionError("direction-number table covers dimensions up to " +
                             std::to_string(table.max_dimension) + ", requested " +
                             std::to_string(s));
    if (m > 48) throw ValidationError("net resolution m too large");
    DigitalNet net;
    net.m = m;
    net.s = s;
    net.generating_columns.reserve(s);
    for (unsigned d = 1; d <= s; ++d)
        net.generating_columns.push_back(sobol_columns_for_dimension(d, table));
    return net;
}

NetPoints DigitalNet::points() const {
    const std::size_t count = std::size_t{1} << m;
    std::vector<std::uint64_t> raw(count * s, 0);
    std::vector<std::uint64_t> state(s, 0);
    for (std::size_t n = 0; n < count; ++n) {
        std::copy(state.begin(), state.end(), raw.begin() + static_cast<std::ptrdiff_t>(n * s));
        std::uint64_t flips = n ^ (n + 1);
        for (unsigned k = 0; flips; ++k, flips >>= 1)
            if (flips & 1)
                for (unsigned j = 0; j < s; ++j) state[j] ^= generating_columns[j][k];
    }
    return NetPoints(s, std::move(raw));
}

SobolStream::SobolStream(unsigned s, const DirectionNumberTable& table) {
    if (s == 0) throw DimensionError("net dimension must be >= 1");
    if (s > table.max_dimension && s != 1)
        throw DimensionError("direction-number table covers dimensions up to " +
                             std::to_string(table.max_dimension) + ", requested " +
                             std::to_string(s));
    columns_.reserve(s);
    for (unsigned d = 1; d <= s; ++d) columns_.push_back(sobol_columns_for_dimension(d, table));
    state_.assign(s, 0);
}

void SobolStream::reset() {
    std::fill(state_.begin(), state_.end(), 0);
    index_ = 0;
}

void SobolStream::next(std::span<double> out) {
    const unsigned s = dimension();
    for (unsigned j = 0; j < s; ++j)
        out[j] = std::ldexp(static_cast<double>(state_[j]), -64);
    std::uint64_t flips = index_ ^ (index_ + 1);
    for (unsigned k = 0; flips; ++k, flips >>= 1)
        if (flips & 1)
            for (unsigned j = 0; j < s; ++j) state_[j] ^= columns_[j][k];
    ++index_;
}

NetPoints sobol_points(unsigned m, unsigned s, const DirectionNumberTable& table) {
    return DigitalNet::sobol(m, s, table).points();
}

NetPoints sobol_prefix(std::size_t count, unsigned s, const DirectionNumberTable& table) {
    if (count == 0) throw ValidationError("prefix length must be >= 1");
    SobolStream stream(s, table);
    std::vector<std::uint64_t> raw;
    raw.reserve(count * s);
    std::vector<double> scratch(s);
    for (std::size_t n = 0; n < count; ++n) {
        auto row = stream.peek_raw();
        raw.insert(raw.end(), row.begin(), row.end());
        stream.next(scratch);
    }
    return NetPoints(s, std::move(raw));
}

unsigned ElementaryInterval::order() const {
    unsigned k = 0;
    for (unsigned d : log2_width) k += d;
    return k;
}

double ElementaryInterval::volume() const { return std::ldexp(1.0, -static_cast<int>(order())); }

std::int64_t count_in_interval(const NetPoints& points, const ElementaryInterval& interval) {
    const unsigned s = points.dimension();
    if (interval.log2_width.size() != s || interval.offset.size() != s)
        throw DimensionError("elementary interval dimension does not match the point set");
    for (unsigned j = 0; j < s; ++j) {
        if (interval.log2_width[j] >= kCoordBits)
            throw ValidationError("interval too fine for 64-bit coordinates");
        if (interval.offset[j] >> interval.log2_width[j] != 0 && interval.log2_width[j] > 0)
            throw ValidationError("interval offset out of range");
        if (interval.log2_width[j] == 0 && interval.offset[j] != 0)
            throw ValidationError("interval offset out of range");
    }
    std::int64_t count = 0;
    const std::size_t n_points = points.count();
    for (std::size_t n = 0; n < n_points; ++n) {
        bool inside = true;
        for (unsigned j = 0; j < s; ++j) {
            unsigned d = interval.log2_width[j];
            std::uint64_t cell = d == 0 ? 0 : points.raw(n, j) >> (kCoordBits - d);
            if (cell != interval.offset[j]) {
                inside = false;
                break;
            }
        }
        if (inside) ++count;
    }
    return count;
}

namespace {

// Visits every composition of k into s non-negative parts; stops early when
// the visitor returns false.
template <typename Visit>
bool for_each_shape(unsigned k, unsigned s, std::vector<unsigned>& shape, unsigned pos, Visit&& visit) {
    if (pos + 1 == s) {
        shape[pos] = k;
        return visit(shape);
    }
    for (unsigned d = 0; d <= k; ++d) {
        shape[pos] = d;
        if (!for_each_shape(k - d, s, shape, pos + 1, visit)) return false;
    }
    return true;
}

}  // namespace

bool is_fair_at_order(const NetPoints& points, unsigned m, unsigned k) {
    const unsigned s = points.dimension();
    const std::size_t n_points = points.count();
    if (n_points != (std::size_t{1} << m))
        throw ValidationError("point count is not 2^m");
    if (k > m) return false; // intervals smaller than 1/2^m cannot all hold an exact share
    const std::uint32_t expected = static_cast<std::uint32_t>(n_points >> k);
    std::vector<std::uint32_t> buckets;
    std::vector<unsigned> shape(s, 0);
    return for_each_shape(k, s, shape, 0, [&](const std::vector<unsigned>& d) {
        buckets.assign(std::size_t{1} << k, 0);
        for (std::size_t n = 0; n < n_points; ++n) {
            std::uint64_t idx = 0;
            for (unsigned j = 0; j < s; ++j)
                idx = (idx << d[j]) | (d[j] ? points.raw(n, j) >> (kCoordBits - d[j]) : 0);
            ++buckets[idx];
        }
        for (std::uint32_t c : buckets)
            if (c != expected) return false;
        return true;
    });
}

unsigned audit_t_value(const NetPoints& points, unsigned m, unsigned s, unsigned k_max) {
    if (points.dimension() != s)
        throw DimensionError("audit: point set dimension does not match s");
    if (points.count() != (std::size_t{1} << m))
        throw ValidationError("audit: point count is not 2^m");
    // Fairness at order k implies fairness at every order below it, so the
    // first fair k scanning downward pins the t value.
    for (unsigned k = std::min(k_max, m); k > 0; --k)
        if (is_fair_at_order(points, m, k)) return m - k;
    return m; // order 0 is always fair
}

}  // namespace qmcar
