#include "spacdc/matrix.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "spacdc/errors.hpp"
#include "spacdc/rng.hpp"

namespace spacdc {

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), entries_(rows * cols, fill) {}

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
        throw std::invalid_argument("RealMatrix: " + std::to_string(entries_.size()) +
                                    " entries for shape " + shape_str());
    }
}

std::string RealMatrix::shape_str() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
}

bool operator==(const RealMatrix& a, const RealMatrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a.entries() == b.entries();
}

namespace {

[[noreturn]] void shape_mismatch(const char* op, const RealMatrix& a, const RealMatrix& b) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                a.shape_str() + " vs " + b.shape_str() + ")");
}

}  // namespace

RealMatrix matmul(const RealMatrix& a, const RealMatrix& b) {
    if (a.cols() != b.rows()) shape_mismatch("matmul", a, b);
    RealMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

RealMatrix transpose(const RealMatrix& a) {
    RealMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

RealMatrix add(const RealMatrix& a, const RealMatrix& b) {
    if (!a.same_shape(b)) shape_mismatch("add", a, b);
    RealMatrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.entries()[i] += b.entries()[i];
    return out;
}

RealMatrix sub(const RealMatrix& a, const RealMatrix& b) {
    if (!a.same_shape(b)) shape_mismatch("sub", a, b);
    RealMatrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.entries()[i] -= b.entries()[i];
    return out;
}

RealMatrix scale(const RealMatrix& a, double factor) {
    RealMatrix out = a;
    for (double& e : out.entries()) e *= factor;
    return out;
}

RealMatrix hadamard(const RealMatrix& a, const RealMatrix& b) {
    if (!a.same_shape(b)) shape_mismatch("hadamard", a, b);
    RealMatrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.entries()[i] *= b.entries()[i];
    return out;
}

RealMatrix identity_matrix(std::size_t n) {
    RealMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
    return out;
}

std::vector<RealMatrix> partition_rows(const RealMatrix& x, std::size_t k) {
    if (k == 0) throw std::invalid_argument("partition_rows: k must be >= 1");
    const std::size_t block_rows = (x.rows() + k - 1) / k;
    std::vector<RealMatrix> blocks;
    blocks.reserve(k);
    for (std::size_t b = 0; b < k; ++b) {
        RealMatrix block(block_rows, x.cols());
        for (std::size_t r = 0; r < block_rows; ++r) {
            const std::size_t src = b * block_rows + r;
            if (src >= x.rows()) break;  // zero padding stays
            for (std::size_t c = 0; c < x.cols(); ++c) block(r, c) = x(src, c);
        }
        blocks.push_back(std::move(block));
    }
    return blocks;
}

RealMatrix vstack(const std::vector<RealMatrix>& blocks) {
    if (blocks.empty()) return {};
    const std::size_t cols = blocks.front().cols();
    std::size_t rows = 0;
    for (const auto& b : blocks) {
        if (b.cols() != cols) shape_mismatch("vstack", blocks.front(), b);
        rows += b.rows();
    }
    RealMatrix out(rows, cols);
    std::size_t at = 0;
    for (const auto& b : blocks) {
        for (std::size_t r = 0; r < b.rows(); ++r, ++at)
            for (std::size_t c = 0; c < cols; ++c) out(at, c) = b(r, c);
    }
    return out;
}

RealMatrix take_rows(const RealMatrix& a, std::size_t n) {
    if (n > a.rows()) {
        throw std::invalid_argument("take_rows: want " + std::to_string(n) +
                                    " rows from " + a.shape_str());
    }
    RealMatrix out(n, a.cols());
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a(r, c);
    return out;
}

double inf_norm(const RealMatrix& a) {
    double m = 0.0;
    for (double e : a.entries()) m = std::max(m, std::abs(e));
    return m;
}

double frobenius_norm(const RealMatrix& a) {
    double s = 0.0;
    for (double e : a.entries()) s += e * e;
    return std::sqrt(s);
}

double max_abs_diff(const RealMatrix& a, const RealMatrix& b) {
    if (!a.same_shape(b)) shape_mismatch("max_abs_diff", a, b);
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
    return m;
}

double rel_error(const RealMatrix& got, const RealMatrix& want) {
    if (!got.same_shape(want)) shape_mismatch("rel_error", got, want);
    const double denom = frobenius_norm(want);
    const double num = frobenius_norm(sub(got, want));
    return denom > 0.0 ? num / denom : num;
}

RealMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                         double scale) {
    auto rng = make_rng(seed, "random-matrix");
    RealMatrix out(rows, cols);
    for (double& e : out.entries()) e = uniform_symmetric(rng, scale);
    return out;
}

bool operator==(const QuantizedMatrix& a, const QuantizedMatrix& b) {
    return a.rows == b.rows && a.cols == b.cols && a.scale_bits == b.scale_bits &&
           a.entries == b.entries;
}

QuantizedMatrix quantize(const RealMatrix& m, int scale_bits) {
    if (scale_bits < 0) throw std::invalid_argument("quantize: scale_bits must be >= 0");
    // Leave one bit below int64 so downstream arithmetic cannot wrap.
    constexpr double kHeadroom = 4611686018427387904.0;  // 2^62
    QuantizedMatrix q;
    q.rows = m.rows();
    q.cols = m.cols();
    q.scale_bits = scale_bits;
    q.entries.resize(m.size());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const double v = m(r, c);
            const double scaled = std::ldexp(v, scale_bits);
            if (!std::isfinite(scaled) || std::abs(scaled) >= kHeadroom) {
                std::ostringstream msg;
                msg << "quantize: entry (" << r << "," << c << ") = " << v
                    << " overflows at scale_bits=" << scale_bits;
                throw std::range_error(msg.str());
            }
            q.entries[r * m.cols() + c] = std::llround(scaled);
        }
    }
    return q;
}

RealMatrix dequantize(const QuantizedMatrix& q) {
    RealMatrix out(q.rows, q.cols);
    for (std::size_t i = 0; i < q.entries.size(); ++i) {
        out.entries()[i] = std::ldexp(static_cast<double>(q.entries[i]), -q.scale_bits);
    }
    return out;
}

void write_matrix(std::ostream& out, const RealMatrix& m) {
    out << m.rows() << ' ' << m.cols() << '\n';
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) out << ' ';
            out << m(r, c);
        }
        out << '\n';
    }
}

RealMatrix read_matrix(std::istream& in, const std::string& origin) {
    // Leading '#' comment lines (emitted run headers) are skipped.
    std::string header;
    while (std::getline(in, header)) {
        const auto first = header.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (header[first] == '#') continue;
        break;
    }
    std::size_t rows = 0, cols = 0;
    std::istringstream header_in(header);
    if (!(header_in >> rows >> cols)) {
        throw IoError("matrix " + origin + ": missing 'rows cols' header");
    }
    constexpr std::size_t kMaxEntries = 100000000;  // 800 MB of doubles
    if (rows > kMaxEntries || cols > kMaxEntries || (cols != 0 && rows > kMaxEntries / cols)) {
        throw IoError("matrix " + origin + ": implausible dimensions " +
                      std::to_string(rows) + "x" + std::to_string(cols));
    }
    RealMatrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!(in >> m.entries()[i])) {
            throw IoError("matrix " + origin + ": expected " + std::to_string(m.size()) +
                          " entries, failed at entry " + std::to_string(i));
        }
    }
    for (double e : m.entries()) {
        if (!std::isfinite(e)) throw IoError("matrix " + origin + ": non-finite entry");
    }
    return m;
}

void save_matrix(const std::string& path, const RealMatrix& m) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    write_matrix(out, m);
    if (!out) throw IoError("write failed: " + path);
}

RealMatrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    return read_matrix(in, path);
}

}  // namespace spacdc
