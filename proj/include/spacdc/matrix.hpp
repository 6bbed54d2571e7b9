#ifndef SPACDC_MATRIX_HPP
#define SPACDC_MATRIX_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace spacdc {

/// Dense row-major matrix of doubles. Values are immutable by convention
/// once built: every operation returns a fresh matrix, so instances can be
/// shared freely across worker threads.
class RealMatrix {
public:
    RealMatrix() = default;
    RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    double operator()(std::size_t r, std::size_t c) const {
        return entries_[r * cols_ + c];
    }
    double& operator()(std::size_t r, std::size_t c) {
        return entries_[r * cols_ + c];
    }

    const std::vector<double>& entries() const { return entries_; }
    std::vector<double>& entries() { return entries_; }

    bool same_shape(const RealMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }
    std::string shape_str() const;  // e.g. "3x4"

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> entries_;
};

bool operator==(const RealMatrix& a, const RealMatrix& b);
inline bool operator!=(const RealMatrix& a, const RealMatrix& b) { return !(a == b); }

RealMatrix matmul(const RealMatrix& a, const RealMatrix& b);
RealMatrix transpose(const RealMatrix& a);
RealMatrix add(const RealMatrix& a, const RealMatrix& b);
RealMatrix sub(const RealMatrix& a, const RealMatrix& b);
RealMatrix scale(const RealMatrix& a, double factor);
RealMatrix hadamard(const RealMatrix& a, const RealMatrix& b);
RealMatrix identity_matrix(std::size_t n);

/// Splits x into k row blocks of ceil(rows/k) rows each. When rows is not a
/// multiple of k the tail is padded with zero rows, so stacking the blocks
/// and truncating back to rows() reproduces x.
std::vector<RealMatrix> partition_rows(const RealMatrix& x, std::size_t k);
RealMatrix vstack(const std::vector<RealMatrix>& blocks);
RealMatrix take_rows(const RealMatrix& a, std::size_t n);

double inf_norm(const RealMatrix& a);
double frobenius_norm(const RealMatrix& a);
double max_abs_diff(const RealMatrix& a, const RealMatrix& b);
/// Frobenius error of got vs want, relative to ||want||; absolute when
/// want is (numerically) zero.
double rel_error(const RealMatrix& got, const RealMatrix& want);

RealMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                         double scale = 1.0);

/// Fixed-point integer view of a matrix: entry_int = round(entry * 2^scale_bits).
/// This is the form that crosses the encrypted wire; the additive cipher is
/// exact on it.
struct QuantizedMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    int scale_bits = 0;
    std::vector<std::int64_t> entries;
};

bool operator==(const QuantizedMatrix& a, const QuantizedMatrix& b);
inline bool operator!=(const QuantizedMatrix& a, const QuantizedMatrix& b) {
    return !(a == b);
}

QuantizedMatrix quantize(const RealMatrix& m, int scale_bits);
RealMatrix dequantize(const QuantizedMatrix& q);

// Text file format used by the CLI fixtures: a header line "rows cols",
// then one whitespace-separated row of decimal reals per line.
void write_matrix(std::ostream& out, const RealMatrix& m);
RealMatrix read_matrix(std::istream& in, const std::string& origin = "<stream>");
void save_matrix(const std::string& path, const RealMatrix& m);
RealMatrix load_matrix(const std::string& path);

}  // namespace spacdc

#endif
