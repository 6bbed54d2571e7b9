#include "spacdc/datasets.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "spacdc/errors.hpp"
#include "spacdc/rng.hpp"

namespace spacdc {

Dataset make_blobs(std::size_t samples, std::uint64_t seed, double separation) {
    if (samples == 0) throw std::invalid_argument("make_blobs: need samples > 0");
    if (separation <= 0.0) throw std::invalid_argument("make_blobs: separation must be > 0");
    auto rng = make_rng(seed, "blobs");
    Dataset data;
    data.x = RealMatrix(2, samples);
    data.y = RealMatrix(1, samples);
    // Features stay O(1): centers at +-0.5 on the diagonal, noise scaled so
    // the center distance is `separation` standard deviations.
    const double sigma = std::sqrt(2.0) / separation;
    for (std::size_t c = 0; c < samples; ++c) {
        const bool positive = uniform_unit(rng) < 0.5;
        const double center = positive ? 0.5 : -0.5;
        data.x(0, c) = center + sigma * normal_unit(rng);
        data.x(1, c) = center + sigma * normal_unit(rng);
        data.y(0, c) = positive ? 1.0 : 0.0;
    }
    return data;
}

namespace {

// 8x8 glyphs, one string per digit, '#' = ink.
constexpr std::array<const char*, 10> kGlyphs = {
    ".####..."
    "#....#.."
    "#...##.."
    "#..#.#.."
    "#.#..#.."
    "##...#.."
    ".####..."
    "........",  // 0
    "...#...."
    "..##...."
    ".#.#...."
    "...#...."
    "...#...."
    "...#...."
    ".#####.."
    "........",  // 1
    ".####..."
    "#....#.."
    ".....#.."
    "....#..."
    "..##...."
    ".#......"
    "######.."
    "........",  // 2
    ".####..."
    "#....#.."
    "....##.."
    "..###..."
    ".....#.."
    "#....#.."
    ".####..."
    "........",  // 3
    "...##..."
    "..#.#..."
    ".#..#..."
    "#...#..."
    "######.."
    "....#..."
    "....#..."
    "........",  // 4
    "######.."
    "#......."
    "#####..."
    ".....#.."
    ".....#.."
    "#....#.."
    ".####..."
    "........",  // 5
    ".####..."
    "#......."
    "#......."
    "#####..."
    "#....#.."
    "#....#.."
    ".####..."
    "........",  // 6
    "######.."
    ".....#.."
    "....#..."
    "...#...."
    "..#....."
    "..#....."
    "..#....."
    "........",  // 7
    ".####..."
    "#....#.."
    "#....#.."
    ".####..."
    "#....#.."
    "#....#.."
    ".####..."
    "........",  // 8
    ".####..."
    "#....#.."
    "#....#.."
    ".#####.."
    ".....#.."
    ".....#.."
    ".####..."
    "........",  // 9
};

}  // namespace

Dataset make_digits1k(std::uint64_t seed) {
    constexpr std::size_t kPerClass = 100;
    constexpr std::size_t kPixels = 64;
    auto rng = make_rng(seed, "digits1k");
    Dataset data;
    data.x = RealMatrix(kPixels, 10 * kPerClass);
    data.y = RealMatrix(10, 10 * kPerClass);
    std::size_t col = 0;
    for (std::size_t digit = 0; digit < 10; ++digit) {
        const char* glyph = kGlyphs[digit];
        for (std::size_t rep = 0; rep < kPerClass; ++rep, ++col) {
            for (std::size_t p = 0; p < kPixels; ++p) {
                const double ink = glyph[p] == '#' ? 1.0 : 0.0;
                const double noisy = ink + 0.15 * normal_unit(rng);
                data.x(p, col) = std::clamp(noisy, 0.0, 1.0);
            }
            data.y(digit, col) = 1.0;
        }
    }
    return data;
}

Dataset load_labeled_matrix(const std::string& path) {
    const RealMatrix raw = load_matrix(path);
    if (raw.rows() < 2) {
        throw IoError("dataset " + path + ": need at least one feature row plus labels");
    }
    const std::size_t d = raw.rows() - 1;
    std::size_t classes = 0;
    for (std::size_t c = 0; c < raw.cols(); ++c) {
        const double label = raw(d, c);
        if (label < 0 || label != std::floor(label)) {
            throw IoError("dataset " + path + ": labels must be nonnegative integers");
        }
        classes = std::max(classes, static_cast<std::size_t>(label) + 1);
    }
    Dataset data;
    data.x = RealMatrix(d, raw.cols());
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < raw.cols(); ++c) data.x(r, c) = raw(r, c);
    data.y = RealMatrix(classes <= 2 ? 1 : classes, raw.cols());
    for (std::size_t c = 0; c < raw.cols(); ++c) {
        const auto label = static_cast<std::size_t>(raw(d, c));
        if (classes <= 2) {
            data.y(0, c) = static_cast<double>(label);
        } else {
            data.y(label, c) = 1.0;
        }
    }
    return data;
}

Dataset load_dataset(const std::string& name, std::size_t samples, std::uint64_t seed) {
    if (name == "blobs") return make_blobs(samples, seed);
    if (name == "digits1k") return make_digits1k();
    return load_labeled_matrix(name);
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& data, double test_fraction,
                                          std::uint64_t seed) {
    if (test_fraction < 0.0 || test_fraction >= 1.0) {
        throw std::invalid_argument("split_dataset: fraction must be in [0, 1)");
    }
    const std::size_t m = data.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto rng = make_rng(seed, "split");
    for (std::size_t i = m; i-- > 1;) {
        const auto j = static_cast<std::size_t>(uniform_unit(rng) * static_cast<double>(i + 1));
        std::swap(order[i], order[std::min(j, i)]);
    }
    std::size_t test_count = static_cast<std::size_t>(test_fraction * static_cast<double>(m));
    if (test_fraction > 0.0 && test_count == 0 && m > 1) test_count = 1;
    const std::size_t train_count = m - test_count;

    auto build = [&](std::size_t begin, std::size_t end) {
        Dataset out;
        out.x = RealMatrix(data.x.rows(), end - begin);
        out.y = RealMatrix(data.y.rows(), end - begin);
        for (std::size_t c = begin; c < end; ++c) {
            for (std::size_t r = 0; r < data.x.rows(); ++r)
                out.x(r, c - begin) = data.x(r, order[c]);
            for (std::size_t r = 0; r < data.y.rows(); ++r)
                out.y(r, c - begin) = data.y(r, order[c]);
        }
        return out;
    };
    return {build(0, train_count), build(train_count, m)};
}

}  // namespace spacdc
