#ifndef SPACDC_DATASETS_HPP
#define SPACDC_DATASETS_HPP

#include <cstdint>
#include <string>

#include "spacdc/dl.hpp"

namespace spacdc {

/// Two Gaussian clusters in the plane, one output row with 0/1 labels.
/// Centers sit at +-separation/2 along the diagonal, unit noise.
Dataset make_blobs(std::size_t samples, std::uint64_t seed, double separation = 6.0);

/// 1,000 8x8 digit glyphs (100 per class) rendered from fixed templates with
/// pixel noise; 64 feature rows, 10 one-hot label rows. Deterministic.
Dataset make_digits1k(std::uint64_t seed = 9);

/// Loads a matrix file whose last row holds integer class labels; the other
/// rows are features. Labels become one output row for two classes, one-hot
/// rows otherwise.
Dataset load_labeled_matrix(const std::string& path);

/// "blobs" | "digits1k" | path to a labeled matrix file.
Dataset load_dataset(const std::string& name, std::size_t samples, std::uint64_t seed);

/// Deterministic train/test split; test_fraction of the columns (rounded
/// down, at least one when possible) go to the second set.
std::pair<Dataset, Dataset> split_dataset(const Dataset& data, double test_fraction,
                                          std::uint64_t seed);

}  // namespace spacdc

#endif
