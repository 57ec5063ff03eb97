#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "smatch/geometry.hpp"

namespace smatch {
namespace io {

// Activation files come in two interchangeable formats:
//  - CSV: one neuron per row, '#' comment lines, no header.
//  - binary: magic "SMAT", u32 version = 1, u64 rows, u64 cols, then
//    rows*cols little-endian IEEE-754 doubles, row-major.
// Loading sniffs the magic; saving picks CSV for *.csv, binary otherwise.

ActivationMatrix load_csv(const std::filesystem::path& path, const NumericPolicy& policy = {});
void save_csv(const ActivationMatrix& matrix, const std::filesystem::path& path);

ActivationMatrix load_binary(const std::filesystem::path& path, const NumericPolicy& policy = {});
void save_binary(const ActivationMatrix& matrix, const std::filesystem::path& path);

ActivationMatrix load_activations(const std::filesystem::path& path,
                                  const NumericPolicy& policy = {});
void save_activations(const ActivationMatrix& matrix, const std::filesystem::path& path);

/// Conv-layer activations: each row flattens a (height x width) feature map
/// over d_images inputs, so row length is height*width*d_images.
struct ConvTensorLayout {
  ActivationMatrix acts;
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t d_images = 0;

  ConvTensorLayout(ActivationMatrix acts, std::size_t height, std::size_t width,
                   std::size_t d_images);

  std::size_t total_outputs() const { return height * width * d_images; }
};

/// Per-repeat column index choices, a pure function of (total_cols, target_d,
/// repeats, seed). Both networks must be sampled with the same seed so each
/// repeat compares responses to the same input coordinates.
std::vector<std::vector<std::size_t>> sample_column_sets(std::size_t total_cols,
                                                         std::size_t target_d,
                                                         std::size_t repeats,
                                                         std::uint64_t seed);

/// `repeats` activation matrices, each restricted to one sampled column set.
std::vector<ActivationMatrix> conv_sample(const ConvTensorLayout& tensor, std::size_t target_d,
                                          std::size_t repeats, std::uint64_t seed);

}  // namespace io
}  // namespace smatch
