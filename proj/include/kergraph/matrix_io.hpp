#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "kergraph/kernel_bank.hpp"

namespace kergraph {

/// Binary matrix container: one JSON header line {n, r, specs, dataset_hash}
/// followed by r row-major n x n payloads of little-endian float64. Round
/// trips are bit exact.
struct MatrixFile {
  Eigen::Index n = 0;
  std::vector<std::string> specs;  // one descriptor per payload
  std::uint64_t dataset_hash = 0;
  std::vector<std::string> notes;  // free-form header notes (provenance)
  std::vector<Eigen::MatrixXd> matrices;
};

void write_matrix_file(const std::string& path,
                       const std::vector<const Eigen::MatrixXd*>& matrices,
                       const std::vector<std::string>& specs,
                       std::uint64_t dataset_hash,
                       const std::vector<std::string>& notes = {});

MatrixFile read_matrix_file(const std::string& path);

/// Kernel-cache view on the container: specs are serialized KernelSpecs.
void save_bank(const std::string& path, const KernelBank& bank,
               std::uint64_t dataset_hash);
KernelBank load_bank(const std::string& path,
                     std::uint64_t* dataset_hash_out = nullptr);

std::string spec_to_string(const KernelSpec& spec);
KernelSpec spec_from_string(const std::string& text);

}  // namespace kergraph
