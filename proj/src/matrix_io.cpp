#include "kergraph/matrix_io.hpp"

#include <bit>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kergraph/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "matrix container assumes a little-endian host");

namespace kergraph {

using nlohmann::json;

std::string spec_to_string(const KernelSpec& spec) {
  json j;
  switch (spec.kind) {
    case KernelKind::gaussian:
      j = {{"kind", "gaussian"}, {"t", spec.t}};
      break;
    case KernelKind::linear:
      j = {{"kind", "linear"}};
      break;
    case KernelKind::polynomial:
      j = {{"kind", "polynomial"}, {"a", spec.a}, {"b", spec.b}};
      break;
  }
  return j.dump();
}

KernelSpec spec_from_string(const std::string& text) {
  const json j = json::parse(text);
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "gaussian") return KernelSpec::gaussian(j.at("t").get<double>());
  if (kind == "linear") return KernelSpec::linear();
  if (kind == "polynomial")
    return KernelSpec::polynomial(j.at("a").get<double>(),
                                  j.at("b").get<int>());
  throw ParseError("unknown kernel spec kind: " + kind);
}

void write_matrix_file(const std::string& path,
                       const std::vector<const Eigen::MatrixXd*>& matrices,
                       const std::vector<std::string>& specs,
                       std::uint64_t dataset_hash,
                       const std::vector<std::string>& notes) {
  if (matrices.empty() || matrices.size() != specs.size())
    throw IoError("matrix container needs matching matrices and specs");
  const Eigen::Index n = matrices.front()->rows();
  for (const auto* m : matrices)
    if (m->rows() != n || m->cols() != n)
      throw DimensionMismatchError("matrix container payloads must be square "
                                   "and share one dimension");

  json header;
  header["n"] = n;
  header["r"] = matrices.size();
  json spec_array = json::array();
  for (const auto& s : specs) spec_array.push_back(json::parse(s));
  header["specs"] = spec_array;
  std::ostringstream hash_hex;
  hash_hex << std::hex << dataset_hash;
  header["dataset_hash"] = hash_hex.str();
  if (!notes.empty()) header["notes"] = notes;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << header.dump() << '\n';

  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      row_major(n, n);
  for (const auto* m : matrices) {
    row_major = *m;
    out.write(reinterpret_cast<const char*>(row_major.data()),
              static_cast<std::streamsize>(sizeof(double)) * n * n);
  }
  if (!out) throw IoError("write failed: " + path);
}

MatrixFile read_matrix_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);

  std::string header_line;
  if (!std::getline(in, header_line))
    throw ParseError("missing container header: " + path);

  MatrixFile file;
  try {
    const json header = json::parse(header_line);
    file.n = header.at("n").get<Eigen::Index>();
    const std::size_t r = header.at("r").get<std::size_t>();
    for (const auto& s : header.at("specs")) file.specs.push_back(s.dump());
    file.dataset_hash = std::stoull(
        header.at("dataset_hash").get<std::string>(), nullptr, 16);
    if (header.contains("notes"))
      file.notes = header.at("notes").get<std::vector<std::string>>();
    if (file.specs.size() != r)
      throw ParseError("header spec count does not match r");
  } catch (const json::exception& e) {
    throw ParseError("bad container header in " + path + ": " + e.what());
  }

  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      row_major(file.n, file.n);
  for (std::size_t i = 0; i < file.specs.size(); ++i) {
    in.read(reinterpret_cast<char*>(row_major.data()),
            static_cast<std::streamsize>(sizeof(double)) * file.n * file.n);
    if (!in) throw IoError("truncated payload in " + path);
    file.matrices.emplace_back(row_major);
  }
  return file;
}

void save_bank(const std::string& path, const KernelBank& bank,
               std::uint64_t dataset_hash) {
  std::vector<const Eigen::MatrixXd*> mats;
  std::vector<std::string> specs;
  for (const auto& k : bank.kernels) {
    mats.push_back(&k.values);
    specs.push_back(spec_to_string(k.spec));
  }
  write_matrix_file(path, mats, specs, dataset_hash, bank.provenance_log);
}

KernelBank load_bank(const std::string& path,
                     std::uint64_t* dataset_hash_out) {
  MatrixFile file = read_matrix_file(path);
  KernelBank bank;
  for (std::size_t i = 0; i < file.matrices.size(); ++i) {
    KernelMatrix k;
    k.values = std::move(file.matrices[i]);
    k.spec = spec_from_string(file.specs[i]);
    k.normalized = true;
    bank.kernels.push_back(std::move(k));
  }
  bank.provenance_log = file.notes;
  if (dataset_hash_out) *dataset_hash_out = file.dataset_hash;
  return bank;
}

}  // namespace kergraph
