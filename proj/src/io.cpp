#include "smatch/io.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <string>

#include "smatch/rng.hpp"

namespace smatch {
namespace io {

namespace {

constexpr char kMagic[4] = {'S', 'M', 'A', 'T'};
constexpr std::uint32_t kVersion = 1;

[[noreturn]] void parse_fail(const std::filesystem::path& path, std::size_t line,
                             const std::string& what) {
  fail(ErrorKind::parse, path.string() + ":" + std::to_string(line) + ": " + what);
}

ActivationMatrix apply_zero_row_policy(ActivationMatrix m, const NumericPolicy& policy) {
  std::vector<std::size_t> zero_rows;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (m.row_norm(i) == 0.0) zero_rows.push_back(i);
  }
  if (zero_rows.empty() || policy.zero_vector_policy == ZeroVectorPolicy::keep) return m;
  if (policy.zero_vector_policy == ZeroVectorPolicy::reject) {
    fail(ErrorKind::degenerate_neuron,
         "zero activation vector at row " + std::to_string(zero_rows.front()) +
             " (policy: reject; use drop or keep to accept)");
  }
  // drop
  ActivationMatrix kept(m.rows() - zero_rows.size(), m.cols());
  std::size_t out = 0;
  std::size_t next_zero = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (next_zero < zero_rows.size() && zero_rows[next_zero] == i) {
      ++next_zero;
      continue;
    }
    std::copy(m.row(i).begin(), m.row(i).end(), kept.row(out++).begin());
  }
  return kept;
}

void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

}  // namespace

ActivationMatrix load_csv(const std::filesystem::path& path, const NumericPolicy& policy) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::parse, "cannot open " + path.string());

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::size_t end = comma == std::string::npos ? line.size() : comma;
      std::size_t a = start;
      std::size_t b = end;
      while (a < b && std::isspace(static_cast<unsigned char>(line[a]))) ++a;
      while (b > a && std::isspace(static_cast<unsigned char>(line[b - 1]))) --b;
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(line.data() + a, line.data() + b, value);
      if (ec != std::errc{} || ptr != line.data() + b || a == b) {
        parse_fail(path, line_no, "not a number: '" + line.substr(start, end - start) + "'");
      }
      row.push_back(value);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }

    if (width == 0) {
      width = row.size();
    } else if (row.size() != width) {
      parse_fail(path, line_no,
                 "row has " + std::to_string(row.size()) + " values, expected " +
                     std::to_string(width));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(ErrorKind::parse, path.string() + ": no data rows");

  ActivationMatrix m = ActivationMatrix::from_rows(rows);
  return apply_zero_row_policy(std::move(m), policy);
}

void save_csv(const ActivationMatrix& matrix, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::parse, "cannot write " + path.string());
  char buf[64];
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", matrix.at(i, j));
      if (j) out << ',';
      out << buf;
    }
    out << '\n';
  }
  if (!out) fail(ErrorKind::parse, "write failed: " + path.string());
}

ActivationMatrix load_binary(const std::filesystem::path& path, const NumericPolicy& policy) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::format, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (bytes.size() < 24 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    fail(ErrorKind::format, path.string() + ": bad magic (expected SMAT)");
  }
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::uint32_t version = get_u32(p + 4);
  if (version != kVersion) {
    fail(ErrorKind::format, path.string() + ": unsupported version " + std::to_string(version));
  }
  const std::uint64_t rows = get_u64(p + 8);
  const std::uint64_t cols = get_u64(p + 16);
  if (cols == 0) fail(ErrorKind::format, path.string() + ": zero columns");
  if (rows != 0 && cols > std::numeric_limits<std::uint64_t>::max() / 8 / rows) {
    fail(ErrorKind::format, path.string() + ": implausible shape in header");
  }
  const std::uint64_t payload = bytes.size() - 24;
  if (payload != rows * cols * 8) {
    fail(ErrorKind::format, path.string() + ": payload is " + std::to_string(payload) +
                                " bytes, expected " + std::to_string(rows * cols * 8));
  }

  ActivationMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows * cols; ++i) {
    const std::uint64_t bits = get_u64(p + 24 + 8 * i);
    m.at(i / cols, i % cols) = std::bit_cast<double>(bits);
  }
  m.validate_finite();
  return apply_zero_row_policy(std::move(m), policy);
}

void save_binary(const ActivationMatrix& matrix, const std::filesystem::path& path) {
  std::string bytes;
  bytes.reserve(24 + matrix.rows() * matrix.cols() * 8);
  bytes.append(kMagic, 4);
  put_u32(bytes, kVersion);
  put_u64(bytes, matrix.rows());
  put_u64(bytes, matrix.cols());
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
      put_u64(bytes, std::bit_cast<std::uint64_t>(matrix.at(i, j)));
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::format, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::format, "write failed: " + path.string());
}

ActivationMatrix load_activations(const std::filesystem::path& path,
                                  const NumericPolicy& policy) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) fail(ErrorKind::parse, "cannot open " + path.string());
  char head[4] = {};
  probe.read(head, 4);
  if (probe.gcount() == 4 && std::memcmp(head, kMagic, 4) == 0) {
    return load_binary(path, policy);
  }
  return load_csv(path, policy);
}

void save_activations(const ActivationMatrix& matrix, const std::filesystem::path& path) {
  if (path.extension() == ".csv") {
    save_csv(matrix, path);
  } else {
    save_binary(matrix, path);
  }
}

ConvTensorLayout::ConvTensorLayout(ActivationMatrix acts_in, std::size_t height_in,
                                   std::size_t width_in, std::size_t d_images_in)
    : acts(std::move(acts_in)), height(height_in), width(width_in), d_images(d_images_in) {
  if (height == 0 || width == 0 || d_images == 0) {
    fail(ErrorKind::invalid_input, "conv layout dimensions must be positive");
  }
  if (acts.cols() != total_outputs()) {
    fail(ErrorKind::invalid_input,
         "conv layout expects rows of length " + std::to_string(total_outputs()) + ", matrix has " +
             std::to_string(acts.cols()));
  }
}

std::vector<std::vector<std::size_t>> sample_column_sets(std::size_t total_cols,
                                                         std::size_t target_d,
                                                         std::size_t repeats,
                                                         std::uint64_t seed) {
  if (target_d == 0 || target_d > total_cols) {
    fail(ErrorKind::invalid_input, "sample size must lie in [1, " + std::to_string(total_cols) +
                                       "], got " + std::to_string(target_d));
  }
  if (repeats == 0) fail(ErrorKind::invalid_input, "repeats must be >= 1");

  std::vector<std::vector<std::size_t>> sets;
  sets.reserve(repeats);
  for (std::size_t r = 0; r < repeats; ++r) {
    // partial Fisher-Yates: the first target_d entries are a uniform draw
    // without replacement
    std::vector<std::size_t> pool(total_cols);
    std::iota(pool.begin(), pool.end(), 0);
    std::mt19937_64 rng(derive_seed(seed, 0xc0, r));
    for (std::size_t i = 0; i < target_d; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(bounded_uniform(rng, total_cols - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(target_d);
    sets.push_back(std::move(pool));
  }
  return sets;
}

std::vector<ActivationMatrix> conv_sample(const ConvTensorLayout& tensor, std::size_t target_d,
                                          std::size_t repeats, std::uint64_t seed) {
  const auto sets = sample_column_sets(tensor.total_outputs(), target_d, repeats, seed);
  std::vector<ActivationMatrix> out;
  out.reserve(repeats);
  for (const auto& cols : sets) {
    ActivationMatrix m(tensor.acts.rows(), cols.size());
    for (std::size_t i = 0; i < tensor.acts.rows(); ++i) {
      for (std::size_t j = 0; j < cols.size(); ++j) {
        m.at(i, j) = tensor.acts.at(i, cols[j]);
      }
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace io
}  // namespace smatch
