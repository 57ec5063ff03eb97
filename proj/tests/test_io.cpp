#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <unistd.h>
#include <fstream>
#include <set>
#include <string>

#include "smatch/instances.hpp"
#include "smatch/io.hpp"

using namespace smatch;
using namespace smatch::io;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("smatch_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path file(const std::string& name) const { return path / name; }
  static inline int counter = 0;
};

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("load_csv parses plain matrices, comments and errors") {
  TempDir dir;
  const fs::path ok = dir.file("ok.csv");
  write_text(ok, "# neuron activations\n1,0\n0,1\n");
  const ActivationMatrix m = load_csv(ok);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 2);
  CHECK(m.at(1, 1) == 1.0);

  const fs::path ragged = dir.file("ragged.csv");
  write_text(ragged, "1,0\n0\n");
  try {
    load_csv(ragged);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parse);
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);  // line number
  }

  const fs::path junk = dir.file("junk.csv");
  write_text(junk, "1,zebra\n");
  CHECK_THROWS_AS(load_csv(junk), Error);

  const fs::path empty = dir.file("empty.csv");
  write_text(empty, "");
  CHECK_THROWS_AS(load_csv(empty), Error);

  const fs::path comments_only = dir.file("comments.csv");
  write_text(comments_only, "# nothing\n# here\n");
  CHECK_THROWS_AS(load_csv(comments_only), Error);

  CHECK_THROWS_AS(load_csv(dir.file("missing.csv")), Error);
}

TEST_CASE("csv round-trip is lossless through 17 significant digits") {
  TempDir dir;
  const instances::InstancePair p = instances::gen_random_gaussian(3, 2, 5, 77);
  const fs::path f = dir.file("m.csv");
  save_csv(p.x, f);
  const ActivationMatrix back = load_csv(f);
  REQUIRE(back.rows() == p.x.rows());
  REQUIRE(back.cols() == p.x.cols());
  for (std::size_t i = 0; i < back.rows(); ++i) {
    for (std::size_t j = 0; j < back.cols(); ++j) {
      CHECK(back.at(i, j) == p.x.at(i, j));  // %.17g round-trips doubles exactly
    }
  }
}

TEST_CASE("binary round-trip is bitwise and format errors are loud") {
  TempDir dir;
  const instances::InstancePair p = instances::gen_random_gaussian(4, 2, 3, 99);
  const fs::path f = dir.file("m.smat");
  save_binary(p.x, f);
  CHECK(load_binary(f) == p.x);
  CHECK(load_activations(f) == p.x);  // sniffed as binary

  // corrupt the magic
  {
    std::fstream io(f, std::ios::in | std::ios::out | std::ios::binary);
    io.put('X');
  }
  CHECK_THROWS_AS(load_binary(f), Error);

  // truncated payload
  const fs::path trunc = dir.file("trunc.smat");
  save_binary(p.x, trunc);
  fs::resize_file(trunc, fs::file_size(trunc) - 8);
  CHECK_THROWS_AS(load_binary(trunc), Error);

  // wrong version
  const fs::path vers = dir.file("vers.smat");
  save_binary(p.x, vers);
  {
    std::fstream io(vers, std::ios::in | std::ios::out | std::ios::binary);
    io.seekp(4);
    io.put(2);
  }
  CHECK_THROWS_AS(load_binary(vers), Error);
}

TEST_CASE("zero-row policies at load time") {
  TempDir dir;
  const fs::path f = dir.file("zero.csv");
  write_text(f, "1,2\n0,0\n3,4\n");

  NumericPolicy policy;  // reject by default
  try {
    load_csv(f, policy);
    FAIL("expected a degenerate-neuron error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_neuron);
    CHECK(std::string(e.what()).find("row 1") != std::string::npos);
  }

  policy.zero_vector_policy = ZeroVectorPolicy::drop;
  const ActivationMatrix dropped = load_csv(f, policy);
  CHECK(dropped.rows() == 2);
  CHECK(dropped.at(1, 0) == 3.0);

  policy.zero_vector_policy = ZeroVectorPolicy::keep;
  CHECK(load_csv(f, policy).rows() == 3);
}

TEST_CASE("save_activations picks the format by extension") {
  TempDir dir;
  const instances::InstancePair p = instances::gen_random_gaussian(2, 2, 3, 5);
  const fs::path csv = dir.file("a.csv");
  const fs::path bin = dir.file("a.smat");
  save_activations(p.x, csv);
  save_activations(p.x, bin);
  std::ifstream head(bin, std::ios::binary);
  char magic[4];
  head.read(magic, 4);
  CHECK(std::string(magic, 4) == "SMAT");
  CHECK(load_activations(csv) == load_activations(bin));
}

TEST_CASE("conv sampling is paired, seeded and exhaustive at full budget") {
  // 2 neurons, 2x3 maps over 4 images -> rows of length 24
  const std::size_t total = 2 * 3 * 4;
  ActivationMatrix acts(2, total);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < total; ++j) acts.at(i, j) = static_cast<double>(100 * i + j);
  }
  const ConvTensorLayout tensor(acts, 2, 3, 4);

  // full budget, one repeat: a column permutation of the original matrix
  const std::vector<ActivationMatrix> full = conv_sample(tensor, total, 1, 7);
  REQUIRE(full.size() == 1);
  std::set<double> seen(full[0].row(0).begin(), full[0].row(0).end());
  CHECK(seen.size() == total);
  CHECK(*seen.begin() == 0.0);
  CHECK(*seen.rbegin() == static_cast<double>(total - 1));

  // same seed, same choices
  const auto again = conv_sample(tensor, 6, 3, 11);
  const auto again2 = conv_sample(tensor, 6, 3, 11);
  for (std::size_t r = 0; r < 3; ++r) CHECK(again[r] == again2[r]);

  // distinct repeats draw distinct column sets
  const auto sets = sample_column_sets(total, 6, 3, 11);
  std::set<std::set<std::size_t>> unique;
  for (const auto& s : sets) unique.insert(std::set<std::size_t>(s.begin(), s.end()));
  CHECK(unique.size() == 3);

  // pairing: the same seed applied to another tensor picks the same columns
  ActivationMatrix other(1, total);
  for (std::size_t j = 0; j < total; ++j) other.at(0, j) = static_cast<double>(j);
  const ConvTensorLayout tensor2(other, 2, 3, 4);
  const auto a = conv_sample(tensor, 6, 2, 13);
  const auto b = conv_sample(tensor2, 6, 2, 13);
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t j = 0; j < 6; ++j) {
      CHECK(a[r].at(0, j) == b[r].at(0, j));  // column ids agree, values echo them
    }
  }

  CHECK_THROWS_AS(conv_sample(tensor, total + 1, 1, 0), Error);
  CHECK_THROWS_AS(conv_sample(tensor, 0, 1, 0), Error);
  CHECK_THROWS_AS(conv_sample(tensor, 4, 0, 0), Error);
  CHECK_THROWS_AS(ConvTensorLayout(acts, 2, 3, 5), Error);
}
