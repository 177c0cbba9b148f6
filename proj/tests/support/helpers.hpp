#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "irtcat/item_bank.hpp"

namespace irtcat::testing {

inline ItemParameters item(std::string id, double a, double b) {
  ItemParameters p;
  p.id = std::move(id);
  p.discrimination = a;
  p.difficulty = b;
  return p;
}

/// Bank with ids "i0", "i1", ... and the given parameters.
inline ItemBank bank_of(const std::vector<std::pair<double, double>>& ab) {
  std::vector<ItemParameters> items;
  for (std::size_t i = 0; i < ab.size(); ++i) items.push_back(item("i" + std::to_string(i), ab[i].first, ab[i].second));
  return ItemBank(std::move(items));
}

/// Random bank with parameters in the paper's ranges.
inline ItemBank random_bank(std::size_t n, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> a(0.44, 1.52);
  std::uniform_real_distribution<double> b(-1.11, 1.44);
  std::vector<std::pair<double, double>> ab;
  for (std::size_t i = 0; i < n; ++i) ab.emplace_back(a(gen), b(gen));
  return bank_of(ab);
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 gen{std::random_device{}()};
    path_ = std::filesystem::temp_directory_path() / ("irtcat-test-" + std::to_string(gen()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace irtcat::testing
