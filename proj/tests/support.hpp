#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "hullpeel/error.hpp"

namespace support {

// Code of the hullpeel::Error thrown by f, or nullopt if none was thrown.
template <class F>
std::optional<hullpeel::ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const hullpeel::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

template <class F>
std::optional<std::size_t> error_line(F&& f) {
  try {
    f();
  } catch (const hullpeel::Error& e) {
    return e.line();
  }
  return std::nullopt;
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("hullpeel_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path file(const std::string& name) const { return path_ / name; }

  std::filesystem::path write(const std::string& name, const std::string& text) const {
    const auto p = file(name);
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace support
