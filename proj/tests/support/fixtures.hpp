#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "irbl/pipeline.hpp"

namespace fixtures {

inline std::filesystem::path root() {
  return std::filesystem::path(IRBL_SOURCE_DIR) / "data" / "fixtures" / "demo";
}

inline irbl::RunConfig demo_config() {
  irbl::RunConfig cfg;
  cfg.issues = root() / "issues.jsonl";
  cfg.commits = root() / "commits.jsonl";
  cfg.links = root() / "links.csv";
  cfg.sources = root() / "sources";
  cfg.snapshot_granularity = irbl::SnapshotGranularity::per_bug;
  return cfg;
}

// Loaded once and shared by the read-only tests.
inline const irbl::LoadedData& demo() {
  static const irbl::LoadedData data = irbl::load_inputs(demo_config());
  return data;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    dir_ = std::filesystem::temp_directory_path() /
           ("irbl_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() { std::filesystem::remove_all(dir_); }

  std::filesystem::path write(const std::string& name, const std::string& content) const {
    const auto p = dir_ / name;
    std::filesystem::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }
  const std::filesystem::path& path() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

}  // namespace fixtures
