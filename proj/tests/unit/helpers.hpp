#pragma once

#include <filesystem>
#include <random>
#include <string>

#include <unistd.h>

#include "txguard/core/transaction.hpp"

namespace testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("txguard-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline txguard::Transaction txn(std::string id, std::string from, std::string to, std::int64_t cents,
                                std::string ts, std::string desc) {
  return {std::move(id), std::move(from), std::move(to), cents, txguard::Timestamp::parse_rfc3339(ts), std::move(desc)};
}

inline txguard::WindowConfig feb2022() {
  return txguard::WindowConfig::calendar_month(txguard::Date::from_ymd(2022, 2, 1));
}

}  // namespace testing
