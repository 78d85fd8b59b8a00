#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>

namespace superrad {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

/// Minimal CSV writer. Numbers are written with full round-trip precision.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path,
            std::initializer_list<std::string_view> header);

  CsvWriter& cell(double value);
  CsvWriter& cell(long long value);
  CsvWriter& cell(std::size_t value) { return cell(static_cast<long long>(value)); }
  CsvWriter& cell(int value) { return cell(static_cast<long long>(value)); }
  void end_row();

  /// Flushes and throws IoError on any stream failure.
  void close();

 private:
  void separator();

  std::filesystem::path path_;
  std::ofstream out_;
  bool row_started_ = false;
};

/// Writes `text` to `path`, creating parent directories; IoError on failure.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace superrad
