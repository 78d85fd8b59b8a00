#include "superrad/csv.hpp"

#include <array>
#include <charconv>
#include <system_error>

#include "superrad/common.hpp"

namespace superrad {

std::string format_double(double value) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), end);
}

namespace {

void ensure_parent(const std::filesystem::path& path) {
  const auto parent = path.parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(parent, ec);
  if (ec) throw IoError(parent.string(), "cannot create directory: " + ec.message());
}

}  // namespace

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     std::initializer_list<std::string_view> header)
    : path_(path) {
  ensure_parent(path_);
  out_.open(path_, std::ios::out | std::ios::trunc);
  if (!out_) throw IoError(path_.string(), "cannot open for writing");
  bool first = true;
  for (auto h : header) {
    if (!first) out_ << ',';
    out_ << h;
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::separator() {
  if (row_started_) out_ << ',';
  row_started_ = true;
}

CsvWriter& CsvWriter::cell(double value) {
  separator();
  out_ << format_double(value);
  return *this;
}

CsvWriter& CsvWriter::cell(long long value) {
  separator();
  out_ << value;
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  row_started_ = false;
}

void CsvWriter::close() {
  out_.flush();
  if (!out_) throw IoError(path_.string(), "write failed");
  out_.close();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::out | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << text;
  out.flush();
  if (!out) throw IoError(path.string(), "write failed");
}

}  // namespace superrad
