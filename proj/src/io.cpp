#include "shapecode/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace shapecode {

std::vector<uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path, const std::vector<uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

BitStream ingest_corpus(const std::filesystem::path& path) {
  return BitStream::from_bytes(read_file_bytes(path));
}

std::string format_value(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

std::string format_value(uint64_t value) { return std::to_string(value); }

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  if (header.empty()) throw std::invalid_argument("CSV header must not be empty");
  for (size_t i = 0; i < header.size(); ++i) {
    if (i > 0) body_ += ',';
    body_ += header[i];
  }
  body_ += '\n';
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw std::invalid_argument("CSV row width does not match header");
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) body_ += ',';
    body_ += cells[i];
  }
  body_ += '\n';
}

void CsvWriter::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path.string());
  out << body_;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<uint64_t> log_spaced_checkpoints(uint64_t first, uint64_t limit, int per_decade) {
  if (first == 0 || limit < first) throw std::invalid_argument("invalid checkpoint range");
  std::vector<uint64_t> points;
  const double step = std::pow(10.0, 1.0 / per_decade);
  double x = static_cast<double>(first);
  while (x < static_cast<double>(limit)) {
    const uint64_t v = static_cast<uint64_t>(std::llround(x));
    if (points.empty() || v > points.back()) points.push_back(v);
    x *= step;
  }
  if (points.empty() || points.back() != limit) points.push_back(limit);
  return points;
}

}  // namespace shapecode
