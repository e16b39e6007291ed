#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "shapecode/bitword.hpp"

namespace shapecode {

std::vector<uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, const std::vector<uint8_t>& bytes);

// Expands a byte file into a bit stream, MSB-first per byte.
BitStream ingest_corpus(const std::filesystem::path& path);

// Fixed 12-significant-digit decimal formatting used in every CSV cell so
// identical runs emit byte-identical files.
std::string format_value(double value);
std::string format_value(uint64_t value);

// Minimal CSV emitter: header row, UTF-8, '\n' line endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void add_row(const std::vector<std::string>& cells);
  std::string str() const { return body_; }
  void write(const std::filesystem::path& path) const;

 private:
  size_t columns_;
  std::string body_;
};

// Log-spaced checkpoints in [first, limit], deduplicated, always ending at
// limit. Used for profile CSVs.
std::vector<uint64_t> log_spaced_checkpoints(uint64_t first, uint64_t limit, int per_decade = 12);

}  // namespace shapecode
