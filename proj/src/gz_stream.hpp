#pragma once

// Buffered readers and writers over zlib. gzopen reads uncompressed files
// transparently, so every text input goes through here.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace noderank::detail {

class GzReader {
 public:
  explicit GzReader(const std::string& path);
  ~GzReader();
  GzReader(const GzReader&) = delete;
  GzReader& operator=(const GzReader&) = delete;

  // True when the underlying file is not gzip-compressed.
  bool is_plain();

  // Returns false at end of input. Strips the newline and a trailing '\r'.
  bool get_line(std::string& line);

  // Single-byte access with a running byte offset (into the decompressed
  // stream) for error reporting.
  int peek();
  int get();
  std::size_t offset() const noexcept { return consumed_ + pos_; }

 private:
  bool fill();

  void* file_ = nullptr;
  std::string path_;
  std::vector<char> buffer_;
  std::size_t pos_ = 0;
  std::size_t end_ = 0;
  std::size_t consumed_ = 0;
  bool eof_ = false;
};

class GzWriter {
 public:
  GzWriter(const std::string& path, bool compress);
  ~GzWriter();
  GzWriter(const GzWriter&) = delete;
  GzWriter& operator=(const GzWriter&) = delete;

  void write(std::string_view data);
  void close();

 private:
  void* file_ = nullptr;
  std::string path_;
};

}  // namespace noderank::detail
