#include "gz_stream.hpp"

#include <zlib.h>

#include <climits>
#include <cstring>

#include "noderank/error.hpp"

namespace noderank::detail {

namespace {
constexpr std::size_t kChunk = 1 << 16;

gzFile as_gz(void* p) { return static_cast<gzFile>(p); }
}  // namespace

GzReader::GzReader(const std::string& path) : path_(path), buffer_(kChunk) {
  file_ = gzopen(path.c_str(), "rb");
  if (file_ == nullptr) throw DataError("cannot open '" + path + "'");
  gzbuffer(as_gz(file_), kChunk);
}

GzReader::~GzReader() {
  if (file_ != nullptr) gzclose(as_gz(file_));
}

bool GzReader::is_plain() {
  // gzdirect is only reliable after the header has been examined.
  peek();
  return gzdirect(as_gz(file_)) == 1;
}

bool GzReader::fill() {
  if (eof_) return false;
  consumed_ += end_;
  pos_ = 0;
  end_ = 0;
  const int n = gzread(as_gz(file_), buffer_.data(), static_cast<unsigned>(buffer_.size()));
  if (n < 0) {
    int code = 0;
    const char* msg = gzerror(as_gz(file_), &code);
    throw DataError("read error in '" + path_ + "': " + (msg ? msg : "unknown zlib error"));
  }
  if (n == 0) {
    eof_ = true;
    return false;
  }
  end_ = static_cast<std::size_t>(n);
  return true;
}

int GzReader::peek() {
  if (pos_ == end_ && !fill()) return EOF;
  return static_cast<unsigned char>(buffer_[pos_]);
}

int GzReader::get() {
  if (pos_ == end_ && !fill()) return EOF;
  return static_cast<unsigned char>(buffer_[pos_++]);
}

bool GzReader::get_line(std::string& line) {
  line.clear();
  bool any = false;
  for (;;) {
    if (pos_ == end_ && !fill()) break;
    any = true;
    const char* begin = buffer_.data() + pos_;
    const char* stop = buffer_.data() + end_;
    const char* nl = static_cast<const char*>(std::memchr(begin, '\n', static_cast<std::size_t>(stop - begin)));
    if (nl != nullptr) {
      line.append(begin, nl);
      pos_ += static_cast<std::size_t>(nl - begin) + 1;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return true;
    }
    line.append(begin, stop);
    pos_ = end_;
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return any;
}

GzWriter::GzWriter(const std::string& path, bool compress) : path_(path) {
  file_ = gzopen(path.c_str(), compress ? "wb6" : "wbT");
  if (file_ == nullptr) throw DataError("cannot open '" + path + "' for writing");
}

GzWriter::~GzWriter() {
  if (file_ != nullptr) gzclose(as_gz(file_));
}

void GzWriter::write(std::string_view data) {
  while (!data.empty()) {
    const unsigned n = data.size() > static_cast<std::size_t>(INT_MAX / 2)
                           ? static_cast<unsigned>(INT_MAX / 2)
                           : static_cast<unsigned>(data.size());
    if (gzwrite(as_gz(file_), data.data(), n) != static_cast<int>(n)) {
      throw DataError("write error in '" + path_ + "'");
    }
    data.remove_prefix(n);
  }
}

void GzWriter::close() {
  if (file_ == nullptr) return;
  const int rc = gzclose(as_gz(file_));
  file_ = nullptr;
  if (rc != Z_OK) throw DataError("error closing '" + path_ + "'");
}

}  // namespace noderank::detail
