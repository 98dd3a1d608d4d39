#pragma once

#include "inquest/common.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace inquest::io {

// Little-endian byte writer/reader for the binary artifacts (checkpoints,
// dataset bundles). Doubles are stored as their raw IEEE-754 bits so a
// save/load round trip is bit-exact.
class Writer {
 public:
  void u8(std::uint8_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void i64(std::int64_t v);
  void f64(Scalar v);
  void str(std::string_view s);
  void vec(const Vector& v);
  void mat(const Matrix& m);
  void raw(std::string_view bytes);
  const std::string& bytes() const { return buf_; }
  std::string take() { return std::move(buf_); }

 private:
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string_view bytes) : buf_(bytes) {}
  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  std::int64_t i64();
  Scalar f64();
  std::string str();
  Vector vec();
  Matrix mat();
  bool done() const { return pos_ == buf_.size(); }
  size_t remaining() const { return buf_.size() - pos_; }

 private:
  void need(size_t n) const;
  std::string_view buf_;
  size_t pos_ = 0;
};

// Named-section container, the on-disk shape shared by every checkpoint.
// Sections are ordered and unique by name.
struct Container {
  std::uint32_t version = 1;
  std::vector<std::pair<std::string, std::string>> sections;

  void add(std::string name, std::string bytes);
  bool has(std::string_view name) const;
  const std::string& get(std::string_view name) const;  // DataError when absent
};

void save_container(const std::string& path, const Container& c);
Container load_container(const std::string& path);

std::string read_file(const std::string& path);             // DataError when unreadable
void write_file(const std::string& path, std::string_view bytes);

}  // namespace inquest::io
