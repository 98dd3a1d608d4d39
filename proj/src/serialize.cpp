#include "inquest/serialize.hpp"

#include <cstring>
#include <fstream>

namespace inquest::io {

namespace {
constexpr char kMagic[8] = {'I', 'Q', 'C', 'O', 'N', 'T', '0', '\n'};
}

void Writer::u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }

void Writer::u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void Writer::u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void Writer::i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }

void Writer::f64(Scalar v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  u64(bits);
}

void Writer::str(std::string_view s) {
  u64(s.size());
  buf_.append(s.data(), s.size());
}

void Writer::vec(const Vector& v) {
  u64(static_cast<std::uint64_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) f64(v[i]);
}

void Writer::mat(const Matrix& m) {
  u64(static_cast<std::uint64_t>(m.rows()));
  u64(static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) f64(m(r, c));
}

void Writer::raw(std::string_view bytes) { buf_.append(bytes.data(), bytes.size()); }

void Reader::need(size_t n) const {
  if (pos_ + n > buf_.size()) throw DataError("truncated binary payload");
}

std::uint8_t Reader::u8() {
  need(1);
  return static_cast<std::uint8_t>(buf_[pos_++]);
}

std::uint32_t Reader::u32() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf_[pos_ + i])) << (8 * i);
  pos_ += 4;
  return v;
}

std::uint64_t Reader::u64() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf_[pos_ + i])) << (8 * i);
  pos_ += 8;
  return v;
}

std::int64_t Reader::i64() { return static_cast<std::int64_t>(u64()); }

Scalar Reader::f64() {
  std::uint64_t bits = u64();
  Scalar v;
  std::memcpy(&v, &bits, sizeof(v));
  return v;
}

std::string Reader::str() {
  std::uint64_t n = u64();
  need(n);
  std::string s(buf_.substr(pos_, n));
  pos_ += n;
  return s;
}

Vector Reader::vec() {
  std::uint64_t n = u64();
  Vector v(static_cast<Eigen::Index>(n));
  for (std::uint64_t i = 0; i < n; ++i) v[static_cast<Eigen::Index>(i)] = f64();
  return v;
}

Matrix Reader::mat() {
  std::uint64_t rows = u64();
  std::uint64_t cols = u64();
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::uint64_t r = 0; r < rows; ++r)
    for (std::uint64_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = f64();
  return m;
}

void Container::add(std::string name, std::string bytes) {
  for (const auto& [n, _] : sections)
    if (n == name) throw StateError("duplicate container section: " + name);
  sections.emplace_back(std::move(name), std::move(bytes));
}

bool Container::has(std::string_view name) const {
  for (const auto& [n, _] : sections)
    if (n == name) return true;
  return false;
}

const std::string& Container::get(std::string_view name) const {
  for (const auto& [n, b] : sections)
    if (n == name) return b;
  throw DataError("missing container section: " + std::string(name));
}

void save_container(const std::string& path, const Container& c) {
  Writer w;
  w.raw(std::string_view(kMagic, sizeof(kMagic)));
  w.u32(c.version);
  w.u32(static_cast<std::uint32_t>(c.sections.size()));
  for (const auto& [name, bytes] : c.sections) {
    w.str(name);
    w.str(bytes);
  }
  write_file(path, w.bytes());
}

Container load_container(const std::string& path) {
  std::string blob = read_file(path);
  if (blob.size() < sizeof(kMagic) || std::memcmp(blob.data(), kMagic, sizeof(kMagic)) != 0)
    throw DataError("not a checkpoint container: " + path);
  Reader r(std::string_view(blob).substr(sizeof(kMagic)));
  Container c;
  c.version = r.u32();
  std::uint32_t count = r.u32();
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name = r.str();
    std::string bytes = r.str();
    c.sections.emplace_back(std::move(name), std::move(bytes));
  }
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return bytes;
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write file: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("short write: " + path);
}

}  // namespace inquest::io
