/* Copyright 2026 The Framesel Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef FRAMESEL_TENSOR_IO_HPP
#define FRAMESEL_TENSOR_IO_HPP

#include <fcntl.h>
#include <unistd.h>

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "framesel/errors.hpp"
#include "framesel/tensor.hpp"

namespace framesel {

// TNSR container, byte layout (all integers little-endian):
//
//   offset  size      field
//   0       4         magic "TNSR"
//   4       2         version, currently 1
//   6       1         dtype: 1 = float64, 2 = float32, 3 = uint16
//   7       1         rank, 1..4
//   8       4*rank    dims, uint32 each
//   ...     variable  payload, row-major elements
//
// Payload length must equal element-size * product(dims); the product is
// capped at 2^31 elements and checked before any allocation.

inline constexpr char kTensorMagic[4] = {'T', 'N', 'S', 'R'};
inline constexpr std::uint16_t kTensorVersion = 1;
inline constexpr std::uint64_t kMaxTensorElements = 1ULL << 31;

enum class Dtype : std::uint8_t { f64 = 1, f32 = 2, u16 = 3 };

namespace detail {

inline void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xff));
}

inline void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}

inline void put_u64(std::vector<unsigned char>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i)
    out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}

inline std::uint16_t get_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

inline std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

inline std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

template <typename T>
void put_element(std::vector<unsigned char>& out, T v) {
  if constexpr (std::is_same_v<T, double>) {
    put_u64(out, std::bit_cast<std::uint64_t>(v));
  } else if constexpr (std::is_same_v<T, float>) {
    put_u32(out, std::bit_cast<std::uint32_t>(v));
  } else {
    put_u16(out, v);
  }
}

template <typename T>
T get_element(const unsigned char* p) {
  if constexpr (std::is_same_v<T, double>) {
    return std::bit_cast<double>(get_u64(p));
  } else if constexpr (std::is_same_v<T, float>) {
    return std::bit_cast<float>(get_u32(p));
  } else {
    return get_u16(p);
  }
}

template <typename T>
constexpr Dtype dtype_of() {
  if constexpr (std::is_same_v<T, double>) return Dtype::f64;
  else if constexpr (std::is_same_v<T, float>) return Dtype::f32;
  else return Dtype::u16;
}

inline std::size_t dtype_size(Dtype d) {
  switch (d) {
    case Dtype::f64: return 8;
    case Dtype::f32: return 4;
    case Dtype::u16: return 2;
  }
  throw UnsupportedDtype("dtype code " +
                         std::to_string(static_cast<int>(d)));
}

}  // namespace detail

/// Serializes a tensor into the TNSR byte layout.
inline std::vector<unsigned char> encode_tensor(const AnyTensor& any) {
  std::vector<unsigned char> out;
  out.insert(out.end(), kTensorMagic, kTensorMagic + 4);
  detail::put_u16(out, kTensorVersion);
  std::visit(
      [&out](const auto& t) {
        using Elem = typename std::decay_t<decltype(t)>;
        using Value = std::decay_t<decltype(t[0])>;
        (void)sizeof(Elem);
        out.push_back(
            static_cast<unsigned char>(detail::dtype_of<Value>()));
        out.push_back(static_cast<unsigned char>(t.rank()));
        for (const auto d : t.dims()) detail::put_u32(out, d);
        out.reserve(out.size() + t.size() * sizeof(Value));
        for (std::size_t i = 0; i < t.size(); ++i)
          detail::put_element(out, t[i]);
      },
      any);
  return out;
}

/// Parses TNSR bytes. Raises a typed error for any malformed input; never
/// allocates the payload before the declared sizes have been validated.
inline AnyTensor decode_tensor(const unsigned char* data, std::size_t size) {
  if (size < 8)
    throw LengthMismatch("header: file holds " + std::to_string(size) +
                         " bytes, fixed header needs 8");
  if (std::memcmp(data, kTensorMagic, 4) != 0)
    throw BadMagic("magic: expected \"TNSR\", got \"" +
                   std::string(reinterpret_cast<const char*>(data), 4) + "\"");
  const std::uint16_t version = detail::get_u16(data + 4);
  if (version != kTensorVersion)
    throw VersionUnsupported("version: " + std::to_string(version) +
                             " (supported: 1)");
  const std::uint8_t dtype_code = data[6];
  if (dtype_code < 1 || dtype_code > 3)
    throw UnsupportedDtype("dtype: code " + std::to_string(dtype_code));
  const auto dtype = static_cast<Dtype>(dtype_code);
  const std::uint8_t rank = data[7];
  if (rank < 1 || rank > kMaxTensorRank)
    throw InvalidRank("rank: " + std::to_string(rank) +
                      " outside supported range 1..4");
  if (size < 8 + 4ull * rank)
    throw LengthMismatch("dims: file ends inside the dims table");

  std::vector<std::uint32_t> dims(rank);
  std::uint64_t count = 1;
  for (std::uint8_t i = 0; i < rank; ++i) {
    dims[i] = detail::get_u32(data + 8 + 4 * i);
    count *= dims[i];
    if (count > kMaxTensorElements)
      throw LengthMismatch("dims: element count exceeds 2^31 cap");
  }

  const std::size_t esize = detail::dtype_size(dtype);
  const std::uint64_t expected = count * esize;
  const std::uint64_t actual = size - (8 + 4ull * rank);
  if (actual != expected)
    throw LengthMismatch("payload: holds " + std::to_string(actual) +
                         " bytes, dims require " + std::to_string(expected));

  const unsigned char* payload = data + 8 + 4ull * rank;
  switch (dtype) {
    case Dtype::f64: {
      std::vector<double> vals(count);
      for (std::uint64_t i = 0; i < count; ++i)
        vals[i] = detail::get_element<double>(payload + 8 * i);
      return Tensor<double>(std::move(dims), std::move(vals));
    }
    case Dtype::f32: {
      std::vector<float> vals(count);
      for (std::uint64_t i = 0; i < count; ++i)
        vals[i] = detail::get_element<float>(payload + 4 * i);
      return Tensor<float>(std::move(dims), std::move(vals));
    }
    case Dtype::u16: {
      std::vector<std::uint16_t> vals(count);
      for (std::uint64_t i = 0; i < count; ++i)
        vals[i] = detail::get_element<std::uint16_t>(payload + 2 * i);
      return Tensor<std::uint16_t>(std::move(dims), std::move(vals));
    }
  }
  throw UnsupportedDtype("dtype: code " + std::to_string(dtype_code));
}

/// Writes `bytes` to `path` and fsyncs before returning.
inline void write_file_synced(const std::filesystem::path& path,
                              const unsigned char* bytes, std::size_t size) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) throw IoFailure("cannot open " + path.string() + " for writing");
  std::size_t written = 0;
  while (written < size) {
    const ssize_t n = ::write(fd, bytes + written, size - written);
    if (n < 0) {
      ::close(fd);
      throw IoFailure("write failed on " + path.string());
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0) {
    ::close(fd);
    throw IoFailure("fsync failed on " + path.string());
  }
  ::close(fd);
}

inline void write_file_synced(const std::filesystem::path& path,
                              const std::string& content) {
  write_file_synced(path,
                    reinterpret_cast<const unsigned char*>(content.data()),
                    content.size());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string() + " for reading");
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  if (in.bad()) throw IoFailure("read failed on " + path.string());
  return content;
}

inline void write_tensor(const std::filesystem::path& path,
                         const AnyTensor& tensor) {
  const auto bytes = encode_tensor(tensor);
  write_file_synced(path, bytes.data(), bytes.size());
}

inline AnyTensor read_tensor(const std::filesystem::path& path) {
  const std::string content = read_file(path);
  return decode_tensor(reinterpret_cast<const unsigned char*>(content.data()),
                       content.size());
}

struct TensorHeader {
  Dtype dtype;
  std::vector<std::uint32_t> dims;
};

/// Reads only the fixed header and dims table; used to validate manifests
/// without loading payloads.
inline TensorHeader read_tensor_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string() + " for reading");
  unsigned char buf[8 + 4 * kMaxTensorRank];
  in.read(reinterpret_cast<char*>(buf), 8);
  if (in.gcount() < 8)
    throw LengthMismatch("header: " + path.string() +
                         " shorter than the fixed header");
  if (std::memcmp(buf, kTensorMagic, 4) != 0)
    throw BadMagic("magic: " + path.string() + " is not a TNSR file");
  const std::uint16_t version = detail::get_u16(buf + 4);
  if (version != kTensorVersion)
    throw VersionUnsupported("version: " + std::to_string(version) + " in " +
                             path.string());
  const std::uint8_t dtype_code = buf[6];
  if (dtype_code < 1 || dtype_code > 3)
    throw UnsupportedDtype("dtype: code " + std::to_string(dtype_code) +
                           " in " + path.string());
  const std::uint8_t rank = buf[7];
  if (rank < 1 || rank > kMaxTensorRank)
    throw InvalidRank("rank: " + std::to_string(rank) + " in " +
                      path.string());
  in.read(reinterpret_cast<char*>(buf + 8), 4 * rank);
  if (in.gcount() < 4 * rank)
    throw LengthMismatch("dims: " + path.string() +
                         " ends inside the dims table");
  TensorHeader header;
  header.dtype = static_cast<Dtype>(dtype_code);
  header.dims.resize(rank);
  for (std::uint8_t i = 0; i < rank; ++i)
    header.dims[i] = detail::get_u32(buf + 8 + 4 * i);
  return header;
}

}  // namespace framesel

#endif  // FRAMESEL_TENSOR_IO_HPP
