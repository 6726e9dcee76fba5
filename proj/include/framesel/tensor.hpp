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

#ifndef FRAMESEL_TENSOR_HPP
#define FRAMESEL_TENSOR_HPP

#include <cstdint>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "framesel/errors.hpp"

namespace framesel {

inline constexpr std::size_t kMaxTensorRank = 4;

/// Dense row-major tensor of rank 1..4. The last dimension varies fastest.
template <typename T>
class Tensor {
 public:
  Tensor() = default;

  explicit Tensor(std::vector<std::uint32_t> dims)
      : dims_(std::move(dims)), data_(element_count(dims_)) {
    check_rank();
  }

  Tensor(std::vector<std::uint32_t> dims, std::vector<T> data)
      : dims_(std::move(dims)), data_(std::move(data)) {
    check_rank();
    if (data_.size() != element_count(dims_))
      throw LengthMismatch("tensor payload holds " +
                           std::to_string(data_.size()) +
                           " elements, dims require " +
                           std::to_string(element_count(dims_)));
  }

  const std::vector<std::uint32_t>& dims() const { return dims_; }
  std::size_t rank() const { return dims_.size(); }
  std::uint32_t dim(std::size_t i) const { return dims_.at(i); }
  std::size_t size() const { return data_.size(); }

  const std::vector<T>& data() const { return data_; }
  std::vector<T>& data() { return data_; }

  T& operator[](std::size_t flat) { return data_[flat]; }
  const T& operator[](std::size_t flat) const { return data_[flat]; }

  T& at3(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * dims_[1] + j) * dims_[2] + k];
  }
  const T& at3(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * dims_[1] + j) * dims_[2] + k];
  }
  T& at2(std::size_t i, std::size_t j) { return data_[i * dims_[1] + j]; }
  const T& at2(std::size_t i, std::size_t j) const {
    return data_[i * dims_[1] + j];
  }

  bool operator==(const Tensor& other) const = default;

  static std::size_t element_count(const std::vector<std::uint32_t>& dims) {
    std::size_t n = 1;
    for (auto d : dims) n *= static_cast<std::size_t>(d);
    return n;
  }

 private:
  void check_rank() const {
    if (dims_.empty() || dims_.size() > kMaxTensorRank)
      throw InvalidRank("tensor rank " + std::to_string(dims_.size()) +
                        " outside supported range 1..4");
  }

  std::vector<std::uint32_t> dims_;
  std::vector<T> data_;
};

using AnyTensor =
    std::variant<Tensor<double>, Tensor<float>, Tensor<std::uint16_t>>;

/// Widens any supported payload to doubles. Unsigned 16-bit data is assumed
/// to hold 8-bit pixel intensities and is scaled by 1/255 on ingest.
inline Tensor<double> to_double(const AnyTensor& any) {
  return std::visit(
      [](const auto& t) -> Tensor<double> {
        using Elem = typename std::decay_t<decltype(t)>;
        std::vector<double> out(t.size());
        if constexpr (std::is_same_v<Elem, Tensor<std::uint16_t>>) {
          for (std::size_t i = 0; i < t.size(); ++i)
            out[i] = static_cast<double>(t[i]) / 255.0;
        } else {
          for (std::size_t i = 0; i < t.size(); ++i)
            out[i] = static_cast<double>(t[i]);
        }
        return Tensor<double>(t.dims(), std::move(out));
      },
      any);
}

}  // namespace framesel

#endif  // FRAMESEL_TENSOR_HPP
