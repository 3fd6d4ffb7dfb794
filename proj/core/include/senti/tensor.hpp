#pragma once

#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

namespace senti {

/// Non-owning row-major matrix view.
template <class T>
struct MatViewT {
  std::size_t rows = 0;
  std::size_t cols = 0;
  T* data = nullptr;

  T& at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<T> row(std::size_t r) const { return {data + r * cols, cols}; }
  std::span<T> flat() const { return {data, rows * cols}; }
  std::size_t size() const { return rows * cols; }

  operator MatViewT<const T>() const
    requires(!std::is_const_v<T>)
  {
    return {rows, cols, data};
  }
};

using MatView = MatViewT<double>;
using ConstMatView = MatViewT<const double>;

/// Owning row-major matrix of doubles, zero-initialized.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

  MatView view() { return {rows, cols, values.data()}; }
  ConstMatView view() const { return {rows, cols, values.data()}; }
};

}  // namespace senti
