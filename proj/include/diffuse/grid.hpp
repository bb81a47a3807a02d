#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "diffuse/errors.hpp"

namespace diffuse {

using Shape = std::vector<int>;

inline std::size_t shape_numel(const Shape& shape) {
    std::size_t n = 1;
    for (int d : shape) {
        if (d <= 0) throw ShapeError("grid shape entries must be positive");
        n *= static_cast<std::size_t>(d);
    }
    if (shape.empty()) throw ShapeError("grid shape must be nonempty");
    return n;
}

inline std::string shape_str(const Shape& shape) {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

// Dense row-major tensor of 64-bit reals. Entries are checked finite on
// construction; shape product must equal the data length.
class Grid {
public:
    Grid() = default;

    Grid(Shape shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
        if (shape_numel(shape_) != data_.size())
            throw ShapeError("grid data length " + std::to_string(data_.size()) +
                             " does not match shape " + shape_str(shape_));
        check_finite();
    }

    static Grid zeros(Shape shape) {
        std::size_t n = shape_numel(shape);
        return Grid(unchecked{}, std::move(shape), std::vector<double>(n, 0.0));
    }

    static Grid constant(Shape shape, double value) {
        if (!std::isfinite(value)) throw ParamError("grid fill value must be finite");
        std::size_t n = shape_numel(shape);
        return Grid(unchecked{}, std::move(shape), std::vector<double>(n, value));
    }

    const Shape& shape() const { return shape_; }
    std::size_t numel() const { return data_.size(); }
    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

    double operator[](std::size_t i) const { return data_[i]; }
    double& operator[](std::size_t i) { return data_[i]; }

    // 2-D accessors; valid only for rank-2 grids.
    int rows() const { return shape_.at(0); }
    int cols() const { return shape_.at(1); }
    double at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols() + c]; }
    double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols() + c]; }

    bool same_shape(const Grid& other) const { return shape_ == other.shape_; }

    void check_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) throw ParamError("grid entries must be finite");
    }

    // Internal fast path for results of arithmetic known to be finite.
    struct unchecked {};
    Grid(unchecked, Shape shape, std::vector<double> data)
        : shape_(std::move(shape)), data_(std::move(data)) {}

private:
    Shape shape_;
    std::vector<double> data_;
};

inline void require_same_shape(const Grid& a, const Grid& b, const char* what) {
    if (!a.same_shape(b))
        throw ShapeError(std::string(what) + ": shape mismatch " + shape_str(a.shape()) +
                         " vs " + shape_str(b.shape()));
}

}  // namespace diffuse
