#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "scribble/geometry.hpp"

namespace scribble {

/// Interleaved 8-bit RGB frame, row-major.
class RgbImage {
public:
    RgbImage() = default;
    RgbImage(int width, int height, Rgba fill = {0, 0, 0, 255})
        : width_(width), height_(height), data_(static_cast<std::size_t>(width) * height * 3) {
        for (std::size_t i = 0; i < data_.size(); i += 3) {
            data_[i] = fill.r;
            data_[i + 1] = fill.g;
            data_[i + 2] = fill.b;
        }
    }

    int width() const { return width_; }
    int height() const { return height_; }
    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    std::uint8_t* pixel(int x, int y) { return data_.data() + (static_cast<std::size_t>(y) * width_ + x) * 3; }
    const std::uint8_t* pixel(int x, int y) const {
        return data_.data() + (static_cast<std::size_t>(y) * width_ + x) * 3;
    }

    void set(int x, int y, Rgba c) {
        auto* p = pixel(x, y);
        p[0] = c.r;
        p[1] = c.g;
        p[2] = c.b;
    }

    std::vector<std::uint8_t>& bytes() { return data_; }
    const std::vector<std::uint8_t>& bytes() const { return data_; }

    friend bool operator==(const RgbImage&, const RgbImage&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Row-major boolean grid with the dimensions of its source frame.
class BinaryMask {
public:
    BinaryMask() = default;
    BinaryMask(int width, int height)
        : width_(width), height_(height), bits_(static_cast<std::size_t>(width) * height, 0) {}

    int width() const { return width_; }
    int height() const { return height_; }
    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    bool get(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
    /// Out-of-bounds reads as unset.
    bool at(int x, int y) const { return contains(x, y) && get(x, y); }
    void set(int x, int y, bool v = true) { bits_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0; }

    std::size_t count() const;
    bool empty() const { return count() == 0; }

    std::vector<std::uint8_t>& bits() { return bits_; }
    const std::vector<std::uint8_t>& bits() const { return bits_; }

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

}  // namespace scribble
