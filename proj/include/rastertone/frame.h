#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rastertone {

// One grayscale frame of the display, row-major 8-bit luminance.
struct FrameBitmap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> luma;

    FrameBitmap() = default;
    FrameBitmap(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), luma(static_cast<std::size_t>(w) * h, fill) {}

    std::uint8_t at(int x, int y) const {
        return luma[static_cast<std::size_t>(y) * width + x];
    }
    void set(int x, int y, std::uint8_t v) {
        luma[static_cast<std::size_t>(y) * width + x] = v;
    }
    const std::uint8_t* row(int y) const {
        return luma.data() + static_cast<std::size_t>(y) * width;
    }
    std::uint8_t* row(int y) {
        return luma.data() + static_cast<std::size_t>(y) * width;
    }

    bool all_black() const;
};

// Binary PGM ("P5", maxval 255) import/export.
void write_pgm(const FrameBitmap& frame, std::ostream& out);
void write_pgm(const FrameBitmap& frame, const std::string& path);
FrameBitmap read_pgm(std::istream& in);
FrameBitmap read_pgm(const std::string& path);

}  // namespace rastertone
