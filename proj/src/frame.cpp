#include "rastertone/frame.h"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace rastertone {

bool FrameBitmap::all_black() const {
    return std::all_of(luma.begin(), luma.end(),
                       [](std::uint8_t v) { return v == 0; });
}

void write_pgm(const FrameBitmap& frame, std::ostream& out) {
    out << "P5\n" << frame.width << " " << frame.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(frame.luma.data()),
              static_cast<std::streamsize>(frame.luma.size()));
}

void write_pgm(const FrameBitmap& frame, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    write_pgm(frame, f);
    if (!f) throw std::runtime_error("write failed: " + path);
}

namespace {

// Skips PGM whitespace and '#' comment lines, then reads one token.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (!isspace(c)) {
            tok.push_back(static_cast<char>(c));
            while ((c = in.peek()) != EOF && !isspace(c)) {
                tok.push_back(static_cast<char>(in.get()));
            }
            return tok;
        }
    }
    return tok;
}

}  // namespace

FrameBitmap read_pgm(std::istream& in) {
    if (next_token(in) != "P5") throw std::runtime_error("not a binary PGM (missing P5 magic)");
    int w = 0, h = 0, maxval = 0;
    try {
        w = std::stoi(next_token(in));
        h = std::stoi(next_token(in));
        maxval = std::stoi(next_token(in));
    } catch (const std::exception&) {
        throw std::runtime_error("malformed PGM header");
    }
    if (w < 1 || h < 1) throw std::runtime_error("malformed PGM dimensions");
    if (maxval != 255) throw std::runtime_error("unsupported PGM maxval (want 255)");
    in.get();  // single whitespace after maxval
    FrameBitmap frame(w, h);
    in.read(reinterpret_cast<char*>(frame.luma.data()),
            static_cast<std::streamsize>(frame.luma.size()));
    if (in.gcount() != static_cast<std::streamsize>(frame.luma.size())) {
        throw std::runtime_error("truncated PGM pixel data");
    }
    return frame;
}

FrameBitmap read_pgm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    return read_pgm(f);
}

}  // namespace rastertone
