#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace elldet {

/// Row-major grayscale intensities in [0, 255].
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    GrayImage() = default;
    GrayImage(int w, int h, double fill = 0.0) : width(w), height(h), data(std::size_t(w) * h, fill) {}

    double at(int x, int y) const { return data[std::size_t(y) * width + x]; }
    double& at(int x, int y) { return data[std::size_t(y) * width + x]; }
};

struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // 3 bytes per pixel

    RgbImage() = default;
    RgbImage(int w, int h) : width(w), height(h), rgb(std::size_t(w) * h * 3, 0) {}
    void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);
};

inline constexpr int kMinImageSide = 8;

/// Reads P2/P5 graymaps (values kept as stored, maxval <= 255) and 8-bit PNGs
/// (color converted with 0.299/0.587/0.114 luma and rounded).
/// Throws UnsupportedFormat, CorruptFile, TooSmall or IoError.
GrayImage load_grayscale(const std::string& path);

/// Binary P5; intensities are rounded and clamped to [0, 255].
void save_pgm(const GrayImage& img, const std::string& path);
/// Writes PNG when the path ends in ".png", binary PPM otherwise.
void save_rgb(const RgbImage& img, const std::string& path);

RgbImage to_rgb(const GrayImage& img);

/// Gaussian blur (sigma = 0.6 / scale, mirrored borders) followed by bilinear
/// resampling to ceil(scale * dim). Output pixel i samples input coordinate i / scale.
GrayImage gaussian_downscale(const GrayImage& img, double scale);

/// Quantization bound 2 / sin(22.5 deg).
double default_quant_threshold();

struct GradientMap {
    int width = 0;
    int height = 0;
    std::vector<double> gx;
    std::vector<double> gy;
    std::vector<double> magnitude;
    std::vector<double> gradient_angle;    // degrees [0, 360)
    std::vector<double> level_line_angle;  // gradient_angle - 90, degrees [0, 360)
    std::vector<std::uint8_t> valid;
    std::vector<std::uint8_t> edge;  // valid and a magnitude maximum along the gradient

    std::size_t index(int x, int y) const { return std::size_t(y) * width + x; }
    bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
    bool is_valid(int x, int y) const { return in_bounds(x, y) && valid[index(x, y)] != 0; }
};

/// 2x2 cell differences; pixel (x, y) uses (x..x+1, y..y+1). The last row and
/// column have no full cell and are invalid. `edge` thins the valid band by
/// non-maximum suppression across the gradient direction.
GradientMap compute_gradient_map(const GrayImage& img, double quant_threshold = default_quant_threshold());

}  // namespace elldet
