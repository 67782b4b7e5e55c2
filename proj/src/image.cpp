#include "elldet/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <numbers>

#include <png.h>

#include "elldet/error.hpp"
#include "elldet/geometry.hpp"

namespace elldet {

namespace {

std::vector<unsigned char> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Header tokenizer for netpbm: whitespace separated, '#' starts a comment.
class PnmHeader {
public:
    explicit PnmHeader(const std::vector<unsigned char>& buf) : buf_(buf), pos_(2) {}

    long next_int() {
        skip_space();
        if (pos_ >= buf_.size() || !std::isdigit(buf_[pos_]))
            throw Error(ErrorCode::CorruptFile, "malformed graymap header");
        long v = 0;
        while (pos_ < buf_.size() && std::isdigit(buf_[pos_])) {
            v = v * 10 + (buf_[pos_++] - '0');
            if (v > 1'000'000'000) throw Error(ErrorCode::CorruptFile, "header value out of range");
        }
        return v;
    }

    std::size_t pos() const { return pos_; }

private:
    void skip_space() {
        while (pos_ < buf_.size()) {
            if (buf_[pos_] == '#') {
                while (pos_ < buf_.size() && buf_[pos_] != '\n') ++pos_;
            } else if (std::isspace(buf_[pos_])) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    const std::vector<unsigned char>& buf_;
    std::size_t pos_;
};

GrayImage decode_pgm(const std::vector<unsigned char>& buf) {
    const bool ascii = buf[1] == '2';
    PnmHeader h(buf);
    const long w = h.next_int();
    const long ht = h.next_int();
    const long maxval = h.next_int();
    if (maxval < 1 || maxval > 255) throw Error(ErrorCode::UnsupportedFormat, "graymap maxval must be 1..255");
    if (w <= 0 || ht <= 0 || w * ht > (1L << 28)) throw Error(ErrorCode::CorruptFile, "bad graymap dimensions");

    GrayImage img{int(w), int(ht)};
    const std::size_t n = img.data.size();
    if (ascii) {
        PnmHeader body(buf);
        for (int i = 0; i < 3; ++i) body.next_int();
        for (std::size_t i = 0; i < n; ++i) {
            long v;
            try {
                v = body.next_int();
            } catch (const Error&) {
                throw Error(ErrorCode::CorruptFile, "graymap has fewer samples than width*height");
            }
            if (v > maxval) throw Error(ErrorCode::CorruptFile, "sample exceeds maxval");
            img.data[i] = double(v);
        }
    } else {
        // Exactly one whitespace byte separates maxval from the raster.
        const std::size_t start = h.pos() + 1;
        if (start > buf.size() || buf.size() - start < n)
            throw Error(ErrorCode::CorruptFile, "graymap raster shorter than width*height");
        for (std::size_t i = 0; i < n; ++i) img.data[i] = double(buf[start + i]);
    }
    return img;
}

GrayImage decode_png(const std::vector<unsigned char>& buf) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, buf.data(), buf.size()))
        throw Error(ErrorCode::CorruptFile, std::string("png: ") + image.message);
    if (image.format & PNG_FORMAT_FLAG_LINEAR) {
        png_image_free(&image);
        throw Error(ErrorCode::UnsupportedFormat, "only 8-bit PNG is supported");
    }
    image.format = PNG_FORMAT_RGB;
    std::vector<png_byte> rgb(PNG_IMAGE_SIZE(image));
    png_color white{255, 255, 255};
    if (!png_image_finish_read(&image, &white, rgb.data(), 0, nullptr)) {
        std::string msg = image.message;
        png_image_free(&image);
        throw Error(ErrorCode::CorruptFile, "png: " + msg);
    }
    GrayImage img{int(image.width), int(image.height)};
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        const double y = 0.299 * rgb[3 * i] + 0.587 * rgb[3 * i + 1] + 0.114 * rgb[3 * i + 2];
        img.data[i] = std::clamp(std::round(y), 0.0, 255.0);
    }
    return img;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    if (s.size() < suffix.size()) return false;
    return std::equal(suffix.rbegin(), suffix.rend(), s.rbegin(),
                      [](char a, char b) { return std::tolower(a) == std::tolower(b); });
}

std::uint8_t to_byte(double v) { return std::uint8_t(std::clamp(std::lround(v), 0L, 255L)); }

int mirror(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * n;
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - 1 - i;
}

}  // namespace

void RgbImage::set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    if (x < 0 || y < 0 || x >= width || y >= height) return;
    const std::size_t k = (std::size_t(y) * width + x) * 3;
    rgb[k] = r;
    rgb[k + 1] = g;
    rgb[k + 2] = b;
}

GrayImage load_grayscale(const std::string& path) {
    const auto buf = read_file(path);
    GrayImage img;
    if (buf.size() >= 2 && buf[0] == 'P' && (buf[1] == '2' || buf[1] == '5')) {
        img = decode_pgm(buf);
    } else if (buf.size() >= 8 && png_sig_cmp(buf.data(), 0, 8) == 0) {
        img = decode_png(buf);
    } else {
        throw Error(ErrorCode::UnsupportedFormat, path + " is neither a P2/P5 graymap nor a PNG");
    }
    if (img.width < kMinImageSide || img.height < kMinImageSide)
        throw Error(ErrorCode::TooSmall, "image must be at least 8x8");
    return img;
}

void save_pgm(const GrayImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
    std::vector<char> bytes(img.data.size());
    std::transform(img.data.begin(), img.data.end(), bytes.begin(), [](double v) { return char(to_byte(v)); });
    out.write(bytes.data(), std::streamsize(bytes.size()));
    if (!out) throw Error(ErrorCode::IoError, "failed writing " + path);
}

void save_rgb(const RgbImage& img, const std::string& path) {
    if (ends_with(path, ".png")) {
        png_image image{};
        image.version = PNG_IMAGE_VERSION;
        image.width = png_uint_32(img.width);
        image.height = png_uint_32(img.height);
        image.format = PNG_FORMAT_RGB;
        if (!png_image_write_to_file(&image, path.c_str(), 0, img.rgb.data(), 0, nullptr))
            throw Error(ErrorCode::IoError, std::string("png write: ") + image.message);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.rgb.data()), std::streamsize(img.rgb.size()));
    if (!out) throw Error(ErrorCode::IoError, "failed writing " + path);
}

RgbImage to_rgb(const GrayImage& img) {
    RgbImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        const auto v = to_byte(img.data[i]);
        out.rgb[3 * i] = out.rgb[3 * i + 1] = out.rgb[3 * i + 2] = v;
    }
    return out;
}

GrayImage gaussian_downscale(const GrayImage& img, double scale) {
    if (!(scale > 0.0 && scale <= 1.0)) throw Error(ErrorCode::InvalidArgument, "scale must be in (0, 1]");
    if (scale == 1.0) return img;

    const double sigma = 0.6 / scale;
    const int radius = int(std::ceil(sigma * std::sqrt(6.0 * std::log(10.0))));
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) sum += k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    for (double& v : k) v /= sum;

    const int w = img.width, h = img.height;
    GrayImage tmp(w, h), blur(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) acc += k[i + radius] * img.at(mirror(x + i, w), y);
            tmp.at(x, y) = acc;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) acc += k[i + radius] * tmp.at(x, mirror(y + i, h));
            blur.at(x, y) = acc;
        }

    const int ow = int(std::ceil(scale * w));
    const int oh = int(std::ceil(scale * h));
    GrayImage out(ow, oh);
    for (int y = 0; y < oh; ++y) {
        const double sy = std::min(y / scale, double(h - 1));
        const int y0 = std::min(int(sy), h - 1), y1 = std::min(y0 + 1, h - 1);
        const double fy = sy - y0;
        for (int x = 0; x < ow; ++x) {
            const double sx = std::min(x / scale, double(w - 1));
            const int x0 = std::min(int(sx), w - 1), x1 = std::min(x0 + 1, w - 1);
            const double fx = sx - x0;
            out.at(x, y) = (1 - fy) * ((1 - fx) * blur.at(x0, y0) + fx * blur.at(x1, y0)) +
                           fy * ((1 - fx) * blur.at(x0, y1) + fx * blur.at(x1, y1));
        }
    }
    return out;
}

double default_quant_threshold() { return 2.0 / std::sin(deg2rad(22.5)); }

GradientMap compute_gradient_map(const GrayImage& img, double quant_threshold) {
    GradientMap g;
    g.width = img.width;
    g.height = img.height;
    const std::size_t n = img.data.size();
    g.gx.assign(n, 0.0);
    g.gy.assign(n, 0.0);
    g.magnitude.assign(n, 0.0);
    g.gradient_angle.assign(n, 0.0);
    g.level_line_angle.assign(n, 0.0);
    g.valid.assign(n, 0);

    for (int y = 0; y + 1 < img.height; ++y)
        for (int x = 0; x + 1 < img.width; ++x) {
            const double A = img.at(x, y), B = img.at(x + 1, y);
            const double C = img.at(x, y + 1), D = img.at(x + 1, y + 1);
            const double gx = 0.5 * ((B - A) + (D - C));
            const double gy = 0.5 * ((C + D) - (A + B));
            const std::size_t i = g.index(x, y);
            g.gx[i] = gx;
            g.gy[i] = gy;
            g.magnitude[i] = std::hypot(gx, gy);
            const double ga = wrap_angle(rad2deg(std::atan2(gy, gx)));
            g.gradient_angle[i] = ga;
            g.level_line_angle[i] = wrap_angle(ga - 90.0);
            g.valid[i] = (g.magnitude[i] > 0.0 && g.magnitude[i] >= quant_threshold) ? 1 : 0;
        }

    g.edge.assign(n, 0);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const std::size_t i = g.index(x, y);
            if (!g.valid[i]) continue;
            // Neighbour offset along the gradient, quantized to 45 degrees.
            const int q = int(std::lround(g.gradient_angle[i] / 45.0)) % 4;
            const int dx = q == 2 ? 0 : 1;
            const int dy = q == 0 ? 0 : (q == 3 ? -1 : 1);
            const double m = g.magnitude[i];
            const double fwd = g.in_bounds(x + dx, y + dy) ? g.magnitude[g.index(x + dx, y + dy)] : 0.0;
            const double back = g.in_bounds(x - dx, y - dy) ? g.magnitude[g.index(x - dx, y - dy)] : 0.0;
            g.edge[i] = (m > back && m >= fwd) ? 1 : 0;
        }
    return g;
}

}  // namespace elldet
