#include "greenforge/image_io.hpp"

#include <bit>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

#include <jpeglib.h>
#include <png.h>

namespace greenforge {
namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.string().c_str(), mode));
    if (!f) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    return f;
}

// ---------------------------------------------------------------- PNG read

RasterImage load_png(std::FILE* fp, const std::filesystem::path& path) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("png decoder allocation failed for '" + path.string() + "'");
    }
    std::vector<unsigned char> rowbuf;
    RasterImage img;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError("failed to decode PNG '" + path.string() + "'");
    }

    png_init_io(png, fp);
    png_read_info(png, info);

    const png_byte color_type = png_get_color_type(png, info);
    const png_byte bit_depth = png_get_bit_depth(png, info);

    if (color_type == PNG_COLOR_TYPE_PALETTE) {
        png_set_palette_to_rgb(png);
    }
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
        png_set_expand_gray_1_2_4_to_8(png);
    }
    if (png_get_valid(png, info, PNG_INFO_tRNS)) {
        png_set_tRNS_to_alpha(png);
    }
    png_set_strip_alpha(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
        png_set_gray_to_rgb(png);
    }
    if (bit_depth == 16 && std::endian::native == std::endian::little) {
        png_set_swap(png);
    }
    png_read_update_info(png, info);

    const int width = int(png_get_image_width(png, info));
    const int height = int(png_get_image_height(png, info));
    const int out_depth = png_get_bit_depth(png, info);
    const int channels = png_get_channels(png, info);
    if (channels != 3 || (out_depth != 8 && out_depth != 16)) {
        longjmp(png_jmpbuf(png), 1);
    }

    img = RasterImage(width, height);
    rowbuf.resize(std::size_t(width) * 3 * (out_depth / 8));
    for (int y = 0; y < height; ++y) {
        png_read_row(png, rowbuf.data(), nullptr);
        if (out_depth == 8) {
            const unsigned char* p = rowbuf.data();
            for (int x = 0; x < width; ++x) {
                img.plane(Channel::Red).at(x, y) = float(p[0]) / 255.0f;
                img.plane(Channel::Green).at(x, y) = float(p[1]) / 255.0f;
                img.plane(Channel::Blue).at(x, y) = float(p[2]) / 255.0f;
                p += 3;
            }
        } else {
            const std::uint16_t* p = reinterpret_cast<const std::uint16_t*>(rowbuf.data());
            for (int x = 0; x < width; ++x) {
                img.plane(Channel::Red).at(x, y) = float(p[0]) / 65535.0f;
                img.plane(Channel::Green).at(x, y) = float(p[1]) / 65535.0f;
                img.plane(Channel::Blue).at(x, y) = float(p[2]) / 65535.0f;
                p += 3;
            }
        }
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

// --------------------------------------------------------------- JPEG read

struct JpegErr {
    jpeg_error_mgr pub;
    std::jmp_buf jb;
};

void jpeg_error_trampoline(j_common_ptr cinfo) {
    JpegErr* err = reinterpret_cast<JpegErr*>(cinfo->err);
    longjmp(err->jb, 1);
}

RasterImage load_jpeg(std::FILE* fp, const std::filesystem::path& path) {
    jpeg_decompress_struct cinfo;
    JpegErr jerr;
    cinfo.err = jpeg_std_error(&jerr.pub);
    jerr.pub.error_exit = jpeg_error_trampoline;

    std::vector<unsigned char> rowbuf;
    RasterImage img;

    if (setjmp(jerr.jb)) {
        jpeg_destroy_decompress(&cinfo);
        throw FormatError("failed to decode JPEG '" + path.string() + "'");
    }

    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, fp);
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);

    const int width = int(cinfo.output_width);
    const int height = int(cinfo.output_height);
    if (cinfo.output_components != 3 || cinfo.data_precision != 8) {
        longjmp(jerr.jb, 1);
    }

    img = RasterImage(width, height);
    rowbuf.resize(std::size_t(width) * 3);
    unsigned char* rows[1] = {rowbuf.data()};
    int y = 0;
    while (cinfo.output_scanline < cinfo.output_height) {
        jpeg_read_scanlines(&cinfo, rows, 1);
        const unsigned char* p = rowbuf.data();
        for (int x = 0; x < width; ++x) {
            img.plane(Channel::Red).at(x, y) = float(p[0]) / 255.0f;
            img.plane(Channel::Green).at(x, y) = float(p[1]) / 255.0f;
            img.plane(Channel::Blue).at(x, y) = float(p[2]) / 255.0f;
            p += 3;
        }
        ++y;
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return img;
}

// ---------------------------------------------------------------- PNG write

void write_png(const std::filesystem::path& path, int width, int height,
               int channels, int depth, const unsigned char* const* rows) {
    FilePtr fp = open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoError("png encoder allocation failed for '" + path.string() + "'");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("failed to write PNG '" + path.string() + "'");
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, png_uint_32(width), png_uint_32(height), depth,
                 channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    if (depth == 16 && std::endian::native == std::endian::little) {
        png_set_swap(png);
    }
    for (int y = 0; y < height; ++y) {
        png_write_row(png, const_cast<png_bytep>(rows[y]));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

} // namespace

RasterImage load_image(const std::filesystem::path& path) {
    FilePtr fp = open_file(path, "rb");
    unsigned char magic[4] = {0, 0, 0, 0};
    const std::size_t got = std::fread(magic, 1, sizeof(magic), fp.get());
    std::rewind(fp.get());
    if (got >= 4 && magic[0] == 0x89 && magic[1] == 'P' && magic[2] == 'N' && magic[3] == 'G') {
        return load_png(fp.get(), path);
    }
    if (got >= 3 && magic[0] == 0xFF && magic[1] == 0xD8 && magic[2] == 0xFF) {
        return load_jpeg(fp.get(), path);
    }
    throw FormatError("'" + path.string() + "' is neither PNG nor JPEG");
}

void save_image(const RasterImage& img, const std::filesystem::path& path, int depth) {
    if (depth != 8 && depth != 16) {
        throw DomainError("save_image: depth must be 8 or 16");
    }
    if (img.width() < 1 || img.height() < 1) {
        throw DomainError("save_image: empty image");
    }
    const int w = img.width();
    const int h = img.height();
    const std::size_t rowbytes = std::size_t(w) * 3 * (depth / 8);
    std::vector<unsigned char> buf(rowbytes * std::size_t(h));
    std::vector<const unsigned char*> rows(static_cast<std::size_t>(h));
    for (int y = 0; y < h; ++y) {
        unsigned char* row = buf.data() + rowbytes * std::size_t(y);
        rows[std::size_t(y)] = row;
        if (depth == 8) {
            for (int x = 0; x < w; ++x) {
                for (int c = 0; c < 3; ++c) {
                    const float v = img.at(Channel(c), x, y);
                    row[x * 3 + c] = (unsigned char)std::lround(v * 255.0f);
                }
            }
        } else {
            std::uint16_t* row16 = reinterpret_cast<std::uint16_t*>(row);
            for (int x = 0; x < w; ++x) {
                for (int c = 0; c < 3; ++c) {
                    const float v = img.at(Channel(c), x, y);
                    row16[x * 3 + c] = (std::uint16_t)std::lround(v * 65535.0f);
                }
            }
        }
    }
    write_png(path, w, h, 3, depth, rows.data());
}

void save_mask_png(const GrayField& mask, const std::filesystem::path& path) {
    if (mask.empty()) {
        throw DomainError("save_mask_png: empty mask");
    }
    const int w = mask.width();
    const int h = mask.height();
    std::vector<unsigned char> buf(std::size_t(w) * std::size_t(h));
    std::vector<const unsigned char*> rows(static_cast<std::size_t>(h));
    for (int y = 0; y < h; ++y) {
        unsigned char* row = buf.data() + std::size_t(y) * std::size_t(w);
        rows[std::size_t(y)] = row;
        for (int x = 0; x < w; ++x) {
            row[x] = mask.at(x, y) > 0.5f ? 255 : 0;
        }
    }
    write_png(path, w, h, 1, 8, rows.data());
}

GrayField load_mask_png(const std::filesystem::path& path) {
    const RasterImage img = load_image(path);
    GrayField mask(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            mask.at(x, y) = img.at(Channel::Red, x, y) > 0.5f ? 1.0f : 0.0f;
        }
    }
    return mask;
}

} // namespace greenforge
