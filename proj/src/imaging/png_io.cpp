// Copyright 2026 The deepscan Authors
// SPDX-License-Identifier: Apache-2.0

#include "deepscan/imaging/png_io.hpp"

#include <png.h>

#include "deepscan/error.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

namespace deepscan {
namespace {

struct ImageGuard {
    png_image* img;
    ~ImageGuard() { png_image_free(img); }
};

png_image make_header(const RasterImage& img) {
    png_image header;
    std::memset(&header, 0, sizeof header);
    header.version = PNG_IMAGE_VERSION;
    header.width = static_cast<png_uint_32>(img.width());
    header.height = static_cast<png_uint_32>(img.height());
    header.format = PNG_FORMAT_RGB;
    return header;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const RasterImage& img) {
    if (img.empty()) throw InvalidInput("cannot encode an empty image");
    png_image header = make_header(img);
    ImageGuard guard{&header};
    header.flags |= PNG_IMAGE_FLAG_FAST;
    png_alloc_size_t size = PNG_IMAGE_PNG_SIZE_MAX(header);
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&header, out.data(), &size, 0, img.data().data(), 0, nullptr)) {
        throw std::runtime_error(std::string("png encode: ") + header.message);
    }
    out.resize(size);
    return out;
}

RasterImage decode_png(std::span<const std::uint8_t> bytes) {
    png_image header;
    std::memset(&header, 0, sizeof header);
    header.version = PNG_IMAGE_VERSION;
    ImageGuard guard{&header};
    if (!png_image_begin_read_from_memory(&header, bytes.data(), bytes.size())) {
        throw InvalidInput(std::string("png decode: ") + header.message);
    }
    header.format = PNG_FORMAT_RGB;
    std::vector<std::uint8_t> data(PNG_IMAGE_SIZE(header));
    if (!png_image_finish_read(&header, nullptr, data.data(), 0, nullptr)) {
        throw InvalidInput(std::string("png decode: ") + header.message);
    }
    return RasterImage(static_cast<int>(header.width), static_cast<int>(header.height), std::move(data));
}

RasterImage read_png(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open " + path.string());
    std::vector<std::uint8_t> bytes(std::filesystem::file_size(path));
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!in) throw InvalidInput("cannot read " + path.string());
    return decode_png(bytes);
}

void write_png(const std::filesystem::path& path, const RasterImage& img) {
    const auto bytes = encode_png(img);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace deepscan
