#include "pli/image_io.hpp"

#include "pli/error.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

namespace pli {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

RasterImage read_png(const std::string& path, FilePtr file) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) fail("png: failed to allocate read struct");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    fail("png: failed to allocate info struct");
  }
  std::vector<png_bytep> row_ptrs;
  RasterImage img;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail("png: failed to decode '" + path + "'");
  }
  png_init_io(png, file.get());
  png_read_info(png, info);

  const png_byte color_type = png_get_color_type(png, info);
  const png_byte bit_depth = png_get_bit_depth(png, info);
  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  img.width = static_cast<int>(png_get_image_width(png, info));
  img.height = static_cast<int>(png_get_image_height(png, info));
  img.channels = static_cast<int>(png_get_channels(png, info));
  if (img.channels != 1 && img.channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail("png: unsupported channel count in '" + path + "'");
  }
  img.data.resize(static_cast<std::size_t>(img.width) * img.height * img.channels);
  row_ptrs.resize(img.height);
  const std::size_t stride = static_cast<std::size_t>(img.width) * img.channels;
  for (int r = 0; r < img.height; ++r) row_ptrs[r] = img.data.data() + r * stride;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

int next_pnm_token(std::istream& in) {
  // Skips whitespace and '#' comments, returns a non-negative integer.
  while (in) {
    const int ch = in.peek();
    if (ch == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(ch)) {
      in.get();
    } else {
      break;
    }
  }
  int value = -1;
  in >> value;
  if (!in || value < 0) fail("pnm: malformed header");
  return value;
}

RasterImage read_pnm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open '" + path + "'");
  char magic[2] = {};
  in.read(magic, 2);
  if (magic[0] != 'P' || (magic[1] != '2' && magic[1] != '5' && magic[1] != '6')) {
    fail("pnm: unsupported magic in '" + path + "'");
  }
  const bool ascii = magic[1] == '2';
  const int channels = magic[1] == '6' ? 3 : 1;
  RasterImage img;
  img.width = next_pnm_token(in);
  img.height = next_pnm_token(in);
  const int maxval = next_pnm_token(in);
  if (img.width <= 0 || img.height <= 0) fail("pnm: bad dimensions in '" + path + "'");
  if (maxval <= 0 || maxval > 255) fail("pnm: only 8-bit samples supported in '" + path + "'");
  img.channels = channels;
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height * channels;
  img.data.resize(n);
  if (ascii) {
    for (std::size_t i = 0; i < n; ++i) {
      int v = next_pnm_token(in);
      if (v > maxval) fail("pnm: sample out of range in '" + path + "'");
      img.data[i] = static_cast<std::uint8_t>(v);
    }
  } else {
    in.get();  // single whitespace after maxval
    in.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(n));
    if (in.gcount() != static_cast<std::streamsize>(n)) fail("pnm: truncated data in '" + path + "'");
  }
  return img;
}

}  // namespace

RasterImage read_image(const std::string& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) fail("cannot open '" + path + "'");
  unsigned char header[8] = {};
  if (std::fread(header, 1, 8, file.get()) != 8) fail("cannot read header of '" + path + "'");
  std::rewind(file.get());
  if (png_sig_cmp(header, 0, 8) == 0) return read_png(path, std::move(file));
  if (header[0] == 'P' && (header[1] == '2' || header[1] == '5' || header[1] == '6')) {
    file.reset();
    return read_pnm(path);
  }
  fail("unrecognised image format in '" + path + "' (expected PNG or PGM/PPM)");
}

namespace {

void write_png_impl(const std::string& path, int width, int height, int channels,
                    const std::vector<std::uint8_t>& data) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) fail("cannot write '" + path + "'");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) fail("png: failed to allocate write struct");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    fail("png: failed to allocate info struct");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail("png: failed to encode '" + path + "'");
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
               channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  std::vector<png_bytep> rows(height);
  for (int r = 0; r < height; ++r) {
    rows[r] = const_cast<png_bytep>(data.data() + r * stride);
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

void write_png_gray(const std::string& path, const Image<std::uint8_t>& img) {
  const int h = static_cast<int>(img.rows());
  const int w = static_cast<int>(img.cols());
  std::vector<std::uint8_t> data(static_cast<std::size_t>(w) * h);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) data[static_cast<std::size_t>(r) * w + c] = img(r, c);
  write_png_impl(path, w, h, 1, data);
}

void write_png_rgb(const std::string& path, const Image<std::uint8_t>& r,
                   const Image<std::uint8_t>& g, const Image<std::uint8_t>& b) {
  if (r.rows() != g.rows() || r.rows() != b.rows() || r.cols() != g.cols() || r.cols() != b.cols()) {
    fail("png: channel size mismatch");
  }
  const int h = static_cast<int>(r.rows());
  const int w = static_cast<int>(r.cols());
  std::vector<std::uint8_t> data(static_cast<std::size_t>(w) * h * 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = (static_cast<std::size_t>(y) * w + x) * 3;
      data[i] = r(y, x);
      data[i + 1] = g(y, x);
      data[i + 2] = b(y, x);
    }
  }
  write_png_impl(path, w, h, 3, data);
}

void write_pgm(const std::string& path, const Image<std::uint8_t>& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot write '" + path + "'");
  out << "P5\n" << img.cols() << " " << img.rows() << "\n255\n";
  for (Eigen::Index r = 0; r < img.rows(); ++r)
    for (Eigen::Index c = 0; c < img.cols(); ++c) out.put(static_cast<char>(img(r, c)));
  if (!out) fail("failed writing '" + path + "'");
}

void write_pgm16(const std::string& path, const Image<std::uint16_t>& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot write '" + path + "'");
  out << "P5\n" << img.cols() << " " << img.rows() << "\n65535\n";
  for (Eigen::Index r = 0; r < img.rows(); ++r) {
    for (Eigen::Index c = 0; c < img.cols(); ++c) {
      const std::uint16_t v = img(r, c);
      out.put(static_cast<char>(v >> 8));
      out.put(static_cast<char>(v & 0xFF));
    }
  }
  if (!out) fail("failed writing '" + path + "'");
}

}  // namespace pli
