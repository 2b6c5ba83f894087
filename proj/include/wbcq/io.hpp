#pragma once

// PNG and TIFF raster I/O. Link against libpng and libtiff when including
// this header.

#include <wbcq/filters.hpp>
#include <wbcq/image.hpp>

#include <png.h>
#include <tiffio.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wbcq {

class IoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::array<unsigned char, 4> magic(const std::filesystem::path& path)
{
  std::array<unsigned char, 4> m{};
  std::ifstream in{path, std::ios::binary};
  if (!in)
    throw IoError{"cannot open " + path.string()};
  in.read(reinterpret_cast<char*>(m.data()), m.size());
  return m;
}

inline GrayImage read_png(const std::filesystem::path& path)
{
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str()))
    throw IoError{path.string() + ": " + image.message};
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    png_image_free(&image);
    throw IoError{path.string() + ": " + image.message};
  }
  const int w = static_cast<int>(image.width), h = static_cast<int>(image.height);
  if (!color)
    return GrayImage{w, h, std::vector<std::uint8_t>(buffer.begin(), buffer.end())};
  RgbImage rgb{w, h};
  for (std::size_t i = 0; i < rgb.size(); ++i)
    rgb.pixels()[i] = {buffer[3 * i], buffer[3 * i + 1], buffer[3 * i + 2]};
  return to_grayscale(rgb);
}

struct TiffCloser
{
  void operator()(TIFF* t) const noexcept { TIFFClose(t); }
};

inline GrayImage read_tiff(const std::filesystem::path& path)
{
  TIFFSetWarningHandler(nullptr);
  std::unique_ptr<TIFF, TiffCloser> tif{TIFFOpen(path.string().c_str(), "r")};
  if (!tif)
    throw IoError{"cannot decode TIFF " + path.string()};
  std::uint32_t w = 0, h = 0;
  std::uint16_t bps = 8, spp = 1, planar = PLANARCONFIG_CONTIG;
  TIFFGetField(tif.get(), TIFFTAG_IMAGEWIDTH, &w);
  TIFFGetField(tif.get(), TIFFTAG_IMAGELENGTH, &h);
  TIFFGetFieldDefaulted(tif.get(), TIFFTAG_BITSPERSAMPLE, &bps);
  TIFFGetFieldDefaulted(tif.get(), TIFFTAG_SAMPLESPERPIXEL, &spp);
  TIFFGetFieldDefaulted(tif.get(), TIFFTAG_PLANARCONFIG, &planar);
  if (w == 0 || h == 0)
    throw IoError{path.string() + ": zero-sized TIFF"};
  if (bps != 8)
    throw IoError{path.string() + ": only 8-bit TIFF is supported"};

  if (spp == 1 && planar == PLANARCONFIG_CONTIG) {
    GrayImage out{static_cast<int>(w), static_cast<int>(h)};
    for (std::uint32_t y = 0; y < h; ++y)
      if (TIFFReadScanline(tif.get(), &out(0, static_cast<int>(y)), y) < 0)
        throw IoError{path.string() + ": TIFF read failed"};
    return out;
  }
  std::vector<std::uint32_t> raster(static_cast<std::size_t>(w) * h);
  if (!TIFFReadRGBAImageOriented(tif.get(), w, h, raster.data(), ORIENTATION_TOPLEFT, 0))
    throw IoError{path.string() + ": TIFF read failed"};
  RgbImage rgb{static_cast<int>(w), static_cast<int>(h)};
  for (std::size_t i = 0; i < raster.size(); ++i)
    rgb.pixels()[i] = {static_cast<std::uint8_t>(TIFFGetR(raster[i])),
                       static_cast<std::uint8_t>(TIFFGetG(raster[i])),
                       static_cast<std::uint8_t>(TIFFGetB(raster[i]))};
  return to_grayscale(rgb);
}

}  // namespace detail

/// Decodes an 8-bit grayscale or RGB PNG/TIFF into a grayscale image.
inline GrayImage read_image(const std::filesystem::path& path)
{
  const auto m = detail::magic(path);
  if (m[0] == 0x89 && m[1] == 'P' && m[2] == 'N' && m[3] == 'G')
    return detail::read_png(path);
  if ((m[0] == 'I' && m[1] == 'I' && m[2] == 42 && m[3] == 0) ||
      (m[0] == 'M' && m[1] == 'M' && m[2] == 0 && m[3] == 42))
    return detail::read_tiff(path);
  throw IoError{path.string() + ": not a PNG or TIFF file"};
}

inline void write_png(const std::filesystem::path& path, const GrayImage& img)
{
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, img.pixels().data(), 0,
                               nullptr))
    throw IoError{path.string() + ": " + image.message};
}

inline void write_tiff(const std::filesystem::path& path, const GrayImage& img)
{
  std::unique_ptr<TIFF, detail::TiffCloser> tif{TIFFOpen(path.string().c_str(), "w")};
  if (!tif)
    throw IoError{"cannot create " + path.string()};
  TIFFSetField(tif.get(), TIFFTAG_IMAGEWIDTH, static_cast<std::uint32_t>(img.width()));
  TIFFSetField(tif.get(), TIFFTAG_IMAGELENGTH, static_cast<std::uint32_t>(img.height()));
  TIFFSetField(tif.get(), TIFFTAG_BITSPERSAMPLE, 8);
  TIFFSetField(tif.get(), TIFFTAG_SAMPLESPERPIXEL, 1);
  TIFFSetField(tif.get(), TIFFTAG_PHOTOMETRIC, PHOTOMETRIC_MINISBLACK);
  TIFFSetField(tif.get(), TIFFTAG_PLANARCONFIG, PLANARCONFIG_CONTIG);
  TIFFSetField(tif.get(), TIFFTAG_ROWSPERSTRIP, 1);
  auto row = std::vector<std::uint8_t>(static_cast<std::size_t>(img.width()));
  for (int y = 0; y < img.height(); ++y) {
    std::copy_n(&img(0, y), img.width(), row.begin());
    if (TIFFWriteScanline(tif.get(), row.data(), static_cast<std::uint32_t>(y), 0) < 0)
      throw IoError{path.string() + ": TIFF write failed"};
  }
}

/// Masks are written as 8-bit PNG with 0 for background and 255 for
/// foreground.
inline void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask)
{
  GrayImage img{mask.width(), mask.height()};
  for (std::size_t i = 0; i < mask.size(); ++i)
    img.pixels()[i] = mask.pixels()[i] ? 255 : 0;
  write_png(path, img);
}

/// Writes through a sibling temporary file and renames it into place, so
/// readers never see a partial file.
template <typename Writer>
void write_atomically(const std::filesystem::path& path, Writer&& writer)
{
  auto tmp = path;
  tmp += ".tmp";
  writer(tmp);
  std::filesystem::rename(tmp, path);
}

inline void write_text_atomically(const std::filesystem::path& path, std::string_view text)
{
  write_atomically(path, [&](const std::filesystem::path& tmp) {
    std::ofstream out{tmp, std::ios::binary | std::ios::trunc};
    if (!out)
      throw IoError{"cannot write " + tmp.string()};
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out)
      throw IoError{"write failed: " + tmp.string()};
  });
}

inline std::string read_text(const std::filesystem::path& path)
{
  std::ifstream in{path, std::ios::binary};
  if (!in)
    throw IoError{"cannot open " + path.string()};
  return {std::istreambuf_iterator<char>{in}, std::istreambuf_iterator<char>{}};
}

}  // namespace wbcq
