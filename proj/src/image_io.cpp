#include "egorig/image_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "egorig/error.hpp"

static_assert(std::endian::native == std::endian::little,
              "PFM writer assumes a little-endian host");

namespace egorig {

namespace {

void writeFloats(std::ostream& out, const float* data, size_t count) {
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * 4));
}

struct PfmHeader {
  bool color = false;
  int width = 0;
  int height = 0;
};

PfmHeader readPfmHeader(std::istream& in) {
  PfmHeader h;
  std::string magic;
  double scale = 0;
  in >> magic >> h.width >> h.height >> scale;
  if (!in || (magic != "Pf" && magic != "PF")) throw IoError("pfm: bad magic");
  if (h.width < 1 || h.height < 1) throw IoError("pfm: bad dimensions");
  if (scale >= 0) throw IoError("pfm: big-endian files are not supported");
  h.color = magic == "PF";
  in.get();  // single whitespace byte after the scale
  return h;
}

std::vector<float> readFloats(std::istream& in, size_t count) {
  std::vector<float> data(count);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(count * 4));
  if (!in) throw IoError("pfm: truncated pixel data");
  return data;
}

template <typename Fn>
void withBinaryFile(const std::string& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  fn(out);
  if (!out) throw IoError("failed while writing '" + path + "'");
}

}  // namespace

void writePfm(std::ostream& out, const Eigen::ArrayXXd& image) {
  const int h = static_cast<int>(image.rows());
  const int w = static_cast<int>(image.cols());
  if (h < 1 || w < 1) throw InvalidArgument("pfm: empty image");
  out << "Pf\n" << w << ' ' << h << "\n-1.0\n";
  std::vector<float> row(static_cast<size_t>(w));
  for (int y = h - 1; y >= 0; --y) {
    for (int x = 0; x < w; ++x) row[static_cast<size_t>(x)] = static_cast<float>(image(y, x));
    writeFloats(out, row.data(), row.size());
  }
  if (!out) throw IoError("failed while writing pfm");
}

Eigen::ArrayXXd readPfm(std::istream& in) {
  const PfmHeader h = readPfmHeader(in);
  if (h.color) throw IoError("pfm: expected a single-channel file");
  Eigen::ArrayXXd image(h.height, h.width);
  for (int y = h.height - 1; y >= 0; --y) {
    const auto row = readFloats(in, static_cast<size_t>(h.width));
    for (int x = 0; x < h.width; ++x) image(y, x) = row[static_cast<size_t>(x)];
  }
  return image;
}

void writePfm3(std::ostream& out, int width, int height, const Eigen::Matrix3Xd& channels) {
  if (width < 1 || height < 1 || channels.cols() != static_cast<long>(width) * height)
    throw InvalidArgument("pfm: channel matrix does not match the resolution");
  out << "PF\n" << width << ' ' << height << "\n-1.0\n";
  std::vector<float> row(static_cast<size_t>(width) * 3);
  for (int y = height - 1; y >= 0; --y) {
    for (int x = 0; x < width; ++x) {
      const auto col = channels.col(static_cast<long>(y) * width + x);
      for (int c = 0; c < 3; ++c)
        row[static_cast<size_t>(x) * 3 + static_cast<size_t>(c)] = static_cast<float>(col[c]);
    }
    writeFloats(out, row.data(), row.size());
  }
  if (!out) throw IoError("failed while writing pfm");
}

Eigen::Matrix3Xd readPfm3(std::istream& in, int& width, int& height) {
  const PfmHeader h = readPfmHeader(in);
  if (!h.color) throw IoError("pfm: expected a three-channel file");
  width = h.width;
  height = h.height;
  Eigen::Matrix3Xd channels(3, static_cast<long>(width) * height);
  for (int y = height - 1; y >= 0; --y) {
    const auto row = readFloats(in, static_cast<size_t>(width) * 3);
    for (int x = 0; x < width; ++x)
      for (int c = 0; c < 3; ++c)
        channels(c, static_cast<long>(y) * width + x) =
            row[static_cast<size_t>(x) * 3 + static_cast<size_t>(c)];
  }
  return channels;
}

void writePgm(std::ostream& out, const Eigen::ArrayXXi& image) {
  const int h = static_cast<int>(image.rows());
  const int w = static_cast<int>(image.cols());
  if (h < 1 || w < 1) throw InvalidArgument("pgm: empty image");
  out << "P5\n" << w << ' ' << h << "\n255\n";
  std::vector<unsigned char> row(static_cast<size_t>(w));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int v = image(y, x);
      row[static_cast<size_t>(x)] = static_cast<unsigned char>(v < 0 ? 0 : (v > 255 ? 255 : v));
    }
    out.write(reinterpret_cast<const char*>(row.data()), w);
  }
  if (!out) throw IoError("failed while writing pgm");
}

Eigen::ArrayXXi readPgm(std::istream& in) {
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  if (!in || magic != "P5" || w < 1 || h < 1 || maxval != 255) throw IoError("pgm: bad header");
  in.get();
  Eigen::ArrayXXi image(h, w);
  std::vector<unsigned char> row(static_cast<size_t>(w));
  for (int y = 0; y < h; ++y) {
    in.read(reinterpret_cast<char*>(row.data()), w);
    if (!in) throw IoError("pgm: truncated pixel data");
    for (int x = 0; x < w; ++x) image(y, x) = row[static_cast<size_t>(x)];
  }
  return image;
}

void writePfmFile(const std::string& path, const Eigen::ArrayXXd& image) {
  withBinaryFile(path, [&](std::ostream& out) { writePfm(out, image); });
}

void writePfm3File(const std::string& path, int width, int height,
                   const Eigen::Matrix3Xd& channels) {
  withBinaryFile(path, [&](std::ostream& out) { writePfm3(out, width, height, channels); });
}

void writePgmFile(const std::string& path, const Eigen::ArrayXXi& image) {
  withBinaryFile(path, [&](std::ostream& out) { writePgm(out, image); });
}

}  // namespace egorig
