#pragma once

// Image output: PFM (little-endian float32, negative scale header, rows
// bottom to top) for depth and normal buffers, binary PGM (P5, 8-bit, rows
// top to bottom) for semantic labels. Readers exist for verification.

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

namespace egorig {

// Single-channel PFM ("Pf"). Values are written as float32.
void writePfm(std::ostream& out, const Eigen::ArrayXXd& image);
Eigen::ArrayXXd readPfm(std::istream& in);

// Three-channel PFM ("PF"); `channels` holds one column per pixel, pixel
// index = y * width + x.
void writePfm3(std::ostream& out, int width, int height, const Eigen::Matrix3Xd& channels);
Eigen::Matrix3Xd readPfm3(std::istream& in, int& width, int& height);

// Binary PGM, values clamped to [0, 255].
void writePgm(std::ostream& out, const Eigen::ArrayXXi& image);
Eigen::ArrayXXi readPgm(std::istream& in);

// Path convenience wrappers (binary mode, IoError on failure).
void writePfmFile(const std::string& path, const Eigen::ArrayXXd& image);
void writePfm3File(const std::string& path, int width, int height,
                   const Eigen::Matrix3Xd& channels);
void writePgmFile(const std::string& path, const Eigen::ArrayXXi& image);

}  // namespace egorig
