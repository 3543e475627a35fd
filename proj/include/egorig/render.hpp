#pragma once

// Ray-cast rendering of depth, camera-frame normal and semantic label
// buffers, plus shutter-window averaging (motion blur) and a seeded pixel
// dropout stage.

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "egorig/camera.hpp"
#include "egorig/rigid_transform.hpp"
#include "egorig/scene.hpp"

namespace egorig {

struct FrameBuffers {
  int width = 0;
  int height = 0;
  Eigen::ArrayXXd depth;      // height x width; +inf where nothing was hit
  Eigen::Matrix3Xd normals;   // camera frame; column index = y * width + x
  Eigen::ArrayXXi semantics;  // height x width; 0 = background

  static FrameBuffers create(int width, int height);

  long pixelIndex(int x, int y) const { return static_cast<long>(y) * width + x; }

  // Cross-buffer invariants: finite depth is positive and comes with a unit
  // normal and a non-zero label; misses carry +inf, zero normal, label 0.
  void validate() const;
};

// Renders one frame from a camera posed at `cameraPose` (camera-to-world).
// A hit counts when its optical-axis depth exceeds the near clip; the
// nearest primitive wins. Rows are distributed across the thread budget.
FrameBuffers renderFrame(const CameraIntrinsics& cam, const RigidTransformd& cameraPose,
                         std::span<const ScenePrimitive> scene);

// Averages `averageCount` sub-frame renderings, one per pose sample. Depth
// is the mean over the samples that hit; the label is the majority among
// hitting samples (ties break toward the smaller id); normals are the
// renormalized mean over hitting samples. Pixels no sample hit stay misses.
// With averageCount == 1 the result is exactly renderFrame's.
FrameBuffers renderMotionBlur(const CameraIntrinsics& cam,
                              std::span<const RigidTransformd> poseSamples,
                              std::span<const ScenePrimitive> scene, int averageCount);

// Same, with per-sample scene geometry (moving bodies during the shutter).
FrameBuffers renderMotionBlur(const CameraIntrinsics& cam,
                              std::span<const RigidTransformd> poseSamples,
                              std::span<const std::vector<ScenePrimitive>> sceneSamples,
                              int averageCount);

// Drops each pixel independently with probability `rate` (seeded, row-major
// scan): depth to +inf, normal to zero, label to 0.
void applyPixelDropout(FrameBuffers& buffers, double rate, uint64_t seed);

}  // namespace egorig
