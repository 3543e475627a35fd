#include "egorig/render.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include "egorig/parallel.hpp"

namespace egorig {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

FrameBuffers FrameBuffers::create(int width, int height) {
  if (width < 1 || height < 1) throw InvalidArgument("framebuffers: resolution must be positive");
  FrameBuffers fb;
  fb.width = width;
  fb.height = height;
  fb.depth = Eigen::ArrayXXd::Constant(height, width, kInf);
  fb.normals = Eigen::Matrix3Xd::Zero(3, static_cast<long>(width) * height);
  fb.semantics = Eigen::ArrayXXi::Zero(height, width);
  return fb;
}

void FrameBuffers::validate() const {
  if (depth.rows() != height || depth.cols() != width || semantics.rows() != height ||
      semantics.cols() != width || normals.cols() != static_cast<long>(width) * height)
    throw InvalidArgument("framebuffers: inconsistent buffer shapes");
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double d = depth(y, x);
      const double n = normals.col(pixelIndex(x, y)).norm();
      const int s = semantics(y, x);
      if (std::isfinite(d)) {
        if (!(d > 0)) throw InvalidArgument("framebuffers: non-positive depth");
        if (std::abs(n - 1.0) > 1e-9)
          throw InvalidArgument("framebuffers: non-unit normal on a hit pixel");
        if (s == 0) throw InvalidArgument("framebuffers: hit pixel without a label");
      } else {
        if (n != 0.0) throw InvalidArgument("framebuffers: miss pixel with a normal");
        if (s != 0) throw InvalidArgument("framebuffers: miss pixel with a label");
      }
    }
  }
}

FrameBuffers renderFrame(const CameraIntrinsics& cam, const RigidTransformd& cameraPose,
                         std::span<const ScenePrimitive> scene) {
  cam.validate();
  for (const auto& prim : scene) prim.validate();

  FrameBuffers fb = FrameBuffers::create(cam.width, cam.height);
  const Eigen::Matrix3d camRot = cameraPose.rotation;
  const Eigen::Vector3d origin = cameraPose.translation;

  parallelFor(0, cam.height, [&](int y) {
    for (int x = 0; x < cam.width; ++x) {
      const Eigen::Vector3d dCam = cam.rayDirection(x + 0.5, y + 0.5);
      const Eigen::Vector3d dWorld = camRot * dCam;
      double best = kInf;
      Eigen::Vector3d bestNormal;
      int bestId = 0;
      for (const auto& prim : scene) {
        const auto hit = intersectRay(prim, origin, dWorld, cam.nearClip);
        if (hit && hit->t < best) {
          best = hit->t;
          bestNormal = hit->normal;
          bestId = hit->semanticId;
        }
      }
      if (std::isfinite(best)) {
        fb.depth(y, x) = best;
        fb.normals.col(fb.pixelIndex(x, y)) = camRot.transpose() * bestNormal;
        fb.semantics(y, x) = bestId;
      }
    }
  });
  return fb;
}

FrameBuffers renderMotionBlur(const CameraIntrinsics& cam,
                              std::span<const RigidTransformd> poseSamples,
                              std::span<const std::vector<ScenePrimitive>> sceneSamples,
                              int averageCount) {
  if (averageCount < 1) throw InvalidArgument("renderMotionBlur: averageCount must be >= 1");
  if (static_cast<int>(poseSamples.size()) != averageCount)
    throw InvalidArgument("renderMotionBlur: pose sample count must equal averageCount");
  if (sceneSamples.size() != poseSamples.size())
    throw InvalidArgument("renderMotionBlur: scene sample count must equal averageCount");
  if (averageCount == 1) return renderFrame(cam, poseSamples[0], sceneSamples[0]);

  FrameBuffers out = FrameBuffers::create(cam.width, cam.height);
  const long pixels = static_cast<long>(cam.width) * cam.height;

  Eigen::ArrayXXd depthSum = Eigen::ArrayXXd::Zero(cam.height, cam.width);
  Eigen::ArrayXXi hitCount = Eigen::ArrayXXi::Zero(cam.height, cam.width);
  Eigen::Matrix3Xd normalSum = Eigen::Matrix3Xd::Zero(3, pixels);
  Eigen::Matrix3Xd firstNormal = Eigen::Matrix3Xd::Zero(3, pixels);
  // Sparse per-pixel label tallies; most pixels see at most a couple of ids.
  std::vector<std::vector<std::pair<int, int>>> votes(static_cast<size_t>(pixels));

  for (int s = 0; s < averageCount; ++s) {
    const FrameBuffers sample = renderFrame(cam, poseSamples[static_cast<size_t>(s)],
                                            sceneSamples[static_cast<size_t>(s)]);
    for (int y = 0; y < cam.height; ++y) {
      for (int x = 0; x < cam.width; ++x) {
        if (!std::isfinite(sample.depth(y, x))) continue;
        const long p = out.pixelIndex(x, y);
        if (hitCount(y, x) == 0) firstNormal.col(p) = sample.normals.col(p);
        depthSum(y, x) += sample.depth(y, x);
        hitCount(y, x) += 1;
        normalSum.col(p) += sample.normals.col(p);
        auto& tally = votes[static_cast<size_t>(p)];
        const int id = sample.semantics(y, x);
        bool found = false;
        for (auto& [vid, count] : tally)
          if (vid == id) {
            ++count;
            found = true;
            break;
          }
        if (!found) tally.emplace_back(id, 1);
      }
    }
  }

  for (int y = 0; y < cam.height; ++y) {
    for (int x = 0; x < cam.width; ++x) {
      const int hits = hitCount(y, x);
      if (hits == 0) continue;
      const long p = out.pixelIndex(x, y);
      out.depth(y, x) = depthSum(y, x) / hits;
      int bestId = 0, bestCount = 0;
      for (const auto& [vid, count] : votes[static_cast<size_t>(p)])
        if (count > bestCount || (count == bestCount && vid < bestId)) {
          bestId = vid;
          bestCount = count;
        }
      out.semantics(y, x) = bestId;
      Eigen::Vector3d n = normalSum.col(p);
      const double len = n.norm();
      out.normals.col(p) = len > 1e-12 ? Eigen::Vector3d(n / len) : firstNormal.col(p);
    }
  }
  return out;
}

FrameBuffers renderMotionBlur(const CameraIntrinsics& cam,
                              std::span<const RigidTransformd> poseSamples,
                              std::span<const ScenePrimitive> scene, int averageCount) {
  const std::vector<std::vector<ScenePrimitive>> repeated(
      poseSamples.size(), std::vector<ScenePrimitive>(scene.begin(), scene.end()));
  return renderMotionBlur(cam, poseSamples, repeated, averageCount);
}

void applyPixelDropout(FrameBuffers& buffers, double rate, uint64_t seed) {
  if (!(rate >= 0.0) || !(rate <= 1.0))
    throw InvalidArgument("pixel dropout: rate must lie in [0, 1]");
  if (rate == 0.0) return;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (int y = 0; y < buffers.height; ++y) {
    for (int x = 0; x < buffers.width; ++x) {
      if (uniform(rng) >= rate) continue;
      buffers.depth(y, x) = kInf;
      buffers.normals.col(buffers.pixelIndex(x, y)).setZero();
      buffers.semantics(y, x) = 0;
    }
  }
}

}  // namespace egorig
