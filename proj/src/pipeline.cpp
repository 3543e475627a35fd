#include "egorig/pipeline.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "egorig/image_io.hpp"
#include "egorig/imu.hpp"
#include "egorig/motion.hpp"
#include "egorig/render.hpp"
#include "egorig/rng.hpp"
#include "egorig/version.hpp"
#include "text_util.hpp"

namespace egorig {

namespace {

namespace fs = std::filesystem;

std::string frameFile(const std::string& stem, int frame, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "_%06d.%s", frame, ext);
  return stem + buf;
}

std::string hexHash(uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void makeDirectory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

// Bone capsules of the posed body, one per non-root joint.
std::vector<ScenePrimitive> bodyPrimitives(const Skeletond& skeleton,
                                           const std::vector<RigidTransformd>& global,
                                           double radius, int semanticId) {
  std::vector<ScenePrimitive> out;
  if (semanticId == 0) return out;
  for (int i = 0; i < skeleton.jointCount(); ++i) {
    const int parent = skeleton.joints[static_cast<size_t>(i)].parent;
    if (parent < 0) continue;
    ScenePrimitive prim;
    prim.shape = Capsule{global[static_cast<size_t>(parent)].translation,
                         global[static_cast<size_t>(i)].translation, radius};
    prim.semanticId = semanticId;
    out.push_back(prim);
  }
  return out;
}

MotionSequence loadChainedMotion(const ScenarioConfig& config, const Skeletond& skeleton) {
  MotionSequence motion = loadMotionCsv(config.motionPaths.front(), &skeleton);
  for (size_t i = 1; i < config.motionPaths.size(); ++i)
    motion = concatenate(motion, loadMotionCsv(config.motionPaths[i], &skeleton),
                         config.bridgeFrames);
  if (config.fps > 0 && config.fps != motion.fps) motion = resample(motion, config.fps);
  return motion;
}

}  // namespace

RunManifest runSimulation(const ScenarioConfig& config, std::ostream* log) {
  config.validate();
  if (config.outDir.empty())
    throw ConfigError("config: no output directory (set out_dir or pass --out)");

  const Skeletond skeleton = loadSkeleton(config.skeletonPath);
  const MotionSequence motion = loadChainedMotion(config, skeleton);
  const int frames = motion.frameCount();
  const double fps = motion.fps;
  const int blur = config.blurSamples;
  if (log)
    *log << "motion: " << frames << " frames at " << detail::formatDouble(fps) << " fps, "
         << skeleton.jointCount() << " joints\n";

  // One FK pass per pose sample, shared by all sensors. With shutter
  // averaging the samples walk the interpolated motion at blur times
  // (i + j/blur) / fps; otherwise they are the frames themselves.
  const int samplesTotal = frames * blur;
  std::vector<std::vector<RigidTransformd>> fkSamples(static_cast<size_t>(samplesTotal));
  std::vector<std::vector<ScenePrimitive>> sceneSamples(static_cast<size_t>(samplesTotal));
  for (int k = 0; k < samplesTotal; ++k) {
    if (blur == 1) {
      fkSamples[k] = forwardKinematics(skeleton, motion.frames[static_cast<size_t>(k)]);
    } else {
      const JointPosed pose = sampleMotionAt(motion, k / (fps * blur));
      fkSamples[k] = forwardKinematics(skeleton, pose);
    }
    sceneSamples[k] = bodyPrimitives(skeleton, fkSamples[k], config.bodyRadius,
                                     config.bodySemantic);
    sceneSamples[k].insert(sceneSamples[k].end(), config.scene.begin(), config.scene.end());
  }

  const fs::path outDir{config.outDir};
  makeDirectory(outDir);

  RunManifest manifest;
  manifest.version = kVersion;
  manifest.configHash = config.configHash;
  manifest.seed = config.seed;
  manifest.fps = fps;
  manifest.frameCount = frames;
  manifest.blurSamples = blur;

  for (size_t si = 0; si < config.sensors.size(); ++si) {
    const SensorConfig& sensor = config.sensors[si];
    const int jointIndex = skeleton.indexOf(sensor.joint);
    if (jointIndex < 0)
      throw ConfigError("sensor '" + sensor.name + "': skeleton has no joint '" + sensor.joint +
                        "'");

    MountSpec spec;
    spec.joint = jointIndex;
    spec.offset = sensor.offset;
    spec.kind = sensor.mount;
    spec.spring = sensor.spring;

    std::vector<RigidTransformd> anchors(static_cast<size_t>(samplesTotal));
    for (int k = 0; k < samplesTotal; ++k)
      anchors[static_cast<size_t>(k)] = fkSamples[static_cast<size_t>(k)][jointIndex];

    const MountTrajectory traj =
        spec.kind == MountKind::Spring
            ? simulateSpring(anchors, spec, fps * blur, sensor.substeps)
            : simulateRigid(anchors, spec, fps * blur);

    const fs::path sensorDir = outDir / sensor.name;
    makeDirectory(sensorDir);

    SensorRunRecord record;
    record.name = sensor.name;
    record.joint = sensor.joint;
    record.frameCount = frames;

    for (int i = 0; i < frames; ++i) {
      const std::span poseSpan{traj.poses.data() + static_cast<size_t>(i) * blur,
                               static_cast<size_t>(blur)};
      const std::span sceneSpan{sceneSamples.data() + static_cast<size_t>(i) * blur,
                                static_cast<size_t>(blur)};
      FrameBuffers fb = renderMotionBlur(sensor.camera, poseSpan, sceneSpan, blur);
      if (sensor.noise.pixelDropoutRate > 0)
        applyPixelDropout(fb, sensor.noise.pixelDropoutRate,
                          deriveSeed(config.seed, si, 1 + static_cast<uint64_t>(i)));

      const std::string depthName = frameFile("depth", i, "pfm");
      const std::string normalName = frameFile("normal", i, "pfm");
      const std::string labelName = frameFile("label", i, "pgm");
      writePfmFile((sensorDir / depthName).string(), fb.depth);
      writePfm3File((sensorDir / normalName).string(), fb.width, fb.height, fb.normals);
      writePgmFile((sensorDir / labelName).string(), fb.semantics);
      record.files.push_back(sensor.name + "/" + depthName);
      record.files.push_back(sensor.name + "/" + normalName);
      record.files.push_back(sensor.name + "/" + labelName);
    }

    // IMU runs on the frame-boundary poses of the mount trajectory.
    MountTrajectory frameTraj;
    frameTraj.fps = fps;
    frameTraj.poses.reserve(static_cast<size_t>(frames));
    for (int i = 0; i < frames; ++i)
      frameTraj.poses.push_back(traj.poses[static_cast<size_t>(i) * blur]);
    NoiseModel noise = sensor.noise;
    noise.rngSeed = deriveSeed(config.seed, si, 0);
    const std::vector<ImuSample> imu = synthesizeImu(frameTraj, defaultGravity(), noise);
    record.imuSamples = static_cast<int>(imu.size());
    {
      const fs::path imuPath = sensorDir / "imu.csv";
      std::ofstream out(imuPath, std::ios::binary);
      if (!out) throw IoError("cannot write '" + imuPath.string() + "'");
      writeImuCsv(out, imu);
      if (!out) throw IoError("write failed on '" + imuPath.string() + "'");
      record.files.push_back(sensor.name + "/imu.csv");
    }

    if (log)
      *log << "sensor '" << sensor.name << "': " << frames << " frames, " << record.imuSamples
           << " imu samples\n";
    manifest.sensors.push_back(std::move(record));
  }

  const fs::path manifestPath = outDir / "manifest.txt";
  {
    std::ofstream out(manifestPath, std::ios::binary);
    if (!out) throw IoError("cannot write '" + manifestPath.string() + "'");
    writeManifest(out, manifest);
    if (!out) throw IoError("write failed on '" + manifestPath.string() + "'");
  }
  if (log) *log << "manifest: " << manifestPath.string() << "\n";
  return manifest;
}

void writeManifest(std::ostream& out, const RunManifest& manifest) {
  out << "# egorig run manifest\n";
  out << "version = " << manifest.version << '\n';
  out << "config_hash = " << hexHash(manifest.configHash) << '\n';
  out << "seed = " << manifest.seed << '\n';
  out << "fps = " << detail::formatDouble(manifest.fps) << '\n';
  out << "frames = " << manifest.frameCount << '\n';
  out << "blur_samples = " << manifest.blurSamples << '\n';
  out << "sensors = " << manifest.sensors.size() << '\n';
  for (const auto& s : manifest.sensors) {
    out << "\n[sensor]\n";
    out << "name = " << s.name << '\n';
    out << "joint = " << s.joint << '\n';
    out << "frames = " << s.frameCount << '\n';
    out << "imu_samples = " << s.imuSamples << '\n';
    for (const auto& f : s.files) out << "file = " << f << '\n';
  }
}

}  // namespace egorig
