#include "egorig/motion.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "egorig/rotation.hpp"
#include "text_util.hpp"

namespace egorig {

namespace {

std::vector<std::string> expectedColumns(const Skeletond& skeleton) {
  std::vector<std::string> cols = {"root_tx", "root_ty", "root_tz"};
  for (int k = 0; k < 6; ++k) cols.push_back("root_r6_" + std::to_string(k));
  for (const auto& joint : skeleton.joints)
    for (int k = 0; k < 6; ++k) cols.push_back(joint.name + "_r6_" + std::to_string(k));
  return cols;
}

void checkHeader(const std::vector<std::string_view>& got, const Skeletond& skeleton) {
  const auto expected = expectedColumns(skeleton);
  if (got.size() != expected.size()) {
    // Try to name an offending joint before falling back to a count error.
    for (const auto& tok : got) {
      const std::string t(detail::trim(tok));
      const auto pos = t.rfind("_r6_");
      if (pos != std::string::npos && t.substr(0, pos) != "root" &&
          skeleton.indexOf(t.substr(0, pos)) < 0)
        throw ParseError("motion csv header: unknown joint '" + t.substr(0, pos) + "'");
    }
    throw ParseError("motion csv header: expected " + std::to_string(expected.size()) +
                     " columns for this skeleton, got " + std::to_string(got.size()));
  }
  for (size_t i = 0; i < expected.size(); ++i) {
    const std::string t(detail::trim(got[i]));
    if (t == expected[i]) continue;
    const auto pos = t.rfind("_r6_");
    const std::string name = pos == std::string::npos ? t : t.substr(0, pos);
    if (name != "root" && skeleton.indexOf(name) < 0)
      throw ParseError("motion csv header: unknown joint '" + name + "'");
    throw ParseError("motion csv header: column " + std::to_string(i + 1) + " is '" + t +
                     "', expected '" + expected[i] + "'");
  }
}

struct HeaderLines {
  double fps = 0;
  std::string skeletonRef;
  std::string label;
};

// Consumes the metadata lines and leaves `line` holding the column header.
HeaderLines readHeaderLines(std::istream& in, std::string& line, int& lineNo) {
  HeaderLines h;
  bool sawFps = false;
  while (std::getline(in, line)) {
    ++lineNo;
    const std::string_view body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const bool metaLine = eq != std::string_view::npos && body.find(',') == std::string_view::npos;
    if (!metaLine) break;
    const std::string_view key = detail::trim(body.substr(0, eq));
    const std::string_view value = detail::trim(body.substr(eq + 1));
    const std::string where = "motion csv line " + std::to_string(lineNo);
    if (key == "fps") {
      if (sawFps) throw ParseError(where + ": duplicate fps line");
      h.fps = detail::parseDouble(value, where);
      if (!(h.fps > 0)) throw ParseError(where + ": fps must be positive");
      sawFps = true;
    } else if (key == "skeleton") {
      h.skeletonRef = std::string(value);
    } else if (key == "label") {
      h.label = std::string(value);
    } else {
      throw ParseError(where + ": unknown header key '" + std::string(key) + "'");
    }
  }
  if (!sawFps) throw ParseError("motion csv: missing fps= header line");
  return h;
}

JointPosed interpolatePose(const JointPosed& a, const JointPosed& b, double u) {
  JointPosed out;
  out.root.translation = (1.0 - u) * a.root.translation + u * b.root.translation;
  out.root.rotation = slerpRotation(a.root.rotation, b.root.rotation, u);
  out.localRotations.resize(a.localRotations.size());
  for (size_t j = 0; j < a.localRotations.size(); ++j)
    out.localRotations[j] = slerpRotation(a.localRotations[j], b.localRotations[j], u);
  return out;
}

void requireCompatible(const MotionSequence& a, const MotionSequence& b) {
  const auto& sa = a.skeleton;
  const auto& sb = b.skeleton;
  bool same = sa.jointCount() == sb.jointCount() && sa.boneScales == sb.boneScales;
  for (int i = 0; same && i < sa.jointCount(); ++i)
    same = sa.joints[i].name == sb.joints[i].name && sa.joints[i].parent == sb.joints[i].parent &&
           sa.joints[i].restOffset == sb.joints[i].restOffset;
  if (!same) throw InvalidArgument("concatenate: skeleton mismatch between sequences");
  if (a.fps != b.fps)
    throw InvalidArgument("concatenate: fps mismatch (" + detail::formatDouble(a.fps) + " vs " +
                          detail::formatDouble(b.fps) + ")");
}

double meanNorm(const std::vector<Eigen::Vector3d>& v) {
  double sum = 0;
  for (const auto& x : v) sum += x.norm();
  return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

double stdNorm(const std::vector<Eigen::Vector3d>& v, double mean) {
  if (v.empty()) return 0.0;
  double acc = 0;
  for (const auto& x : v) {
    const double d = x.norm() - mean;
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(v.size()));
}

}  // namespace

void MotionSequence::validate() const {
  skeleton.validate();
  if (!(fps > 0) || !std::isfinite(fps)) throw InvalidArgument("motion: fps must be positive");
  if (frames.empty()) throw InvalidArgument("motion: no frames");
  for (const auto& f : frames)
    if (static_cast<int>(f.localRotations.size()) != skeleton.jointCount())
      throw InvalidArgument("motion: frame size does not match skeleton");
}

MotionSequence parseMotionCsv(std::istream& in, const Skeletond& skeleton) {
  skeleton.validate();
  MotionSequence m;
  m.skeleton = skeleton;

  std::string line;
  int lineNo = 0;
  const HeaderLines h = readHeaderLines(in, line, lineNo);
  m.fps = h.fps;
  m.label = h.label;
  m.skeletonSource = h.skeletonRef;

  checkHeader(detail::splitChar(detail::trim(line), ','), skeleton);

  const size_t columns = 9 + 6 * static_cast<size_t>(skeleton.jointCount());
  while (std::getline(in, line)) {
    ++lineNo;
    const std::string_view body = detail::trim(line);
    if (body.empty()) continue;
    const std::string where = "motion csv line " + std::to_string(lineNo);
    const auto tokens = detail::splitChar(body, ',');
    if (tokens.size() != columns)
      throw ParseError(where + ": expected " + std::to_string(columns) + " values, got " +
                       std::to_string(tokens.size()));
    Eigen::VectorXd row(static_cast<long>(columns));
    for (size_t i = 0; i < columns; ++i)
      row[static_cast<long>(i)] = detail::parseDouble(tokens[i], where);

    JointPosed pose;
    pose.root.translation = row.head<3>();
    try {
      pose.root.rotation = rotationFrom6d(row.segment<6>(3));
      pose.localRotations.resize(static_cast<size_t>(skeleton.jointCount()));
      for (int j = 0; j < skeleton.jointCount(); ++j)
        pose.localRotations[static_cast<size_t>(j)] = rotationFrom6d(row.segment<6>(9 + 6 * j));
    } catch (const InvalidArgument& e) {
      throw ParseError(where + ": " + e.what());
    }
    m.frames.push_back(std::move(pose));
  }
  if (m.frames.empty()) throw ParseError("motion csv: no frames");
  return m;
}

MotionSequence loadMotionCsv(const std::string& path, const Skeletond* skeleton) {
  std::ifstream file(path);
  if (!file) throw IoError("cannot open motion file '" + path + "'");
  std::stringstream buffer;
  buffer << file.rdbuf();

  Skeletond resolved;
  std::string resolvedPath;
  if (skeleton == nullptr) {
    // Peek the header for the skeleton reference.
    std::istringstream peek(buffer.str());
    std::string line;
    int lineNo = 0;
    const HeaderLines h = readHeaderLines(peek, line, lineNo);
    if (h.skeletonRef.empty())
      throw ParseError(path + ": no skeleton= reference; a skeleton must be supplied");
    std::filesystem::path ref(h.skeletonRef);
    if (ref.is_relative()) ref = std::filesystem::path(path).parent_path() / ref;
    resolvedPath = ref.lexically_normal().string();
    resolved = loadSkeleton(resolvedPath);
    skeleton = &resolved;
  }

  std::istringstream in(buffer.str());
  try {
    MotionSequence m = parseMotionCsv(in, *skeleton);
    if (!resolvedPath.empty()) m.skeletonSource = resolvedPath;
    return m;
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void writeMotionCsv(std::ostream& out, const MotionSequence& motion,
                    const std::string& skeletonRef) {
  motion.validate();
  out << "fps=" << detail::formatDouble(motion.fps) << '\n';
  if (!skeletonRef.empty()) out << "skeleton=" << skeletonRef << '\n';
  if (!motion.label.empty()) out << "label=" << motion.label << '\n';
  const auto cols = expectedColumns(motion.skeleton);
  for (size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& frame : motion.frames) {
    Eigen::VectorXd row(static_cast<long>(cols.size()));
    row.head<3>() = frame.root.translation;
    row.segment<6>(3) = rotationTo6d(frame.root.rotation);
    for (size_t j = 0; j < frame.localRotations.size(); ++j)
      row.segment<6>(9 + 6 * static_cast<long>(j)) = rotationTo6d(frame.localRotations[j]);
    for (long i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << detail::formatDouble(row[i]);
    out << '\n';
  }
  if (!out) throw IoError("failed while writing motion csv");
}

JointPosed sampleMotionAt(const MotionSequence& motion, double t) {
  motion.validate();
  const int n = motion.frameCount();
  const double s = t * motion.fps;
  if (s <= 0.0 || n == 1) return motion.frames.front();
  if (s >= double(n - 1)) return motion.frames.back();
  const int i0 = static_cast<int>(std::floor(s));
  const double u = s - i0;
  if (u == 0.0) return motion.frames[static_cast<size_t>(i0)];
  return interpolatePose(motion.frames[static_cast<size_t>(i0)],
                         motion.frames[static_cast<size_t>(i0 + 1)], u);
}

MotionSequence concatenate(const MotionSequence& a, const MotionSequence& b, int bridgeFrames) {
  a.validate();
  b.validate();
  requireCompatible(a, b);
  if (bridgeFrames < 0) throw InvalidArgument("concatenate: bridgeFrames must be >= 0");

  const Eigen::Vector3d delta =
      a.frames.back().root.translation - b.frames.front().root.translation;

  MotionSequence out;
  out.skeleton = a.skeleton;
  out.fps = a.fps;
  out.skeletonSource = a.skeletonSource;
  if (a.label == b.label)
    out.label = a.label;
  else if (a.label.empty() || b.label.empty())
    out.label = a.label + b.label;
  else
    out.label = a.label + "+" + b.label;

  out.frames = a.frames;
  JointPosed bFirst = b.frames.front();
  bFirst.root.translation += delta;
  const JointPosed& aLast = a.frames.back();
  for (int k = 1; k <= bridgeFrames; ++k) {
    const double u = double(k) / double(bridgeFrames + 1);
    out.frames.push_back(interpolatePose(aLast, bFirst, u));
  }
  for (const auto& frame : b.frames) {
    JointPosed shifted = frame;
    shifted.root.translation += delta;
    out.frames.push_back(std::move(shifted));
  }
  return out;
}

MotionSequence resample(const MotionSequence& motion, double targetFps) {
  motion.validate();
  if (!(targetFps > 0) || !std::isfinite(targetFps))
    throw InvalidArgument("resample: target fps must be positive");
  const double span = motion.duration();
  const int count = static_cast<int>(std::floor(span * targetFps + 1e-9)) + 1;
  MotionSequence out;
  out.skeleton = motion.skeleton;
  out.fps = targetFps;
  out.label = motion.label;
  out.skeletonSource = motion.skeletonSource;
  out.frames.reserve(static_cast<size_t>(count));
  for (int k = 0; k < count; ++k)
    out.frames.push_back(sampleMotionAt(motion, double(k) / targetFps));
  return out;
}

DerivativeTrack centralVelocity(std::span<const Eigen::Vector3d> track, double fps) {
  if (track.size() < 3) throw InvalidArgument("centralVelocity: need at least 3 samples");
  DerivativeTrack out;
  out.firstFrame = 1;
  for (size_t i = 1; i + 1 < track.size(); ++i)
    out.samples.push_back((track[i + 1] - track[i - 1]) * (fps / 2.0));
  return out;
}

DerivativeTrack centralAcceleration(std::span<const Eigen::Vector3d> track, double fps) {
  if (track.size() < 3) throw InvalidArgument("centralAcceleration: need at least 3 samples");
  DerivativeTrack out;
  out.firstFrame = 1;
  for (size_t i = 1; i + 1 < track.size(); ++i)
    out.samples.push_back((track[i + 1] - 2.0 * track[i] + track[i - 1]) * (fps * fps));
  return out;
}

DerivativeTrack thirdDifferenceJerk(std::span<const Eigen::Vector3d> track, double fps) {
  const double f3 = fps * fps * fps;
  DerivativeTrack out;
  if (track.size() == 4) {
    // One-sided cubic-exact stencil when no interior five-point window fits.
    out.firstFrame = 1;
    out.samples.push_back((track[3] - 3.0 * track[2] + 3.0 * track[1] - track[0]) * f3);
    return out;
  }
  if (track.size() < 5) throw InvalidArgument("thirdDifferenceJerk: need at least 4 samples");
  out.firstFrame = 2;
  for (size_t i = 2; i + 2 < track.size(); ++i)
    out.samples.push_back(
        (track[i + 2] - 2.0 * track[i + 1] + 2.0 * track[i - 1] - track[i - 2]) * (f3 / 2.0));
  return out;
}

std::vector<JointStats> jointStatistics(const MotionSequence& motion) {
  motion.validate();
  const int n = motion.frameCount();
  if (n < 4) throw InvalidArgument("jointStatistics: need at least 4 frames");
  const int joints = motion.skeleton.jointCount();

  std::vector<std::vector<Eigen::Vector3d>> tracks(static_cast<size_t>(joints));
  for (auto& t : tracks) t.reserve(static_cast<size_t>(n));
  for (const auto& frame : motion.frames) {
    const auto global = forwardKinematics(motion.skeleton, frame);
    for (int j = 0; j < joints; ++j)
      tracks[static_cast<size_t>(j)].push_back(global[static_cast<size_t>(j)].translation);
  }

  std::vector<JointStats> stats(static_cast<size_t>(joints));
  for (int j = 0; j < joints; ++j) {
    const auto& track = tracks[static_cast<size_t>(j)];
    JointStats& s = stats[static_cast<size_t>(j)];
    s.joint = motion.skeleton.joints[static_cast<size_t>(j)].name;
    const auto vel = centralVelocity(track, motion.fps);
    const auto acc = centralAcceleration(track, motion.fps);
    const auto jerk = thirdDifferenceJerk(track, motion.fps);
    s.meanVelocity = meanNorm(vel.samples);
    s.stdVelocity = stdNorm(vel.samples, s.meanVelocity);
    s.meanAcceleration = meanNorm(acc.samples);
    s.stdAcceleration = stdNorm(acc.samples, s.meanAcceleration);
    s.meanJerk = meanNorm(jerk.samples);
    s.stdJerk = stdNorm(jerk.samples, s.meanJerk);
  }
  return stats;
}

}  // namespace egorig
