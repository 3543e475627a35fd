#include "egorig/imu.hpp"

#include <istream>
#include <ostream>
#include <random>
#include <string>

#include "egorig/rotation.hpp"
#include "text_util.hpp"

namespace egorig {

std::vector<ImuSample> synthesizeImu(const MountTrajectory& trajectory,
                                     const Eigen::Vector3d& gravity, const NoiseModel& noise) {
  noise.validate();
  const int n = trajectory.frameCount();
  if (n < 3) throw InvalidArgument("synthesizeImu: need at least 3 frames");
  if (!(trajectory.fps > 0)) throw InvalidArgument("synthesizeImu: fps must be positive");
  const double fps = trajectory.fps;

  std::mt19937_64 rng(noise.rngSeed);
  std::normal_distribution<double> accelNoise(0.0, noise.accelSigma > 0 ? noise.accelSigma : 1.0);
  std::normal_distribution<double> gyroNoise(0.0, noise.gyroSigma > 0 ? noise.gyroSigma : 1.0);

  std::vector<ImuSample> out;
  out.reserve(static_cast<size_t>(n - 2));
  for (int i = 1; i + 1 < n; ++i) {
    const auto& prev = trajectory.poses[static_cast<size_t>(i - 1)];
    const auto& cur = trajectory.poses[static_cast<size_t>(i)];
    const auto& next = trajectory.poses[static_cast<size_t>(i + 1)];

    ImuSample s;
    s.timestamp = i / fps;
    const Eigen::Vector3d aWorld =
        (next.translation - 2.0 * cur.translation + prev.translation) * (fps * fps);
    s.linearAcceleration = cur.rotation.transpose() * (aWorld - gravity);
    s.angularVelocity = logRotation(cur.rotation.transpose() * next.rotation) * fps;

    if (noise.accelSigma > 0)
      for (int k = 0; k < 3; ++k) s.linearAcceleration[k] += accelNoise(rng);
    if (noise.gyroSigma > 0)
      for (int k = 0; k < 3; ++k) s.angularVelocity[k] += gyroNoise(rng);
    out.push_back(s);
  }
  return out;
}

void writeImuCsv(std::ostream& out, std::span<const ImuSample> samples) {
  out << "t,ax,ay,az,gx,gy,gz\n";
  for (const auto& s : samples) {
    out << detail::formatDouble(s.timestamp);
    for (int k = 0; k < 3; ++k) out << ',' << detail::formatDouble(s.linearAcceleration[k]);
    for (int k = 0; k < 3; ++k) out << ',' << detail::formatDouble(s.angularVelocity[k]);
    out << '\n';
  }
  if (!out) throw IoError("failed while writing imu csv");
}

std::vector<ImuSample> readImuCsv(std::istream& in) {
  std::string line;
  int lineNo = 0;
  if (!std::getline(in, line) || detail::trim(line) != "t,ax,ay,az,gx,gy,gz")
    throw ParseError("imu csv: missing t,ax,ay,az,gx,gy,gz header");
  ++lineNo;
  std::vector<ImuSample> out;
  while (std::getline(in, line)) {
    ++lineNo;
    const auto body = detail::trim(line);
    if (body.empty()) continue;
    const std::string where = "imu csv line " + std::to_string(lineNo);
    const auto tokens = detail::splitChar(body, ',');
    if (tokens.size() != 7)
      throw ParseError(where + ": expected 7 values, got " + std::to_string(tokens.size()));
    ImuSample s;
    s.timestamp = detail::parseDouble(tokens[0], where);
    for (int k = 0; k < 3; ++k) s.linearAcceleration[k] = detail::parseDouble(tokens[1 + k], where);
    for (int k = 0; k < 3; ++k) s.angularVelocity[k] = detail::parseDouble(tokens[4 + k], where);
    out.push_back(s);
  }
  return out;
}

}  // namespace egorig
