#include "egorig/config.hpp"

#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "egorig/rotation.hpp"
#include "text_util.hpp"

namespace egorig {

namespace {

using detail::parseDouble;
using detail::parseInt;
using detail::splitWhitespace;
using detail::trim;

uint64_t parseSeed(std::string_view token, const std::string& where) {
  const std::string_view t = trim(token);
  uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError(where + ": expected an unsigned integer, got '" + std::string(t) + "'");
  return value;
}

bool parseBool(std::string_view token, const std::string& where) {
  const std::string_view t = trim(token);
  if (t == "true" || t == "on" || t == "1") return true;
  if (t == "false" || t == "off" || t == "0") return false;
  throw ConfigError(where + ": expected true/false, got '" + std::string(t) + "'");
}

std::vector<double> parseNumbers(std::string_view value, size_t count, const std::string& where) {
  const auto tokens = splitWhitespace(value);
  if (tokens.size() != count)
    throw ConfigError(where + ": expected " + std::to_string(count) + " numbers, got " +
                      std::to_string(tokens.size()));
  std::vector<double> out;
  out.reserve(count);
  for (const auto& t : tokens) out.push_back(parseDouble(t, where));
  return out;
}

int parseSemanticId(double raw, const std::string& where) {
  const int id = static_cast<int>(raw);
  if (double(id) != raw || id < 1 || id > 255)
    throw ConfigError(where + ": semantic id must be an integer in [1, 255]");
  return id;
}

std::string resolvePath(std::string_view value, const std::string& baseDir) {
  const std::filesystem::path p{std::string(value)};
  if (p.is_absolute() || baseDir.empty()) return p.string();
  return (std::filesystem::path(baseDir) / p).string();
}

Eigen::Matrix3d rotationFromWxyz(const std::vector<double>& q, const std::string& where) {
  const Eigen::Quaterniond quat(q[0], q[1], q[2], q[3]);
  if (quat.norm() <= kZeroQuaternionTol)
    throw ConfigError(where + ": quaternion is near zero");
  return quat.normalized().toRotationMatrix();
}

// Tracks which scalar keys a section instance has seen so duplicates fail.
struct SeenKeys {
  std::set<std::string> keys;
  void mark(const std::string& key, const std::string& where) {
    if (!keys.insert(key).second) throw ConfigError(where + ": duplicate key '" + key + "'");
  }
};

enum class Section { None, Scenario, Scene, Sensor };

}  // namespace

void ScenarioConfig::validate() const {
  if (skeletonPath.empty()) throw ConfigError("config: [scenario] needs a skeleton");
  if (motionPaths.empty()) throw ConfigError("config: [scenario] needs at least one motion");
  if (!(fps >= 0)) throw ConfigError("config: fps must be non-negative");
  if (bridgeFrames < 0) throw ConfigError("config: bridge_frames must be non-negative");
  if (blurSamples < 1) throw ConfigError("config: blur_samples must be at least 1");
  if (!(bodyRadius > 0)) throw ConfigError("config: body_radius must be positive");
  if (bodySemantic < 0 || bodySemantic > 255)
    throw ConfigError("config: body_semantic must lie in [0, 255]");
  for (const auto& prim : scene) prim.validate();
  if (sensors.empty()) throw ConfigError("config: the rig needs at least one [sensor]");
  std::set<std::string> names;
  for (const auto& s : sensors) {
    if (s.name.empty()) throw ConfigError("config: a sensor is missing its name");
    for (const char c : s.name)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
        throw ConfigError("config: sensor name '" + s.name +
                          "' may only use letters, digits, '_' and '-'");
    if (!names.insert(s.name).second)
      throw ConfigError("config: duplicate sensor name '" + s.name + "'");
    if (s.joint.empty()) throw ConfigError("config: sensor '" + s.name + "' is missing a joint");
    if (s.substeps < 1)
      throw ConfigError("config: sensor '" + s.name + "': substeps must be at least 1");
    s.camera.validate();
    s.noise.validate();
    if (s.mount == MountKind::Spring) s.spring.validate();
  }
}

ScenarioConfig parseScenarioConfig(std::istream& in, const std::string& baseDir) {
  std::ostringstream raw;
  raw << in.rdbuf();
  const std::string text = raw.str();

  ScenarioConfig config;
  config.configHash = fnv1a64(text);

  Section section = Section::None;
  bool sawScenario = false;
  SeenKeys scenarioKeys;
  SeenKeys sensorKeys;
  std::istringstream lines(text);
  std::string lineBuf;
  int lineNo = 0;
  while (std::getline(lines, lineBuf)) {
    ++lineNo;
    const std::string_view line = trim(detail::stripComment(lineBuf));
    if (line.empty()) continue;
    const std::string where = "config line " + std::to_string(lineNo);

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      const std::string_view name = trim(line.substr(1, line.size() - 2));
      if (name == "scenario") {
        if (sawScenario) throw ConfigError(where + ": [scenario] may appear only once");
        sawScenario = true;
        section = Section::Scenario;
      } else if (name == "scene") {
        section = Section::Scene;
      } else if (name == "sensor") {
        section = Section::Sensor;
        config.sensors.emplace_back();
        sensorKeys = SeenKeys{};
      } else {
        throw ConfigError(where + ": unknown section '" + std::string(name) + "'");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(where + ": expected 'key = value' or a [section] header");
    const std::string key{trim(line.substr(0, eq))};
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");

    switch (section) {
      case Section::None:
        throw ConfigError(where + ": key '" + key + "' appears before any section");

      case Section::Scenario: {
        if (key != "motion") scenarioKeys.mark(key, where);
        if (key == "skeleton")
          config.skeletonPath = resolvePath(value, baseDir);
        else if (key == "motion")
          config.motionPaths.push_back(resolvePath(value, baseDir));
        else if (key == "fps")
          config.fps = parseDouble(value, where);
        else if (key == "seed")
          config.seed = parseSeed(value, where);
        else if (key == "bridge_frames")
          config.bridgeFrames = static_cast<int>(parseInt(value, where));
        else if (key == "blur_samples")
          config.blurSamples = static_cast<int>(parseInt(value, where));
        else if (key == "body_radius")
          config.bodyRadius = parseDouble(value, where);
        else if (key == "body_semantic")
          config.bodySemantic = static_cast<int>(parseInt(value, where));
        else if (key == "out_dir")
          config.outDir = resolvePath(value, baseDir);
        else
          throw ConfigError(where + ": unknown [scenario] key '" + key + "'");
        break;
      }

      case Section::Scene: {
        ScenePrimitive prim;
        if (key == "sphere") {
          const auto v = parseNumbers(value, 5, where);
          Sphere s;
          s.center = {v[0], v[1], v[2]};
          s.radius = v[3];
          prim.shape = s;
          prim.semanticId = parseSemanticId(v[4], where);
        } else if (key == "capsule") {
          const auto v = parseNumbers(value, 8, where);
          Capsule c;
          c.p0 = {v[0], v[1], v[2]};
          c.p1 = {v[3], v[4], v[5]};
          c.radius = v[6];
          prim.shape = c;
          prim.semanticId = parseSemanticId(v[7], where);
        } else if (key == "box") {
          const auto v = parseNumbers(value, 11, where);
          Box b;
          b.center = {v[0], v[1], v[2]};
          b.halfExtents = {v[3], v[4], v[5]};
          b.rotation = rotationFromWxyz({v[6], v[7], v[8], v[9]}, where);
          prim.shape = b;
          prim.semanticId = parseSemanticId(v[10], where);
        } else if (key == "plane") {
          const auto v = parseNumbers(value, 7, where);
          Plane p;
          p.point = {v[0], v[1], v[2]};
          p.normal = {v[3], v[4], v[5]};
          const double n = p.normal.norm();
          if (n < 1e-12) throw ConfigError(where + ": plane normal is near zero");
          p.normal /= n;
          prim.shape = p;
          prim.semanticId = parseSemanticId(v[6], where);
        } else {
          throw ConfigError(where + ": unknown [scene] key '" + key + "'");
        }
        try {
          prim.validate();
        } catch (const Error& e) {
          throw ConfigError(where + ": " + e.what());
        }
        config.scene.push_back(prim);
        break;
      }

      case Section::Sensor: {
        SensorConfig& sensor = config.sensors.back();
        sensorKeys.mark(key, where);
        if (key == "name")
          sensor.name = std::string(value);
        else if (key == "joint")
          sensor.joint = std::string(value);
        else if (key == "mount") {
          if (value == "spring")
            sensor.mount = MountKind::Spring;
          else if (value == "rigid")
            sensor.mount = MountKind::Rigid;
          else
            throw ConfigError(where + ": mount must be 'spring' or 'rigid'");
        } else if (key == "offset_t") {
          const auto v = parseNumbers(value, 3, where);
          sensor.offset.translation = {v[0], v[1], v[2]};
        } else if (key == "offset_q") {
          sensor.offset.rotation = rotationFromWxyz(parseNumbers(value, 4, where), where);
        } else if (key == "mass")
          sensor.spring.mass = parseDouble(value, where);
        else if (key == "stiffness")
          sensor.spring.stiffness = parseDouble(value, where);
        else if (key == "damping")
          sensor.spring.damping = parseDouble(value, where);
        else if (key == "rot_stiffness")
          sensor.spring.rotStiffness = parseDouble(value, where);
        else if (key == "rot_damping")
          sensor.spring.rotDamping = parseDouble(value, where);
        else if (key == "spring_rotation")
          sensor.spring.springRotation = parseBool(value, where);
        else if (key == "substeps")
          sensor.substeps = static_cast<int>(parseInt(value, where));
        else if (key == "fov")
          sensor.camera.fovDegrees = parseDouble(value, where);
        else if (key == "width")
          sensor.camera.width = static_cast<int>(parseInt(value, where));
        else if (key == "height")
          sensor.camera.height = static_cast<int>(parseInt(value, where));
        else if (key == "near_clip")
          sensor.camera.nearClip = parseDouble(value, where);
        else if (key == "accel_sigma")
          sensor.noise.accelSigma = parseDouble(value, where);
        else if (key == "gyro_sigma")
          sensor.noise.gyroSigma = parseDouble(value, where);
        else if (key == "pixel_dropout")
          sensor.noise.pixelDropoutRate = parseDouble(value, where);
        else
          throw ConfigError(where + ": unknown [sensor] key '" + key + "'");
        break;
      }
    }
  }

  try {
    config.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return config;
}

ScenarioConfig loadScenarioConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  const std::string baseDir = std::filesystem::path(path).parent_path().string();
  try {
    return parseScenarioConfig(in, baseDir);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

uint64_t fnv1a64(std::string_view bytes) {
  uint64_t hash = 14695981039346656037ull;
  for (const char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ull;
  }
  return hash;
}

}  // namespace egorig
