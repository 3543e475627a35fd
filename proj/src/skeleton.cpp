#include "egorig/skeleton.hpp"

#include <fstream>
#include <sstream>

#include "text_util.hpp"

namespace egorig {

Skeletond parseSkeleton(std::istream& in) {
  Skeletond skeleton;
  std::vector<double> scales;
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const auto body = detail::trim(detail::stripComment(line));
    if (body.empty()) continue;
    const std::string where = "skeleton line " + std::to_string(lineNo);
    const auto tokens = detail::splitWhitespace(body);
    if (tokens.size() != 6)
      throw ParseError(where + ": expected 'name parent ox oy oz scale', got " +
                       std::to_string(tokens.size()) + " fields");
    Skeletond::Joint joint;
    joint.name = std::string(tokens[0]);
    joint.parent = static_cast<int>(detail::parseInt(tokens[1], where));
    for (int k = 0; k < 3; ++k) joint.restOffset[k] = detail::parseDouble(tokens[2 + k], where);
    const double scale = detail::parseDouble(tokens[5], where);
    const int index = static_cast<int>(skeleton.joints.size());
    if (joint.parent < -1 || joint.parent >= index)
      throw ParseError(where + ": parent index " + std::to_string(joint.parent) +
                       " must reference an earlier joint");
    skeleton.joints.push_back(std::move(joint));
    scales.push_back(scale);
  }
  skeleton.boneScales = Eigen::Map<const Eigen::VectorXd>(scales.data(),
                                                          static_cast<long>(scales.size()));
  try {
    skeleton.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
  return skeleton;
}

Skeletond loadSkeleton(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open skeleton file '" + path + "'");
  try {
    return parseSkeleton(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void writeSkeleton(std::ostream& out, const Skeletond& skeleton) {
  skeleton.validate();
  out << "# name parent ox oy oz scale\n";
  for (int i = 0; i < skeleton.jointCount(); ++i) {
    const auto& j = skeleton.joints[i];
    out << j.name << ' ' << j.parent;
    for (int k = 0; k < 3; ++k) out << ' ' << detail::formatDouble(j.restOffset[k]);
    out << ' ' << detail::formatDouble(skeleton.boneScales[i]) << '\n';
  }
  if (!out) throw IoError("failed while writing skeleton");
}

}  // namespace egorig
