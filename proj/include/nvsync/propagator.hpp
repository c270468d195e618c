#pragma once

#include <string>

#include "json.hpp"

#include "nvsync/linalg.hpp"

namespace nvsync {

enum class Frame { lab, interaction, nuclear_subspace };

std::string to_string(Frame f);
Frame frame_from_string(const std::string& s);

struct Propagator {
  MatX matrix;
  Frame frame = Frame::interaction;
  double leakage = 0.0;

  Eigen::Index dim() const { return matrix.rows(); }
  double unitarity_error() const { return nvsync::unitarity_error(matrix); }
};

// {"schema_version", "dim", "frame", "leakage", "entries": [[re, im], ...] row-major}
nlohmann::json propagator_to_json(const Propagator& p);
Propagator propagator_from_json(const nlohmann::json& j);

}  // namespace nvsync
