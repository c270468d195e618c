#include "nvsync/propagator.hpp"

#include "nvsync/errors.hpp"

namespace nvsync {

std::string to_string(Frame f) {
  switch (f) {
    case Frame::lab: return "lab";
    case Frame::interaction: return "interaction";
    case Frame::nuclear_subspace: return "nuclear-subspace";
  }
  return "unknown";
}

Frame frame_from_string(const std::string& s) {
  if (s == "lab") return Frame::lab;
  if (s == "interaction") return Frame::interaction;
  if (s == "nuclear-subspace") return Frame::nuclear_subspace;
  throw DomainError("unknown frame tag: " + s);
}

nlohmann::json propagator_to_json(const Propagator& p) {
  nlohmann::json entries = nlohmann::json::array();
  for (Eigen::Index i = 0; i < p.matrix.rows(); ++i)
    for (Eigen::Index k = 0; k < p.matrix.cols(); ++k)
      entries.push_back({p.matrix(i, k).real(), p.matrix(i, k).imag()});
  return {{"schema_version", 1}, {"dim", p.dim()},          {"frame", to_string(p.frame)},
          {"leakage", p.leakage},  {"entries", entries}};
}

Propagator propagator_from_json(const nlohmann::json& j) {
  const auto dim = j.at("dim").get<Eigen::Index>();
  const auto& e = j.at("entries");
  if (dim <= 0 || e.size() != static_cast<size_t>(dim * dim))
    throw DomainError("propagator entries do not match dim");
  Propagator p;
  p.matrix.resize(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index k = 0; k < dim; ++k) {
      const auto& z = e.at(static_cast<size_t>(i * dim + k));
      p.matrix(i, k) = cplx{z.at(0).get<double>(), z.at(1).get<double>()};
    }
  p.frame = frame_from_string(j.at("frame").get<std::string>());
  p.leakage = j.value("leakage", 0.0);
  return p;
}

}  // namespace nvsync
