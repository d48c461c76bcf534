#include "scenevar/embedding.hpp"

#include "scenevar/util.hpp"

namespace scenevar {

Eigen::VectorXd label_embedding(std::string_view label) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(kEmbeddingDim);
  std::string padded = "^" + to_lower(label) + "$";
  for (size_t i = 0; i + 3 <= padded.size(); ++i) {
    uint64_t h = fnv1a(std::string_view(padded).substr(i, 3));
    int dim = static_cast<int>(h % kEmbeddingDim);
    double sign = ((h >> 32) & 1) ? 1.0 : -1.0;
    v[dim] += sign;
  }
  double norm = v.norm();
  if (norm < 1e-12) {
    v[0] = 1.0;
    return v;
  }
  return v / norm;
}

double embedding_similarity01(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double cos = a.dot(b) / std::max(1e-12, a.norm() * b.norm());
  return 0.5 * (1.0 + std::clamp(cos, -1.0, 1.0));
}

}  // namespace scenevar
