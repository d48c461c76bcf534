#pragma once

#include <Eigen/Core>
#include <string_view>

namespace scenevar {

inline constexpr int kEmbeddingDim = 64;

// Deterministic character-trigram hashing embedding, unit norm. Similar
// strings share trigrams, so cosine similarity is reproducible offline
// without a neural text model.
Eigen::VectorXd label_embedding(std::string_view label);

// Cosine similarity mapped to [0,1] via (1+cos)/2.
double embedding_similarity01(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace scenevar
