/**
 * Copyright (c) 2026 the transw authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License. */

#ifndef TRANSW_TRANSW_MODEL_HPP
#define TRANSW_TRANSW_MODEL_HPP

#include <string>
#include <vector>

#include "transw/model.hpp"
#include "transw/rng.hpp"
#include "transw/word_table.hpp"

namespace transw {

// Entity and relation embeddings composed from word vectors:
//
//   h = sum_i  v(word_i) (.) c_role(word_i)  +  b_role
//
// where (.) is the Hadamard product, c_role is a learned per-word connection
// vector (one table for the entity role, one for the relation role), and
// b_role a shared bias. Because parameters are keyed by word, surfaces never
// seen in training still compose to a scoreable vector.
class TransWModel : public Model {
 public:
  // Builds token lists for every vocab entry (through the name map), unions
  // their words into one word list, materializes word vectors (stored table
  // or OOV policy), and initializes connection vectors to all-ones plus
  // uniform noise in [-0.1, 0.1]; biases start at zero.
  TransWModel(const Vocab& entities, const Vocab& relations, const NameMap& names,
              const WordEmbeddingTable& words, Norm norm, bool fine_tune_words,
              bool project_entities, Rng& init_rng);

  ModelKind kind() const override { return ModelKind::TransW; }
  int entity_count() const override { return static_cast<int>(ent_tokens_.size()); }
  int relation_count() const override { return static_cast<int>(rel_tokens_.size()); }

  void entity_embedding(int id, std::vector<double>& out) const override;
  void relation_embedding(int id, std::vector<double>& out) const override;
  double score(const Triple& t) const override;
  double pair_gradients(const Triple& pos, const Triple& neg, double margin,
                        GradientBuffer& buf) const override;
  void apply_gradients(const GradientBuffer& buf, double lr) override;

  // Composes an arbitrary token sequence. Tokens without a trained
  // connection vector fall back to all-ones (plain word vector); tokens
  // outside the model's word list resolve through `external`, when given,
  // and otherwise through the stored OOV policy.
  ComposedEmbedding compose(const std::vector<std::string>& tokens, Role role,
                            const WordEmbeddingTable* external = nullptr) const;

  // Composes a surface form: tokenize, then compose. Zero tokens yield the
  // role bias alone.
  ComposedEmbedding compose_surface(std::string_view surface, Role role,
                                    const WordEmbeddingTable* external = nullptr) const;

  // --- state (public in the usual toolkit style; serialization and tests
  // --- read it directly)
  std::vector<std::string> entity_surfaces;
  std::vector<std::string> relation_surfaces;
  std::vector<std::string> word_list;  // union of entity/relation words
  Mat word_vecs;                       // n_words x k, frozen unless fine_tune_words
  Mat conn_ent;                        // n_words x k
  Mat conn_rel;                        // n_words x k
  std::vector<double> bias_ent;        // shared by head and tail roles
  std::vector<double> bias_rel;
  bool fine_tune_words = false;
  bool project_entities = false;
  OovPolicy oov_policy = OovPolicy::HashSeeded;
  double oov_scale = 0.0;

  const std::vector<std::vector<int>>& entity_tokens() const { return ent_tokens_; }
  const std::vector<std::vector<int>>& relation_tokens() const { return rel_tokens_; }
  int word_row(std::string_view word) const;  // -1 when absent

 private:
  friend struct ModelCodec;
  TransWModel() = default;

  void compose_entity_raw(int id, double* out) const;
  void compose_relation_raw(int id, double* out) const;
  void rebuild_word_index();

  std::vector<std::vector<int>> ent_tokens_;  // rows into the word tables
  std::vector<std::vector<int>> rel_tokens_;
  std::unordered_map<std::string, int, StringHash, StringEq> word_index_;
};

}  // namespace transw

#endif
