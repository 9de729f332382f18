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

#include "transw/serialize.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

#include "transw/transe_model.hpp"
#include "transw/transw_model.hpp"

namespace transw {

namespace {

constexpr char kMagic[4] = {'K', 'G', 'W', 'M'};
constexpr uint32_t kFormatVersion = 1;

constexpr uint8_t kFlagFineTune = 1u << 0;
constexpr uint8_t kFlagProject = 1u << 1;
constexpr uint8_t kFlagSigma = 1u << 2;
constexpr uint8_t kFlagCheckpoint = 1u << 3;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void bytes(const void* p, size_t n) { out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n)); }
  void u8(uint8_t v) { bytes(&v, 1); }
  void u32(uint32_t v) { bytes(&v, 4); }
  void u64(uint64_t v) { bytes(&v, 8); }
  void f64(double v) { bytes(&v, 8); }
  void tag(const char* t) { bytes(t, 4); }
  void str(const std::string& s) {
    u32(static_cast<uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  void doubles(const std::vector<double>& v) { bytes(v.data(), v.size() * sizeof(double)); }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  Reader(std::istream& in, std::string path) : in_(in), path_(std::move(path)) {}

  void set_section(std::string name) { section_ = std::move(name); }

  void bytes(void* p, size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<size_t>(in_.gcount()) != n)
      throw ToolkitError(ErrClass::ParseError,
                         path_ + ": truncated model file in section " + section_);
  }
  uint8_t u8() { uint8_t v; bytes(&v, 1); return v; }
  uint32_t u32() { uint32_t v; bytes(&v, 4); return v; }
  uint64_t u64() { uint64_t v; bytes(&v, 8); return v; }
  double f64() { double v; bytes(&v, 8); return v; }
  void expect_tag(const char* t) {
    set_section(t);
    char got[4];
    bytes(got, 4);
    if (std::memcmp(got, t, 4) != 0)
      throw ToolkitError(ErrClass::ParseError,
                         path_ + ": expected section " + t + ", found '" + std::string(got, 4) + "'");
  }
  std::string str() {
    uint32_t n = u32();
    std::string s(n, '\0');
    bytes(s.data(), n);
    return s;
  }
  void doubles(std::vector<double>& v, size_t n) {
    v.resize(n);
    bytes(v.data(), n * sizeof(double));
  }

 private:
  std::istream& in_;
  std::string path_;
  std::string section_ = "header";
};

void write_strings(Writer& w, const char* tag, const std::vector<std::string>& ss) {
  w.tag(tag);
  w.u32(static_cast<uint32_t>(ss.size()));
  for (const auto& s : ss) w.str(s);
}

void read_strings(Reader& r, const char* tag, std::vector<std::string>& ss) {
  r.expect_tag(tag);
  uint32_t n = r.u32();
  ss.clear();
  ss.reserve(n);
  for (uint32_t i = 0; i < n; i++) ss.push_back(r.str());
}

void write_mat(Writer& w, const char* tag, const Mat& m) {
  w.tag(tag);
  w.doubles(m.a);
}

void read_mat(Reader& r, const char* tag, Mat& m, int rows, int cols) {
  r.expect_tag(tag);
  m.rows = rows;
  m.cols = cols;
  r.doubles(m.a, static_cast<size_t>(rows) * static_cast<size_t>(cols));
}

void write_token_lists(Writer& w, const char* tag, const std::vector<std::vector<int>>& lists) {
  w.tag(tag);
  w.u32(static_cast<uint32_t>(lists.size()));
  for (const auto& l : lists) {
    w.u32(static_cast<uint32_t>(l.size()));
    for (int row : l) w.u32(static_cast<uint32_t>(row));
  }
}

void read_token_lists(Reader& r, const char* tag, std::vector<std::vector<int>>& lists,
                      uint32_t max_row) {
  r.expect_tag(tag);
  uint32_t n = r.u32();
  lists.assign(n, {});
  for (uint32_t i = 0; i < n; i++) {
    uint32_t m = r.u32();
    lists[i].reserve(m);
    for (uint32_t j = 0; j < m; j++) {
      uint32_t row = r.u32();
      if (row >= max_row)
        throw ToolkitError(ErrClass::ParseError, "token row out of range in section " +
                                                     std::string(tag));
      lists[i].push_back(static_cast<int>(row));
    }
  }
}

void write_header(Writer& w, const Model& model, const ModelHeader& h) {
  w.bytes(kMagic, 4);
  w.u32(kFormatVersion);
  w.u8(static_cast<uint8_t>(h.kind));
  w.u8(static_cast<uint8_t>(h.norm));
  uint8_t flags = 0;
  if (h.fine_tune_words) flags |= kFlagFineTune;
  if (h.project_entities) flags |= kFlagProject;
  if (h.sigma) flags |= kFlagSigma;
  if (h.checkpoint) flags |= kFlagCheckpoint;
  w.u8(flags);
  w.u8(static_cast<uint8_t>(h.oov_policy));
  w.u32(h.k);
  w.f64(h.oov_scale);
  if (h.sigma) w.f64(*h.sigma);
  if (h.checkpoint) {
    w.u32(static_cast<uint32_t>(h.checkpoint->epoch));
    w.f64(h.checkpoint->best_valid_loss);
    w.u32(static_cast<uint32_t>(h.checkpoint->epochs_since_improvement));
  }
  w.u64(model.entity_fingerprint);
  w.u64(model.relation_fingerprint);
  w.u64(model.word_fingerprint);
  w.u32(h.entity_count);
  w.u32(h.relation_count);
  w.u32(h.word_count);
}

ModelHeader read_header(Reader& r, const std::string& path) {
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw ToolkitError(ErrClass::ParseError, path + ": not a model file (bad magic)");
  ModelHeader h;
  h.version = r.u32();
  if (h.version != kFormatVersion)
    throw ToolkitError(ErrClass::VersionMismatch,
                       path + ": model format version " + std::to_string(h.version) +
                           ", this build reads version " + std::to_string(kFormatVersion));
  h.kind = static_cast<ModelKind>(r.u8());
  h.norm = static_cast<Norm>(r.u8());
  uint8_t flags = r.u8();
  h.oov_policy = static_cast<OovPolicy>(r.u8());
  h.fine_tune_words = flags & kFlagFineTune;
  h.project_entities = flags & kFlagProject;
  h.k = r.u32();
  h.oov_scale = r.f64();
  if (flags & kFlagSigma) h.sigma = r.f64();
  if (flags & kFlagCheckpoint) {
    CheckpointMeta meta;
    meta.epoch = static_cast<int>(r.u32());
    meta.best_valid_loss = r.f64();
    meta.epochs_since_improvement = static_cast<int>(r.u32());
    h.checkpoint = meta;
  }
  h.entity_fingerprint = r.u64();
  h.relation_fingerprint = r.u64();
  h.word_fingerprint = r.u64();
  h.entity_count = r.u32();
  h.relation_count = r.u32();
  h.word_count = r.u32();
  return h;
}

}  // namespace

// Private-constructor access for the load path.
struct ModelCodec {
  static std::unique_ptr<TransWModel> make_transw() {
    return std::unique_ptr<TransWModel>(new TransWModel());
  }
  static std::unique_ptr<TransEModel> make_transe() {
    return std::unique_ptr<TransEModel>(new TransEModel());
  }
  static void set_dims(Model& m, int k, Norm norm) {
    m.k_ = k;
    m.norm_ = norm;
  }
  static std::vector<std::vector<int>>& ent_tokens(TransWModel& m) { return m.ent_tokens_; }
  static std::vector<std::vector<int>>& rel_tokens(TransWModel& m) { return m.rel_tokens_; }
  static void rebuild_index(TransWModel& m) { m.rebuild_word_index(); }
};

void save_model(const Model& model, const std::string& path,
                const std::optional<CheckpointMeta>& checkpoint) {
  ModelHeader h;
  h.version = kFormatVersion;
  h.kind = model.kind();
  h.norm = model.norm();
  h.k = static_cast<uint32_t>(model.dim());
  h.sigma = model.sigma;
  h.checkpoint = checkpoint;
  h.entity_count = static_cast<uint32_t>(model.entity_count());
  h.relation_count = static_cast<uint32_t>(model.relation_count());

  const auto* tw = dynamic_cast<const TransWModel*>(&model);
  const auto* te = dynamic_cast<const TransEModel*>(&model);
  if (tw) {
    h.fine_tune_words = tw->fine_tune_words;
    h.project_entities = tw->project_entities;
    h.oov_policy = tw->oov_policy;
    h.oov_scale = tw->oov_scale;
    h.word_count = static_cast<uint32_t>(tw->word_list.size());
  }

  const std::filesystem::path target(path);
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw ToolkitError(ErrClass::IoError, "cannot write model file '" + tmp.string() + "'");
    Writer w(out);
    write_header(w, model, h);
    if (tw) {
      write_strings(w, "ENTS", tw->entity_surfaces);
      write_strings(w, "RELS", tw->relation_surfaces);
      write_strings(w, "WRDS", tw->word_list);
      write_mat(w, "WVEC", tw->word_vecs);
      write_mat(w, "CENT", tw->conn_ent);
      write_mat(w, "CREL", tw->conn_rel);
      w.tag("BENT");
      w.doubles(tw->bias_ent);
      w.tag("BREL");
      w.doubles(tw->bias_rel);
      write_token_lists(w, "ETOK", tw->entity_tokens());
      write_token_lists(w, "RTOK", tw->relation_tokens());
    } else if (te) {
      write_strings(w, "ENTS", te->entity_surfaces);
      write_strings(w, "RELS", te->relation_surfaces);
      write_mat(w, "EVEC", te->entity_vecs);
      write_mat(w, "RVEC", te->relation_vecs);
    } else {
      throw ToolkitError(ErrClass::Internal, "unknown model subclass");
    }
    w.tag("END!");
    out.flush();
    if (!out)
      throw ToolkitError(ErrClass::IoError, "write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, target);
}

ModelHeader read_model_header(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ToolkitError(ErrClass::InputMissing, "cannot open model file '" + path + "'");
  Reader r(in, path);
  return read_header(r, path);
}

std::unique_ptr<Model> load_model(const std::string& path, int expected_k,
                                  CheckpointMeta* checkpoint_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ToolkitError(ErrClass::InputMissing, "cannot open model file '" + path + "'");
  Reader r(in, path);
  ModelHeader h = read_header(r, path);
  if (expected_k > 0 && static_cast<uint32_t>(expected_k) != h.k)
    throw ToolkitError(ErrClass::ConfigInvalid,
                       path + ": model dimension " + std::to_string(h.k) +
                           " does not match expected " + std::to_string(expected_k));
  if (checkpoint_out && h.checkpoint) *checkpoint_out = *h.checkpoint;

  std::unique_ptr<Model> model;
  if (h.kind == ModelKind::TransW) {
    auto m = ModelCodec::make_transw();
    ModelCodec::set_dims(*m, static_cast<int>(h.k), h.norm);
    m->fine_tune_words = h.fine_tune_words;
    m->project_entities = h.project_entities;
    m->oov_policy = h.oov_policy;
    m->oov_scale = h.oov_scale;
    read_strings(r, "ENTS", m->entity_surfaces);
    read_strings(r, "RELS", m->relation_surfaces);
    read_strings(r, "WRDS", m->word_list);
    if (m->word_list.size() != h.word_count)
      throw ToolkitError(ErrClass::ParseError, path + ": word count disagrees with header");
    read_mat(r, "WVEC", m->word_vecs, static_cast<int>(h.word_count), static_cast<int>(h.k));
    read_mat(r, "CENT", m->conn_ent, static_cast<int>(h.word_count), static_cast<int>(h.k));
    read_mat(r, "CREL", m->conn_rel, static_cast<int>(h.word_count), static_cast<int>(h.k));
    r.expect_tag("BENT");
    r.doubles(m->bias_ent, h.k);
    r.expect_tag("BREL");
    r.doubles(m->bias_rel, h.k);
    read_token_lists(r, "ETOK", ModelCodec::ent_tokens(*m), h.word_count);
    read_token_lists(r, "RTOK", ModelCodec::rel_tokens(*m), h.word_count);
    if (ModelCodec::ent_tokens(*m).size() != h.entity_count ||
        ModelCodec::rel_tokens(*m).size() != h.relation_count)
      throw ToolkitError(ErrClass::ParseError, path + ": token lists disagree with header");
    ModelCodec::rebuild_index(*m);
    model = std::move(m);
  } else if (h.kind == ModelKind::TransE) {
    auto m = ModelCodec::make_transe();
    ModelCodec::set_dims(*m, static_cast<int>(h.k), h.norm);
    read_strings(r, "ENTS", m->entity_surfaces);
    read_strings(r, "RELS", m->relation_surfaces);
    read_mat(r, "EVEC", m->entity_vecs, static_cast<int>(h.entity_count), static_cast<int>(h.k));
    read_mat(r, "RVEC", m->relation_vecs, static_cast<int>(h.relation_count),
             static_cast<int>(h.k));
    model = std::move(m);
  } else {
    throw ToolkitError(ErrClass::ParseError, path + ": unknown model kind in header");
  }
  r.expect_tag("END!");
  model->entity_fingerprint = h.entity_fingerprint;
  model->relation_fingerprint = h.relation_fingerprint;
  model->word_fingerprint = h.word_fingerprint;
  model->sigma = h.sigma;
  return model;
}

}  // namespace transw
