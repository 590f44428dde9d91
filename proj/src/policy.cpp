// SPDX-License-Identifier: Apache-2.0

#include "tlpo/policy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "tlpo/digest.hpp"
#include "tlpo/errors.hpp"
#include "tlpo/rng.hpp"

namespace tlpo {

namespace {

constexpr char kMagic[8] = {'T', 'L', 'P', 'O', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kCheckpointVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

void softmax_inplace(std::vector<double>& z) {
  double zmax = -std::numeric_limits<double>::infinity();
  for (double v : z) zmax = std::max(zmax, v);
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - zmax);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

template <typename T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw FormatError("checkpoint truncated");
  return v;
}

}  // namespace

std::string ContextKey::to_string() const {
  std::ostringstream os;
  os << "p" << prompt << "|";
  for (std::size_t i = 0; i < window.size(); ++i) {
    if (i) os << ",";
    os << window[i];
  }
  return os.str();
}

PolicyTable::PolicyTable(int window_len, std::int32_t vocab_size,
                         std::uint64_t vocab_hash, bool tag_coupling,
                         std::vector<LangTag> tags)
    : window_len_(window_len),
      vocab_size_(vocab_size),
      vocab_hash_(vocab_hash),
      tag_coupling_(tag_coupling),
      tags_(std::move(tags)) {
  if (window_len_ < 1 || window_len_ > 3)
    throw ConfigError("context window length must be in [1, 3]");
  if (vocab_size_ < 1) throw ConfigError("vocab size must be >= 1");
  if (tag_coupling_ && tags_.size() != static_cast<std::size_t>(vocab_size_))
    throw ConfigError("tag coupling requires one tag per token");
}

ContextKey PolicyTable::key_of(const Context& ctx) const {
  ContextKey key;
  key.window.assign(ctx.window.begin(), ctx.window.end());
  if (key.window.size() > static_cast<std::size_t>(window_len_)) {
    key.window.erase(key.window.begin(),
                     key.window.end() - window_len_);
  }
  // Prompt identity matters only while the window is underfull.
  key.prompt = key.window.size() < static_cast<std::size_t>(window_len_)
                   ? ctx.prompt_id
                   : -1;
  return key;
}

std::vector<double> PolicyTable::effective_logits(const ContextKey& key) const {
  std::vector<double> z(static_cast<std::size_t>(vocab_size_), 0.0);
  const auto it = rows_.find(key);
  if (it == rows_.end()) return z;
  const PolicyRow& row = it->second;
  z = row.logits;
  if (tag_coupling_) {
    for (std::size_t j = 0; j < z.size(); ++j)
      z[j] += row.tag_bias[static_cast<std::size_t>(tags_[j])];
  }
  return z;
}

Distribution PolicyTable::dist_for_key(const ContextKey& key) const {
  std::vector<double> z = effective_logits(key);
  softmax_inplace(z);
  return Distribution{std::move(z)};
}

Distribution PolicyTable::next_token_dist(const Context& ctx) const {
  return dist_for_key(key_of(ctx));
}

double PolicyTable::prob_of(const Context& ctx, std::int32_t token) const {
  if (token < 0 || token >= vocab_size_)
    throw ConfigError("token id out of range");
  return next_token_dist(ctx).probs[static_cast<std::size_t>(token)];
}

SparseGradient PolicyTable::log_prob_grad(const Context& ctx,
                                          std::int32_t token) const {
  if (token < 0 || token >= vocab_size_)
    throw ConfigError("token id out of range");
  SparseGradient g;
  g.key = key_of(ctx);
  const Distribution dist = dist_for_key(g.key);
  g.d_logits.resize(static_cast<std::size_t>(vocab_size_));
  for (std::size_t j = 0; j < g.d_logits.size(); ++j)
    g.d_logits[j] = -dist.probs[j];
  g.d_logits[static_cast<std::size_t>(token)] += 1.0;
  if (tag_coupling_) {
    std::array<double, kNumLangTags> group_mass{};
    for (std::size_t j = 0; j < dist.probs.size(); ++j)
      group_mass[static_cast<std::size_t>(tags_[j])] += dist.probs[j];
    for (std::size_t t = 0; t < kNumLangTags; ++t) g.d_tag_bias[t] = -group_mass[t];
    g.d_tag_bias[static_cast<std::size_t>(tags_[static_cast<std::size_t>(token)])] += 1.0;
  }
  return g;
}

void PolicyTable::apply_update(const SparseGradient& grad, double step) {
  if (!std::isfinite(step)) throw NumericError("non-finite step size");
  if (grad.d_logits.size() != static_cast<std::size_t>(vocab_size_))
    throw ConfigError("gradient length does not match vocab size");
  for (double v : grad.d_logits)
    if (!std::isfinite(v)) throw NumericError("non-finite gradient entry");
  for (double v : grad.d_tag_bias)
    if (!std::isfinite(v)) throw NumericError("non-finite gradient entry");

  auto it = rows_.find(grad.key);
  if (it == rows_.end()) {
    PolicyRow zero;
    zero.logits.assign(static_cast<std::size_t>(vocab_size_), 0.0);
    it = rows_.emplace(grad.key, std::move(zero)).first;
  }
  PolicyRow& row = it->second;
  for (std::size_t j = 0; j < row.logits.size(); ++j)
    row.logits[j] += step * grad.d_logits[j];
  if (tag_coupling_) {
    for (std::size_t t = 0; t < kNumLangTags; ++t)
      row.tag_bias[t] += step * grad.d_tag_bias[t];
  }
}

void PolicyTable::set_row(const ContextKey& key, PolicyRow row) {
  if (row.logits.size() != static_cast<std::size_t>(vocab_size_))
    throw ConfigError("row length does not match vocab size");
  for (double v : row.logits)
    if (!std::isfinite(v)) throw NumericError("non-finite logit");
  rows_[key] = std::move(row);
}

const PolicyRow* PolicyTable::find_row(const ContextKey& key) const {
  const auto it = rows_.find(key);
  return it == rows_.end() ? nullptr : &it->second;
}

Context PolicyTable::advance(const Context& ctx, std::int32_t token) const {
  Context next = ctx;
  next.window.push_back(token);
  if (next.window.size() > static_cast<std::size_t>(window_len_))
    next.window.erase(next.window.begin(),
                      next.window.end() - window_len_);
  return next;
}

double PolicyTable::row_kl(const PolicyTable& other, const ContextKey& key) const {
  const Distribution p = dist_for_key(key);
  const Distribution q = other.dist_for_key(key);
  double kl = 0.0;
  for (std::size_t j = 0; j < p.probs.size(); ++j)
    kl += p.probs[j] * (std::log(p.probs[j]) - std::log(q.probs[j]));
  return kl;
}

std::vector<std::int32_t> sample_sequence(const PolicyTable& policy,
                                          std::span<const std::int32_t> prompt_tokens,
                                          std::int64_t prompt_id, int max_len,
                                          std::uint64_t seed,
                                          const SampleOptions& opts) {
  if (max_len < 1) throw ConfigError("max_len must be >= 1");
  Context ctx;
  ctx.prompt_id = prompt_id;
  ctx.window.assign(prompt_tokens.begin(), prompt_tokens.end());
  if (ctx.window.size() > static_cast<std::size_t>(policy.window_len()))
    ctx.window.erase(ctx.window.begin(),
                     ctx.window.end() - policy.window_len());

  Rng rng(seed);
  std::vector<std::int32_t> out;
  out.reserve(static_cast<std::size_t>(max_len));
  for (int t = 0; t < max_len; ++t) {
    const Distribution dist = policy.next_token_dist(ctx);
    std::int32_t token;
    if (opts.greedy) {
      std::size_t best = 0;
      for (std::size_t j = 1; j < dist.probs.size(); ++j)
        if (dist.probs[j] > dist.probs[best]) best = j;
      token = static_cast<std::int32_t>(best);
    } else {
      token = static_cast<std::int32_t>(sample_index(rng, dist.probs));
    }
    if (token == opts.eos_id) break;
    out.push_back(token);
    ctx = policy.advance(ctx, token);
  }
  return out;
}

Context context_after(const PolicyTable& policy,
                      std::span<const std::int32_t> prompt_tokens,
                      std::int64_t prompt_id,
                      std::span<const std::int32_t> generated) {
  Context ctx;
  ctx.prompt_id = prompt_id;
  ctx.window.assign(prompt_tokens.begin(), prompt_tokens.end());
  for (std::int32_t tok : generated) ctx.window.push_back(tok);
  if (ctx.window.size() > static_cast<std::size_t>(policy.window_len()))
    ctx.window.erase(ctx.window.begin(),
                     ctx.window.end() - policy.window_len());
  return ctx;
}

namespace {

void serialize_policy(const PolicyTable& policy, std::uint64_t step,
                      std::ostream& out) {
  out.write(kMagic, sizeof(kMagic));
  write_pod(out, kCheckpointVersion);
  write_pod(out, step);
  write_pod(out, static_cast<std::int32_t>(policy.window_len()));
  write_pod(out, policy.vocab_size());
  write_pod(out, policy.vocab_hash());
  write_pod(out, static_cast<std::uint8_t>(policy.tag_coupling() ? 1 : 0));
  const auto& tags = policy.tags();
  write_pod(out, static_cast<std::uint64_t>(tags.size()));
  for (LangTag t : tags) write_pod(out, static_cast<std::uint8_t>(t));
  write_pod(out, static_cast<std::uint64_t>(policy.row_count()));
  for (const auto& [key, row] : policy.rows()) {  // std::map: sorted, stable
    write_pod(out, key.prompt);
    write_pod(out, static_cast<std::uint32_t>(key.window.size()));
    for (std::int32_t w : key.window) write_pod(out, w);
    for (double v : row.logits) write_pod(out, v);
    for (double v : row.tag_bias) write_pod(out, v);
  }
}

}  // namespace

void save_checkpoint(const PolicyTable& policy, std::uint64_t step,
                     const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write checkpoint: " + path);
  serialize_policy(policy, step, out);
  if (!out) throw IoError("checkpoint write failed: " + path);
}

std::pair<PolicyTable, std::uint64_t> load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw FormatError("not a policy checkpoint: " + path);
  const auto version = read_pod<std::uint32_t>(in);
  if (version != kCheckpointVersion)
    throw FormatError("unsupported checkpoint version " + std::to_string(version) +
                      " (expected " + std::to_string(kCheckpointVersion) + ")");
  const auto step = read_pod<std::uint64_t>(in);
  const auto m = read_pod<std::int32_t>(in);
  const auto vocab_size = read_pod<std::int32_t>(in);
  const auto vocab_hash = read_pod<std::uint64_t>(in);
  const bool coupling = read_pod<std::uint8_t>(in) != 0;
  const auto ntags = read_pod<std::uint64_t>(in);
  std::vector<LangTag> tags;
  tags.reserve(ntags);
  for (std::uint64_t i = 0; i < ntags; ++i)
    tags.push_back(static_cast<LangTag>(read_pod<std::uint8_t>(in)));

  PolicyTable policy(m, vocab_size, vocab_hash, coupling, std::move(tags));
  const auto nrows = read_pod<std::uint64_t>(in);
  for (std::uint64_t r = 0; r < nrows; ++r) {
    ContextKey key;
    key.prompt = read_pod<std::int64_t>(in);
    const auto wlen = read_pod<std::uint32_t>(in);
    key.window.reserve(wlen);
    for (std::uint32_t i = 0; i < wlen; ++i)
      key.window.push_back(read_pod<std::int32_t>(in));
    PolicyRow row;
    row.logits.resize(static_cast<std::size_t>(vocab_size));
    for (double& v : row.logits) v = read_pod<double>(in);
    for (double& v : row.tag_bias) v = read_pod<double>(in);
    policy.set_row(key, std::move(row));
  }
  return {std::move(policy), step};
}

std::uint64_t policy_digest(const PolicyTable& policy) {
  std::ostringstream os(std::ios::binary);
  serialize_policy(policy, 0, os);
  return fnv1a64(os.str());
}

}  // namespace tlpo
