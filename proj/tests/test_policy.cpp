// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "tlpo/errors.hpp"
#include "tlpo/policy.hpp"
#include "tlpo/rng.hpp"

using namespace tlpo;

namespace {

PolicyTable make_policy(int m = 1, std::int32_t vocab = 4, bool coupling = false) {
  std::vector<LangTag> tags;
  if (coupling) {
    tags.resize(static_cast<std::size_t>(vocab));
    for (std::int32_t i = 0; i < vocab; ++i)
      tags[static_cast<std::size_t>(i)] = static_cast<LangTag>(i % kNumLangTags);
  }
  return PolicyTable(m, vocab, 0xFEED, coupling, tags);
}

Context ctx_of(std::vector<std::int32_t> window, std::int64_t prompt = -1) {
  Context c;
  c.prompt_id = prompt;
  c.window = std::move(window);
  return c;
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

TEST_CASE("uniform logits give a uniform distribution") {
  PolicyTable policy = make_policy();
  PolicyRow row;
  row.logits = {0, 0, 0, 0};
  policy.set_row(policy.key_of(ctx_of({0})), row);
  const auto dist = policy.next_token_dist(ctx_of({0}));
  for (double p : dist.probs) CHECK(p == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("softmax of [ln 2, 0, 0, 0]") {
  PolicyTable policy = make_policy();
  PolicyRow row;
  row.logits = {std::log(2.0), 0, 0, 0};
  policy.set_row(policy.key_of(ctx_of({0})), row);
  const auto dist = policy.next_token_dist(ctx_of({0}));
  CHECK(dist.probs[0] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(dist.probs[1] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(dist.probs[2] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(dist.probs[3] == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("extreme logits do not overflow") {
  PolicyTable policy = make_policy();
  PolicyRow row;
  row.logits = {1000, 0, 0, 0};
  policy.set_row(policy.key_of(ctx_of({0})), row);
  const auto dist = policy.next_token_dist(ctx_of({0}));
  CHECK(std::isfinite(dist.probs[0]));
  CHECK(dist.probs[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sum(dist.probs) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("unseen contexts fall back to uniform") {
  PolicyTable policy = make_policy();
  const auto dist = policy.next_token_dist(ctx_of({3}));
  for (double p : dist.probs) CHECK(p == doctest::Approx(0.25));
}

TEST_CASE("context key drops the prompt id once the window is full") {
  PolicyTable policy = make_policy(2, 4);
  CHECK(policy.key_of(ctx_of({1, 2}, 7)).prompt == -1);
  CHECK(policy.key_of(ctx_of({1}, 7)).prompt == 7);
  CHECK(policy.key_of(ctx_of({0, 1, 2, 3}, 7)).window ==
        std::vector<std::int32_t>{2, 3});
}

TEST_CASE("distributions stay normalized through updates") {
  PolicyTable policy = make_policy(1, 6, true);
  Rng rng(3);
  for (int round = 0; round < 50; ++round) {
    SparseGradient g;
    g.key = policy.key_of(ctx_of({static_cast<std::int32_t>(rng.next_below(6))}));
    g.d_logits.resize(6);
    for (double& v : g.d_logits) v = rng.next_unit() - 0.5;
    for (double& v : g.d_tag_bias) v = rng.next_unit() - 0.5;
    policy.apply_update(g, 0.3);
    const auto dist = policy.dist_for_key(g.key);
    CHECK(sum(dist.probs) == doctest::Approx(1.0).epsilon(1e-12));
    for (double p : dist.probs) CHECK(p >= 0.0);
  }
}

TEST_CASE("log prob gradient on a uniform row") {
  PolicyTable policy = make_policy();
  const auto g = policy.log_prob_grad(ctx_of({1}), 0);
  CHECK(g.d_logits[0] == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(g.d_logits[1] == doctest::Approx(-0.25).epsilon(1e-9));
  CHECK(g.d_logits[2] == doctest::Approx(-0.25).epsilon(1e-9));
  CHECK(g.d_logits[3] == doctest::Approx(-0.25).epsilon(1e-9));
}

TEST_CASE("log prob gradient entries sum to zero") {
  PolicyTable policy = make_policy(1, 8);
  Rng rng(9);
  PolicyRow row;
  row.logits.resize(8);
  for (double& v : row.logits) v = 3.0 * (rng.next_unit() - 0.5);
  policy.set_row(policy.key_of(ctx_of({2})), row);
  for (std::int32_t tok = 0; tok < 8; ++tok) {
    const auto g = policy.log_prob_grad(ctx_of({2}), tok);
    CHECK(sum(g.d_logits) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("saturated softmax has a vanishing gradient") {
  PolicyTable policy = make_policy();
  PolicyRow row;
  row.logits = {60, 0, 0, 0};
  policy.set_row(policy.key_of(ctx_of({0})), row);
  const auto g = policy.log_prob_grad(ctx_of({0}), 0);
  for (double v : g.d_logits) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("log prob gradient matches central finite differences") {
  // 100 random (row, token) pairs, h = 1e-6, relative error <= 1e-6;
  // covers both the plain and the tag-coupled parameterization.
  Rng rng(1234);
  for (int trial = 0; trial < 100; ++trial) {
    const bool coupling = trial % 2 == 1;
    const std::int32_t vocab = 4 + static_cast<std::int32_t>(rng.next_below(8));
    PolicyTable policy = make_policy(1, vocab, coupling);
    PolicyRow row;
    row.logits.resize(static_cast<std::size_t>(vocab));
    for (double& v : row.logits) v = 4.0 * (rng.next_unit() - 0.5);
    for (double& v : row.tag_bias) v = coupling ? rng.next_unit() - 0.5 : 0.0;
    const Context ctx = ctx_of({static_cast<std::int32_t>(rng.next_below(vocab))});
    const ContextKey key = policy.key_of(ctx);
    policy.set_row(key, row);
    const auto token = static_cast<std::int32_t>(rng.next_below(vocab));
    const SparseGradient g = policy.log_prob_grad(ctx, token);

    const double h = 1e-6;
    auto log_prob_with = [&](const PolicyRow& r) {
      PolicyTable p2 = make_policy(1, vocab, coupling);
      p2.set_row(key, r);
      return std::log(p2.prob_of(ctx, token));
    };
    std::vector<double> fd;
    for (std::size_t j = 0; j < row.logits.size(); ++j) {
      PolicyRow plus = row, minus = row;
      plus.logits[j] += h;
      minus.logits[j] -= h;
      fd.push_back((log_prob_with(plus) - log_prob_with(minus)) / (2 * h));
    }
    std::vector<double> analytic = g.d_logits;
    if (coupling) {
      for (std::size_t t = 0; t < kNumLangTags; ++t) {
        PolicyRow plus = row, minus = row;
        plus.tag_bias[t] += h;
        minus.tag_bias[t] -= h;
        fd.push_back((log_prob_with(plus) - log_prob_with(minus)) / (2 * h));
        analytic.push_back(g.d_tag_bias[t]);
      }
    }
    double diff2 = 0.0, norm2 = 0.0;
    for (std::size_t j = 0; j < fd.size(); ++j) {
      diff2 += (fd[j] - analytic[j]) * (fd[j] - analytic[j]);
      norm2 += analytic[j] * analytic[j];
    }
    CHECK(std::sqrt(diff2) <= 1e-6 * std::max(std::sqrt(norm2), 1e-12));
  }
}

TEST_CASE("apply_update identities") {
  PolicyTable policy = make_policy();
  const ContextKey key = policy.key_of(ctx_of({0}));
  PolicyRow row;
  row.logits = {0.5, -0.2, 0.1, 0.0};
  policy.set_row(key, row);
  const PolicyTable before = policy;

  SparseGradient zero;
  zero.key = key;
  zero.d_logits = {0, 0, 0, 0};
  policy.apply_update(zero, 1.0);
  CHECK(policy == before);

  SparseGradient g;
  g.key = key;
  g.d_logits = {1, -1, 0.5, 0};
  policy.apply_update(g, 0.0);
  CHECK(policy == before);
}

TEST_CASE("single-entry update reproduces the softmax example") {
  PolicyTable policy = make_policy();
  const ContextKey key = policy.key_of(ctx_of({0}));
  PolicyRow row;
  row.logits = {0, 0, 0, 0};
  policy.set_row(key, row);
  SparseGradient g;
  g.key = key;
  g.d_logits = {1, 0, 0, 0};
  policy.apply_update(g, std::log(2.0));
  const auto dist = policy.dist_for_key(key);
  CHECK(dist.probs[0] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(dist.probs[1] == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("updates on unseen contexts materialize a zero row first") {
  PolicyTable policy = make_policy();
  SparseGradient g;
  g.key = policy.key_of(ctx_of({2}));
  g.d_logits = {0.5, 0, 0, 0};
  policy.apply_update(g, 1.0);
  CHECK(policy.row_count() == 1);
  const PolicyRow* row = policy.find_row(g.key);
  REQUIRE(row != nullptr);
  CHECK(row->logits[0] == doctest::Approx(0.5));
  CHECK(row->logits[1] == 0.0);
}

TEST_CASE("non-finite gradients are rejected") {
  PolicyTable policy = make_policy();
  SparseGradient g;
  g.key = policy.key_of(ctx_of({0}));
  g.d_logits = {std::numeric_limits<double>::quiet_NaN(), 0, 0, 0};
  CHECK_THROWS_AS(policy.apply_update(g, 1.0), NumericError);
  g.d_logits = {1, 0, 0, 0};
  CHECK_THROWS_AS(policy.apply_update(g, std::numeric_limits<double>::infinity()),
                  NumericError);
}

TEST_CASE("degenerate policy repeats its only token") {
  PolicyTable policy = make_policy();
  for (std::int32_t w = 0; w < 4; ++w) {
    PolicyRow row;
    row.logits = {w == 2 ? 0.0 : 0.0, 0, 200, 0};  // token 2 dominates everywhere
    row.logits[2] = 200;
    policy.set_row(policy.key_of(ctx_of({w})), row);
  }
  const std::vector<std::int32_t> prompt{0};
  const auto seq = sample_sequence(policy, prompt, 0, 6, 99);
  CHECK(seq == std::vector<std::int32_t>{2, 2, 2, 2, 2, 2});
}

TEST_CASE("sampling is a pure function of (policy, prompt, seed)") {
  PolicyTable policy = make_policy(1, 5);
  Rng rng(21);
  for (std::int32_t w = 0; w < 5; ++w) {
    PolicyRow row;
    row.logits.resize(5);
    for (double& v : row.logits) v = rng.next_unit();
    policy.set_row(policy.key_of(ctx_of({w})), row);
  }
  const std::vector<std::int32_t> prompt{1, 3};
  const auto a = sample_sequence(policy, prompt, 0, 12, 777);
  const auto b = sample_sequence(policy, prompt, 0, 12, 777);
  const auto c = sample_sequence(policy, prompt, 0, 12, 778);
  CHECK(a == b);
  CHECK(a != c);  // overwhelmingly likely for a 12-step rollout
}

TEST_CASE("sampled frequencies match the distribution") {
  PolicyTable policy = make_policy(1, 2);
  PolicyRow row;
  row.logits = {std::log(0.7), std::log(0.3)};
  policy.set_row(policy.key_of(ctx_of({0})), row);
  policy.set_row(policy.key_of(ctx_of({1})), row);
  int zeros = 0;
  const int n = 10000;
  const std::vector<std::int32_t> prompt{0};
  for (int i = 0; i < n; ++i) {
    const auto seq = sample_sequence(policy, prompt, 0, 1, 1000 + i);
    if (seq[0] == 0) ++zeros;
  }
  const double freq = static_cast<double>(zeros) / n;
  CHECK(freq > 0.68);
  CHECK(freq < 0.72);
}

TEST_CASE("eos stops generation without being emitted") {
  PolicyTable policy = make_policy(1, 3);
  PolicyRow row;
  row.logits = {0, 0, 0};
  row.logits[1] = 200;  // always pick token 1
  policy.set_row(policy.key_of(ctx_of({0})), row);
  policy.set_row(policy.key_of(ctx_of({1})), row);
  SampleOptions opts;
  opts.eos_id = 1;
  const std::vector<std::int32_t> prompt{0};
  const auto seq = sample_sequence(policy, prompt, 0, 10, 5, opts);
  CHECK(seq.empty());
}

TEST_CASE("checkpoint round trip is bit-exact") {
  PolicyTable policy = make_policy(2, 5, true);
  Rng rng(31);
  for (int r = 0; r < 7; ++r) {
    PolicyRow row;
    row.logits.resize(5);
    for (double& v : row.logits) v = 1e3 * (rng.next_unit() - 0.5);
    for (double& v : row.tag_bias) v = rng.next_unit();
    Context ctx = ctx_of({static_cast<std::int32_t>(rng.next_below(5)),
                          static_cast<std::int32_t>(rng.next_below(5))});
    policy.set_row(policy.key_of(ctx), row);
  }
  const auto path = std::filesystem::temp_directory_path() / "tlpo_test_ckpt.bin";
  save_checkpoint(policy, 42, path.string());
  const auto [loaded, step] = load_checkpoint(path.string());
  CHECK(step == 42);
  CHECK(loaded == policy);  // exact double equality via defaulted comparison
  CHECK(policy_digest(loaded) == policy_digest(policy));
  std::filesystem::remove(path);
}

TEST_CASE("checkpoint refuses foreign files and versions") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto bogus = dir / "tlpo_bogus.bin";
  {
    std::ofstream out(bogus, std::ios::binary);
    out << "definitely not a checkpoint";
  }
  CHECK_THROWS_AS(load_checkpoint(bogus.string()), FormatError);

  // Flip the version field of a valid checkpoint.
  PolicyTable policy = make_policy();
  const auto good = dir / "tlpo_good.bin";
  save_checkpoint(policy, 0, good.string());
  std::fstream f(good, std::ios::binary | std::ios::in | std::ios::out);
  f.seekp(8);
  const std::uint32_t bad_version = 99;
  f.write(reinterpret_cast<const char*>(&bad_version), sizeof(bad_version));
  f.close();
  CHECK_THROWS_WITH_AS(load_checkpoint(good.string()),
                       doctest::Contains("version"), FormatError);
  CHECK_THROWS_AS(load_checkpoint((dir / "tlpo_missing.bin").string()), IoError);
  std::filesystem::remove(bogus);
  std::filesystem::remove(good);
}
