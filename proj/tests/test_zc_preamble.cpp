// SPDX-License-Identifier: Apache-2.0
//
// prach-hybrid: link-level simulator and hybrid receiver for 5G NR PRACH
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <doctest.h>

#include <random>

#include "prach/errors.hpp"
#include "prach/zc_preamble.hpp"
#include "support.hpp"

using namespace prach;

namespace {

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  REQUIRE(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

PreambleConfig cfg_for(int u, int v = 0, int L = 139) {
  PreambleConfig c;
  c.root = u;
  c.preamble_index = v;
  c.sequence_length = L;
  if (L == 839) c.cyclic_shift = 13;
  return c;
}

}  // namespace

TEST_SUITE("zc_preamble") {

TEST_CASE("base sequence closed-form points") {
  const auto x = generate_base_sequence(cfg_for(1));
  REQUIRE(x.size() == 139);
  CHECK(x.domain == Domain::time);
  CHECK(std::abs(x[0] - cplx{1.0, 0.0}) < 1e-15);
  // exp(-j pi 138 139 / 139) = exp(-j 138 pi) = 1
  CHECK(std::abs(x[138] - cplx{1.0, 0.0}) < 1e-12);
}

TEST_CASE("base sequence matches the definition and has unit modulus") {
  for (int L : {139, 839})
    for (int u : {1, 2, 3, 7, 25, 138}) {
      if (u >= L) continue;
      CAPTURE(L);
      CAPTURE(u);
      const auto x = generate_base_sequence(cfg_for(u, 0, L));
      CHECK(max_diff(x.values, oracle::zc(u, L)) < 1e-12);
      for (const auto& v : x.values) CHECK(std::abs(std::abs(v) - 1.0) < 1e-9);
    }
}

TEST_CASE("flat spectrum of every root against direct summation") {
  for (int u = 1; u <= 7; ++u) {
    CAPTURE(u);
    const auto X = dft(generate_base_sequence(cfg_for(u)));
    const auto ref = oracle::dft(oracle::zc(u, 139));
    CHECK(max_diff(X.values, ref) < 1e-10);
    for (const auto& v : X.values) CHECK(std::abs(std::abs(v) - std::sqrt(139.0)) < 1e-9);
  }
  const auto X839 = dft(generate_base_sequence(cfg_for(5, 0, 839)));
  for (const auto& v : X839.values) CHECK(std::abs(std::abs(v) - std::sqrt(839.0)) < 1e-9);
}

TEST_CASE("dft of a constant") {
  ComplexSeq ones{std::vector<cplx>(139, cplx{1.0, 0.0}), Domain::time};
  const auto X = dft(ones);
  CHECK(std::abs(X[0] - cplx{139.0, 0.0}) < 1e-10);
  for (std::size_t k = 1; k < 139; ++k) CHECK(std::abs(X[k]) < 1e-10);
}

TEST_CASE("dft/idft round trip and agreement with the direct path") {
  std::mt19937_64 g(3);
  std::normal_distribution<double> d;
  for (std::size_t L : {139u, 839u, 7u, 1u}) {
    ComplexSeq x{std::vector<cplx>(L), Domain::time};
    for (auto& v : x.values) v = {d(g), d(g)};
    const auto X = dft(x);
    CHECK(X.domain == Domain::freq);
    CHECK(max_diff(idft(X).values, x.values) < 1e-10);
    CHECK(max_diff(X.values, dft_direct(x).values) < 1e-10);
  }
}

TEST_CASE("transform length mismatch is an argument error") {
  std::vector<cplx> in(139), out(138);
  CHECK_THROWS_AS(dft_into(in, out), ArgumentError);
  CHECK_THROWS_AS(idft_into(in, out), ArgumentError);
  std::vector<cplx> empty;
  CHECK_THROWS_AS(dft_into(empty, empty), ArgumentError);
}

TEST_CASE("cyclic shift index arithmetic") {
  ComplexSeq x{std::vector<cplx>(139), Domain::time};
  for (std::size_t n = 0; n < 139; ++n) x[n] = {static_cast<double>(n), 0.0};
  CHECK(apply_cyclic_shift(x, cfg_for(1, 0)).values == x.values);
  CHECK(apply_cyclic_shift(x, cfg_for(1, 1))[0] == x[13]);
  CHECK(apply_cyclic_shift(x, cfg_for(1, 9))[30] == x[8]);
  ComplexSeq wrong{std::vector<cplx>(100), Domain::time};
  CHECK_THROWS_AS(apply_cyclic_shift(wrong, cfg_for(1, 1)), ArgumentError);
}

TEST_CASE("preamble spectrum: zero shift, rotation route and oracle") {
  CHECK(max_diff(preamble_freq(cfg_for(4, 0)).values, dft(generate_base_sequence(cfg_for(4))).values) < 1e-12);
  for (int u : {1, 6})
    for (int v = 0; v < 10; ++v) {
      const auto direct = preamble_freq(cfg_for(u, v));
      CHECK(max_diff(direct.values, preamble_freq_by_rotation(cfg_for(u, v)).values) < 1e-10);
      auto shifted = oracle::zc(u, 139);
      std::rotate(shifted.begin(), shifted.begin() + 13 * v, shifted.end());
      CHECK(max_diff(direct.values, oracle::dft(shifted)) < 1e-10);
    }
}

TEST_CASE("configuration validation") {
  CHECK_THROWS_AS(generate_base_sequence(cfg_for(0)), ConfigError);
  CHECK_THROWS_AS(generate_base_sequence(cfg_for(139)), ConfigError);
  CHECK_THROWS_AS(generate_base_sequence(cfg_for(1, 0, 140)), ConfigError);
  CHECK_THROWS_AS(cfg_for(1, 10).validate(), ConfigError);
  PreambleConfig small = cfg_for(1);
  small.fft_size = 64;
  CHECK_THROWS_AS(small.validate(), ConfigError);
  CHECK(is_prime(139));
  CHECK(is_prime(839));
  CHECK_FALSE(is_prime(141));
}

TEST_CASE("RAPID mapping over the root set") {
  RootSet roots;
  const PreambleConfig base{};
  CHECK(roots.rapid(0, 0, 10) == 0);
  CHECK(roots.rapid(1, 7, 10) == 17);
  CHECK(roots.rapid(6, 3, 10) == 63);
  CHECK(roots.rapid(6, 4, 10) == -1);
  const auto c = roots.config_for_rapid(41, base);
  CHECK(c.root == 5);
  CHECK(c.preamble_index == 1);
  CHECK_THROWS_AS(roots.config_for_rapid(64, base), ConfigError);
  RootSet tiny;
  tiny.roots = {1, 2};
  CHECK_THROWS_AS(tiny.validate(base), ConfigError);
}

}  // TEST_SUITE
