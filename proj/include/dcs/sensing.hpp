/*
 * Copyright 2026 dcs-lab contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DCS_SENSING_HPP
#define DCS_SENSING_HPP

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "dcs/errors.hpp"
#include "dcs/model.hpp"
#include "dcs/rng.hpp"

namespace dcs {

/// Random Gaussian sensing matrix with unitl2-norm columns. With the
/// sparsity basis fixed to identity, this is also the recovery matrix A.
struct SensingMatrix {
  int m = 0;
  int n = 0;
  std::uint64_t seed = 0;
  Mat entries;
};

/// i.i.d. standard Gaussian entries, then each column scaled to unit norm.
/// Deterministic in seed (column-major draw order).
inline SensingMatrix gen_matrix(int m, int n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw invalid_params("gen_matrix: zero dimension");
  Rng rng(seed);
  Mat A(m, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < m; ++r) A(r, c) = rng.gaussian();
  for (int c = 0; c < n; ++c) {
    const double norm = A.col(c).norm();
    if (!(norm > 0.0)) throw invalid_params("gen_matrix: degenerate column");
    A.col(c) /= norm;
  }
  return SensingMatrix{m, n, seed, std::move(A)};
}

/// y = Phi x.
inline Vec measure(const SensingMatrix& Phi, const Vec& x) {
  if (x.size() != Phi.n)
    throw dimension_mismatch("measure: x has length " +
                             std::to_string(x.size()) + ", expected " +
                             std::to_string(Phi.n));
  return Phi.entries * x;
}

/// Uniform midrise scalar quantizer over [-S, S] with 2^R levels.
/// step = 2S / 2^R; code = clamp(floor((v+S)/step), 0, 2^R - 1);
/// reconstruction = -S + (code + 0.5) * step.
struct Quantizer {
  int R = 8;      // bits per measurement, 1 <= R <= 56
  double S = 1.0;  // half-range, > 0

  double step() const { return 2.0 * S / std::ldexp(1.0, R); }
  std::uint64_t levels() const { return std::uint64_t{1} << R; }
};

inline void validate(const Quantizer& q) {
  if (q.R < 1) throw invalid_params("quantizer: invalid rate, R must be >= 1");
  if (q.R > 56)
    throw invalid_params("quantizer: R > 56 exceeds exact code range");
  if (!(q.S > 0.0) || !std::isfinite(q.S))
    throw invalid_params("quantizer: scale S must be positive and finite");
}

inline std::uint64_t quantize_value(double v, const Quantizer& q) {
  const double step = q.step();
  const double pos = std::floor((v + q.S) / step);
  if (!(pos > 0.0)) return 0;
  const double top = static_cast<double>(q.levels() - 1);
  if (pos > top) return q.levels() - 1;
  return static_cast<std::uint64_t>(pos);
}

inline double dequantize_code(std::uint64_t code, const Quantizer& q) {
  return -q.S + (static_cast<double>(code) + 0.5) * q.step();
}

inline std::vector<std::uint64_t> quantize(const Vec& y, const Quantizer& q) {
  validate(q);
  std::vector<std::uint64_t> codes(static_cast<std::size_t>(y.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i)
    codes[static_cast<std::size_t>(i)] = quantize_value(y[i], q);
  return codes;
}

inline Vec dequantize(const std::vector<std::uint64_t>& codes,
                      const Quantizer& q) {
  validate(q);
  Vec y(static_cast<Eigen::Index>(codes.size()));
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (codes[i] >= q.levels())
      throw invalid_params("dequantize: code out of range for rate R");
    y[static_cast<Eigen::Index>(i)] = dequantize_code(codes[i], q);
  }
  return y;
}

/// The J measurement vectors of one ensemble, optionally after a
/// quantize/dequantize round trip (quantized=true). Node 0 is the
/// side-information node.
struct MeasurementSet {
  std::vector<Vec> y;
  bool quantized = false;
  std::optional<Quantizer> quantizer;
};

/// Empirical lower bound on the RIP constant delta_k of A: the max of
/// |  ||A theta||_2^2 - 1 | over `samples` random unit-norm k-sparse
/// vectors (uniform support, Gaussian coefficients). Nondecreasing in
/// `samples` for a fixed seed (the sample sequence is a prefix chain).
/// Values >= 1 are possible and indicate outright RIP failure at order k.
inline double estimate_rip(const Mat& A, int k, int samples,
                           std::uint64_t seed) {
  const int n = static_cast<int>(A.cols());
  if (k < 1 || k > n) throw invalid_params("estimate_rip: invalid sparsity");
  if (samples < 1) throw invalid_params("estimate_rip: samples must be >= 1");
  Rng rng(seed);
  double worst = 0.0;
  Vec coeffs(k);
  Vec img(A.rows());
  for (int s = 0; s < samples; ++s) {
    const auto support = rng.sample_indices(n, k);
    for (int i = 0; i < k; ++i) coeffs[i] = rng.gaussian();
    const double norm = coeffs.norm();
    if (!(norm > 0.0)) continue;
    coeffs /= norm;
    img.setZero();
    for (int i = 0; i < k; ++i) img += coeffs[i] * A.col(support[i]);
    worst = std::max(worst, std::abs(img.squaredNorm() - 1.0));
  }
  return worst;
}

inline double estimate_rip(const SensingMatrix& A, int k, int samples,
                           std::uint64_t seed) {
  return estimate_rip(A.entries, k, samples, seed);
}

/// Quantized measurements of a whole ensemble, ready for file exchange.
struct QuantizedSet {
  int m = 0;
  Quantizer quantizer;
  std::vector<std::vector<std::uint64_t>> codes;  // J vectors of m codes
};

inline QuantizedSet quantize_set(const std::vector<Vec>& y,
                                 const Quantizer& q) {
  validate(q);
  if (y.empty()) throw invalid_params("quantize_set: empty measurement set");
  QuantizedSet qs;
  qs.m = static_cast<int>(y.front().size());
  qs.quantizer = q;
  for (const Vec& v : y) {
    if (v.size() != qs.m)
      throw dimension_mismatch("quantize_set: ragged measurement lengths");
    qs.codes.push_back(quantize(v, q));
  }
  return qs;
}

inline MeasurementSet dequantize_set(const QuantizedSet& qs) {
  MeasurementSet set;
  set.quantized = true;
  set.quantizer = qs.quantizer;
  for (const auto& codes : qs.codes) set.y.push_back(dequantize(codes, qs.quantizer));
  return set;
}

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline std::uint64_t get_uint(const unsigned char* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= std::uint64_t{p[i]} << (8 * i);
  return v;
}

}  // namespace detail

/// Measurement file layout (all little-endian):
///   u32 m, u32 J, u32 R, f64 S, then J*m codes of ceil(R/8) bytes each,
/// node-major (node 0 first).
inline void save_quantized(const QuantizedSet& qs, const std::string& path) {
  validate(qs.quantizer);
  const int bytes = (qs.quantizer.R + 7) / 8;
  std::string buf;
  detail::put_u32(buf, static_cast<std::uint32_t>(qs.m));
  detail::put_u32(buf, static_cast<std::uint32_t>(qs.codes.size()));
  detail::put_u32(buf, static_cast<std::uint32_t>(qs.quantizer.R));
  std::uint64_t sbits;
  static_assert(sizeof(sbits) == sizeof(double));
  std::memcpy(&sbits, &qs.quantizer.S, sizeof(double));
  for (int i = 0; i < 8; ++i)
    buf.push_back(static_cast<char>((sbits >> (8 * i)) & 0xff));
  for (const auto& node : qs.codes) {
    if (static_cast<int>(node.size()) != qs.m)
      throw dimension_mismatch("save_quantized: ragged code vectors");
    for (std::uint64_t code : node)
      for (int i = 0; i < bytes; ++i)
        buf.push_back(static_cast<char>((code >> (8 * i)) & 0xff));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("save_quantized: cannot open " + path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw io_error("save_quantized: write failed for " + path);
}

inline QuantizedSet load_quantized(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("load_quantized: cannot open " + path);
  std::string buf((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  if (buf.size() < 20) throw io_error("load_quantized: truncated header");
  const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
  QuantizedSet qs;
  qs.m = static_cast<int>(detail::get_uint(p, 4));
  const auto J = static_cast<std::size_t>(detail::get_uint(p + 4, 4));
  qs.quantizer.R = static_cast<int>(detail::get_uint(p + 8, 4));
  const std::uint64_t sbits = detail::get_uint(p + 12, 8);
  std::memcpy(&qs.quantizer.S, &sbits, sizeof(double));
  validate(qs.quantizer);
  if (qs.m < 1) throw io_error("load_quantized: bad m");
  const int bytes = (qs.quantizer.R + 7) / 8;
  const std::size_t need =
      20 + J * static_cast<std::size_t>(qs.m) * static_cast<std::size_t>(bytes);
  if (buf.size() != need)
    throw io_error("load_quantized: size mismatch, expected " +
                   std::to_string(need) + " bytes, got " +
                   std::to_string(buf.size()));
  const unsigned char* cur = p + 20;
  qs.codes.assign(J, {});
  for (std::size_t j = 0; j < J; ++j) {
    auto& node = qs.codes[j];
    node.resize(static_cast<std::size_t>(qs.m));
    for (int i = 0; i < qs.m; ++i) {
      node[static_cast<std::size_t>(i)] = detail::get_uint(cur, bytes);
      if (node[static_cast<std::size_t>(i)] >= qs.quantizer.levels())
        throw io_error("load_quantized: code exceeds 2^R - 1");
      cur += bytes;
    }
  }
  return qs;
}

}  // namespace dcs

#endif  // DCS_SENSING_HPP
