#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

// Counter-based random numbers (Philox4x32-10, Salmon et al., SC'11). A
// stream is addressed by (seed, counter) so any sample can be regenerated
// independently of evaluation order or thread count.

namespace modecap {

class Philox4x32
{
public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Block generate(Block counter, Key key)
  {
    for (int round = 0; round < 10; ++round) {
      counter = single_round(counter, key);
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return counter;
  }

private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static constexpr Block single_round(Block c, Key k)
  {
    std::uint64_t const p0 = std::uint64_t(kMul0) * c[0];
    std::uint64_t const p1 = std::uint64_t(kMul1) * c[2];
    auto const hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
    auto const hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

/// Two independent standard normals for the (seed, stream, index) triple,
/// via Box-Muller on two 53-bit uniforms in (0, 1).
inline std::array<double, 2> gaussian_pair(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
{
  Philox4x32::Block const ctr{std::uint32_t(index), std::uint32_t(index >> 32), std::uint32_t(stream),
                              std::uint32_t(stream >> 32)};
  Philox4x32::Key const key{std::uint32_t(seed), std::uint32_t(seed >> 32)};
  auto const r = Philox4x32::generate(ctr, key);
  auto to_unit = [](std::uint32_t hi, std::uint32_t lo) {
    std::uint64_t const bits = ((std::uint64_t(hi) << 32) | lo) >> 11;
    return (double(bits) + 0.5) * 0x1.0p-53;
  };
  double const u1 = to_unit(r[0], r[1]);
  double const u2 = to_unit(r[2], r[3]);
  double const radius = std::sqrt(-2.0 * std::log(u1));
  double const angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

/// Circularly-symmetric complex Gaussian with E|x|^2 = variance.
inline std::complex<double> complex_gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                                             double variance)
{
  auto const [re, im] = gaussian_pair(seed, stream, index);
  double const s = std::sqrt(variance / 2.0);
  return {s * re, s * im};
}

/// Uniform double in [0, 1) for (seed, stream, index).
inline double uniform_unit(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
{
  Philox4x32::Block const ctr{std::uint32_t(index), std::uint32_t(index >> 32), std::uint32_t(stream),
                              std::uint32_t(stream >> 32)};
  Philox4x32::Key const key{std::uint32_t(seed), std::uint32_t(seed >> 32)};
  auto const r = Philox4x32::generate(ctr, key);
  std::uint64_t const bits = ((std::uint64_t(r[0]) << 32) | r[1]) >> 11;
  return double(bits) * 0x1.0p-53;
}

/// Independent 64-bit seed for sub-run `tag` of a seeded run.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag)
{
  Philox4x32::Block const ctr{std::uint32_t(tag), std::uint32_t(tag >> 32), 0x5eedu, 0u};
  Philox4x32::Key const key{std::uint32_t(seed), std::uint32_t(seed >> 32)};
  auto const r = Philox4x32::generate(ctr, key);
  return (std::uint64_t(r[0]) << 32) | r[1];
}

} // namespace modecap
