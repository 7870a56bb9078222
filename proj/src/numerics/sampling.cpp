#include "densrisk/numerics.hpp"

namespace densrisk::numerics {

namespace {
constexpr std::uint32_t kStreamTag = 0x6b64u;

std::uint32_t low(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
std::uint32_t high(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }
} // namespace

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index)
{
  std::seed_seq seq{low(seed), high(seed), low(index), high(index), kStreamTag};
  return std::mt19937_64(seq);
}

std::vector<double> sample_standard_normals(std::uint64_t seed,
                                            std::size_t count)
{
  std::vector<double> out;
  out.reserve(count);
  std::seed_seq seq{low(seed), high(seed)};
  std::mt19937_64 engine(seq);
  std::normal_distribution<double> normal;
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(normal(engine));
  return out;
}

} // namespace densrisk::numerics
