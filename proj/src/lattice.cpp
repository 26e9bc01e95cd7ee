#include "dscale/lattice.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace dscale::lattice {

namespace {

ShellTable build_shell_table(int cutoff) {
  const std::int64_t k = cutoff;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(3 * k * k + 1), 0);
  for (std::int64_t l = -k; l <= k; ++l)
    for (std::int64_t m = -k; m <= k; ++m)
      for (std::int64_t n = -k; n <= k; ++n) ++counts[static_cast<std::size_t>(l * l + m * m + n * n)];

  ShellTable t;
  t.cutoff = cutoff;
  for (std::size_t s2 = 1; s2 < counts.size(); ++s2) {
    if (counts[s2] == 0) continue;
    t.sigma2.push_back(static_cast<std::int64_t>(s2));
    t.multiplicity.push_back(counts[s2]);
  }
  return t;
}

}  // namespace

const ShellTable& shell_table(int cutoff) {
  if (cutoff < 1) throw DomainError("shell_table: cutoff must be positive");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<const ShellTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[cutoff];
  if (!slot) slot = std::make_unique<const ShellTable>(build_shell_table(cutoff));
  return *slot;
}

}  // namespace dscale::lattice
