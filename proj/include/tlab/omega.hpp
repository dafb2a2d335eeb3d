#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace tlab {

/// Ordered multiplicities of the boundary points met by one trajectory, in
/// flow order. Entries are positive; (121) is a chord tangent once in the
/// middle, (2) a singleton tangency.
class OmegaWord {
public:
  OmegaWord() = default;
  OmegaWord(std::initializer_list<int> entries);
  explicit OmegaWord(std::vector<int> entries);

  /// Accepts "121" (digits, entries <= 9) or "1,12,1".
  static OmegaWord parse(std::string_view text);

  const std::vector<int>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  int operator[](std::size_t i) const { return entries_[i]; }

  /// Digit string when every entry is <= 9, comma-separated otherwise.
  std::string to_string() const;

  // Canonical order: shorter first, then lexicographic.
  std::strong_ordering operator<=>(const OmegaWord& other) const;
  bool operator==(const OmegaWord& other) const = default;

private:
  std::vector<int> entries_;
};

int norm(const OmegaWord& w);
int reduced_norm(const OmegaWord& w);
bool is_admissible(const OmegaWord& w);
OmegaWord mirror(const OmegaWord& w);

/// Orientation flip exponent for v -> -v, in {0, 1}: parity of the
/// group-reversal permutation plus the ceil((w_i - 2)/2) terms.
int flip_sign_exponent(const OmegaWord& w);

/// Parity of reversing successive blocks of the given sizes while keeping
/// each block's internal order. Closed form: sum_{i<j} g_i g_j mod 2.
int block_reversal_parity(const std::vector<int>& block_sizes);

/// Largest number of causality arrows among boundary points localized near
/// a point of multiplicity m: floor(m/2).
int chain_bound(int m);

/// All admissible words with reduced norm <= max_reduced_norm and at most
/// max_support entries, sorted canonically.
std::vector<OmegaWord> enumerate_admissible(int max_reduced_norm, int max_support);

}  // namespace tlab
