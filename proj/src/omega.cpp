#include "tlab/omega.hpp"

#include <algorithm>
#include <charconv>

#include "tlab/error.hpp"

namespace tlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax: return "SYNTAX";
    case ErrorCode::UnknownIdentifier: return "UNKNOWN_IDENTIFIER";
    case ErrorCode::Domain: return "DOMAIN";
    case ErrorCode::IllConditioned: return "ILL_CONDITIONED";
    case ErrorCode::NotInDomain: return "NOT_IN_DOMAIN";
    case ErrorCode::SizeMismatch: return "SIZE_MISMATCH";
    case ErrorCode::TimeBudgetExceeded: return "TIME_BUDGET_EXCEEDED";
    case ErrorCode::Degenerate: return "DEGENERATE";
    case ErrorCode::MonotonicityViolation: return "MONOTONICITY_VIOLATION";
    case ErrorCode::Ambiguous: return "AMBIGUOUS";
    case ErrorCode::NoExit: return "NO_EXIT";
    case ErrorCode::NoTangent: return "NO_TANGENT";
    case ErrorCode::Config: return "CONFIG";
  }
  return "UNKNOWN";
}

OmegaWord::OmegaWord(std::initializer_list<int> entries) : OmegaWord(std::vector<int>(entries)) {}

OmegaWord::OmegaWord(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int e : entries_) {
    if (e < 1) throw Error(ErrorCode::Domain, "multiplicity entries must be >= 1");
  }
}

OmegaWord OmegaWord::parse(std::string_view text) {
  std::vector<int> out;
  if (text.find(',') == std::string_view::npos) {
    for (std::size_t i = 0; i < text.size(); ++i) {
      char c = text[i];
      if (c < '1' || c > '9') throw SyntaxError(i, "expected digit 1-9 in multiplicity word");
      out.push_back(c - '0');
    }
  } else {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t end = text.find(',', pos);
      if (end == std::string_view::npos) end = text.size();
      int value = 0;
      auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + end, value);
      if (ec != std::errc() || ptr != text.data() + end || value < 1)
        throw SyntaxError(pos, "expected positive integer in multiplicity word");
      out.push_back(value);
      pos = end + 1;
    }
  }
  return OmegaWord(std::move(out));
}

std::string OmegaWord::to_string() const {
  bool small = std::all_of(entries_.begin(), entries_.end(), [](int e) { return e <= 9; });
  std::string s;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!small && i > 0) s += ',';
    s += std::to_string(entries_[i]);
  }
  return s;
}

std::strong_ordering OmegaWord::operator<=>(const OmegaWord& other) const {
  if (auto c = entries_.size() <=> other.entries_.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(entries_.begin(), entries_.end(),
                                                other.entries_.begin(), other.entries_.end());
}

int norm(const OmegaWord& w) {
  int s = 0;
  for (int e : w.entries()) s += e;
  return s;
}

int reduced_norm(const OmegaWord& w) {
  int s = 0;
  for (int e : w.entries()) s += e - 1;
  return s;
}

bool is_admissible(const OmegaWord& w) {
  const auto& e = w.entries();
  if (e.empty()) return false;
  if (e.size() == 1) return e[0] % 2 == 0;
  if (e.front() % 2 == 0 || e.back() % 2 == 0) return false;
  for (std::size_t i = 1; i + 1 < e.size(); ++i) {
    if (e[i] % 2 != 0) return false;
  }
  return true;
}

OmegaWord mirror(const OmegaWord& w) {
  std::vector<int> r(w.entries().rbegin(), w.entries().rend());
  return OmegaWord(std::move(r));
}

int block_reversal_parity(const std::vector<int>& block_sizes) {
  // Reversing blocks moves every element of block i past every element of
  // each later block j exactly once.
  long long before = 0;
  long long inversions = 0;
  for (int g : block_sizes) {
    inversions += before * g;
    before += g;
  }
  return static_cast<int>(inversions % 2);
}

int flip_sign_exponent(const OmegaWord& w) {
  std::vector<int> groups;
  groups.reserve(w.size());
  int ceil_terms = 0;
  for (int e : w.entries()) {
    groups.push_back(e - 1);
    // ceil((e-2)/2) for e >= 2; a simple crossing carries no form.
    if (e >= 2) ceil_terms += (e - 2 + 1) / 2;
  }
  return (block_reversal_parity(groups) + ceil_terms) % 2;
}

int chain_bound(int m) {
  if (m < 1) throw Error(ErrorCode::Domain, "chain_bound requires m >= 1");
  return m / 2;
}

namespace {

void extend(std::vector<int>& prefix, int budget, int max_support, std::vector<OmegaWord>& out) {
  if (!prefix.empty()) {
    OmegaWord w(prefix);
    if (is_admissible(w)) out.push_back(std::move(w));
  }
  if (static_cast<int>(prefix.size()) >= max_support) return;
  for (int e = 1; e - 1 <= budget; ++e) {
    prefix.push_back(e);
    extend(prefix, budget - (e - 1), max_support, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<OmegaWord> enumerate_admissible(int max_reduced_norm, int max_support) {
  std::vector<OmegaWord> out;
  if (max_reduced_norm < 0 || max_support < 1) return out;
  std::vector<int> prefix;
  extend(prefix, max_reduced_norm, max_support, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace tlab
