#pragma once

#include "hyperlab/common.hpp"

#include <bit>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace hyperlab {

/// Nonempty subset of a space's index set 0..n-1, stored as a dense bit
/// vector and tagged with the owning space. Every nonempty subset of a finite
/// metric space is closed, so handles range over all of C(X).
class SubsetHandle {
public:
  using Word = std::uint64_t;
  static constexpr Index kWordBits = 64;

  SubsetHandle(SpaceId space, Index universe, std::span<const Index> indices)
    : space_(space), universe_(universe), words_(word_count(universe), 0)
  {
    for (Index i : indices) {
      if (i < 0 || i >= universe) {
        throw Error(Errc::InvalidArgument,
                    "subset index " + std::to_string(i) + " outside 0.." +
                      std::to_string(universe - 1));
      }
      words_[static_cast<std::size_t>(i / kWordBits)] |= Word{1} << (i % kWordBits);
    }
    require_nonempty();
  }

  SubsetHandle(SpaceId space, Index universe, std::initializer_list<Index> indices)
    : SubsetHandle(space, universe, std::span<const Index>(indices.begin(), indices.size()))
  {
  }

  /// Subset from the low bits of `mask` (universe ≤ 64).
  static SubsetHandle from_mask(SpaceId space, Index universe, std::uint64_t mask)
  {
    if (universe > kWordBits) {
      throw Error(Errc::InvalidArgument, "from_mask needs universe <= 64");
    }
    if (universe < kWordBits) {
      mask &= (Word{1} << universe) - 1;
    }
    SubsetHandle s(space, universe);
    s.words_[0] = mask;
    s.require_nonempty();
    return s;
  }

  static SubsetHandle whole(SpaceId space, Index universe)
  {
    SubsetHandle s(space, universe);
    for (Index i = 0; i < universe; ++i) {
      s.words_[static_cast<std::size_t>(i / kWordBits)] |= Word{1} << (i % kWordBits);
    }
    s.require_nonempty();
    return s;
  }

  SpaceId space_id() const noexcept { return space_; }
  Index universe() const noexcept { return universe_; }

  bool contains(Index i) const noexcept
  {
    if (i < 0 || i >= universe_) {
      return false;
    }
    return (words_[static_cast<std::size_t>(i / kWordBits)] >> (i % kWordBits)) & 1U;
  }

  Index size() const noexcept
  {
    Index c = 0;
    for (Word w : words_) {
      c += std::popcount(w);
    }
    return c;
  }

  /// Members in ascending order.
  std::vector<Index> indices() const
  {
    std::vector<Index> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (std::size_t w = 0; w < words_.size(); ++w) {
      Word bits = words_[w];
      while (bits != 0) {
        int b = std::countr_zero(bits);
        out.push_back(static_cast<Index>(w) * kWordBits + b);
        bits &= bits - 1;
      }
    }
    return out;
  }

  /// Low 64 bits; exact when universe ≤ 64.
  std::uint64_t mask() const noexcept { return words_.empty() ? 0 : words_[0]; }

  bool is_subset_of(const SubsetHandle& other) const noexcept
  {
    if (universe_ != other.universe_) {
      return false;
    }
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if ((words_[w] & ~other.words_[w]) != 0) {
        return false;
      }
    }
    return true;
  }

  SubsetHandle unite(const SubsetHandle& other) const
  {
    check_same_space(other);
    SubsetHandle r = *this;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      r.words_[w] |= other.words_[w];
    }
    return r;
  }

  void check_same_space(const SubsetHandle& other) const
  {
    if (space_ != other.space_ || universe_ != other.universe_) {
      throw Error(Errc::KindMismatch, "subsets belong to different spaces");
    }
  }

  std::string to_string() const
  {
    std::string s = "{";
    bool first = true;
    for (Index i : indices()) {
      if (!first) {
        s += ',';
      }
      s += std::to_string(i);
      first = false;
    }
    return s + "}";
  }

  friend bool operator==(const SubsetHandle& a, const SubsetHandle& b) noexcept
  {
    return a.space_ == b.space_ && a.universe_ == b.universe_ && a.words_ == b.words_;
  }

  std::size_t hash() const noexcept
  {
    std::size_t h = std::hash<SpaceId>{}(space_) ^ static_cast<std::size_t>(universe_);
    for (Word w : words_) {
      h ^= std::hash<Word>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }

private:
  SubsetHandle(SpaceId space, Index universe)
    : space_(space), universe_(universe), words_(word_count(universe), 0)
  {
  }

  static std::size_t word_count(Index universe)
  {
    if (universe < 1) {
      throw Error(Errc::InvalidArgument, "subset universe must be >= 1");
    }
    return static_cast<std::size_t>((universe + kWordBits - 1) / kWordBits);
  }

  void require_nonempty() const
  {
    for (Word w : words_) {
      if (w != 0) {
        return;
      }
    }
    throw Error(Errc::InvalidArgument, "subsets are nonempty by construction");
  }

  SpaceId space_;
  Index universe_;
  std::vector<Word> words_;
};

struct SubsetHash {
  std::size_t operator()(const SubsetHandle& s) const noexcept { return s.hash(); }
};

} // namespace hyperlab
