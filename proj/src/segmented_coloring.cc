#include "tcamsplit/segmented_coloring.h"

#include <algorithm>
#include <bit>

namespace tcamsplit {

namespace {

LeafColoring checked_segments(const LeafColoring& lc) {
  LeafColoring n = normalize(lc);
  if (!is_segmented(n)) throw Error(ErrorCode::NonSegmentedInput, "a color appears in two runs");
  return n;
}

void require_explicit(unsigned width) {
  if (width > kExplicitWidthCap)
    throw Error(ErrorCode::WidthCapExceeded, "width " + std::to_string(width) + " exceeds explicit cap");
}

void push_run(std::vector<LeafRun>& out, int color, const Weight& len) {
  if (!out.empty() && out.back().color == color)
    out.back().length += len;
  else
    out.push_back({color, len});
}

// Monotone position cursor over a run list.
class RunCursor {
 public:
  explicit RunCursor(const std::vector<LeafRun>& runs) : runs_(runs) {}
  void seek(const Weight& pos) {
    while (start_ + runs_[i_].length <= pos) {
      start_ += runs_[i_].length;
      ++i_;
    }
  }
  int color_at(const Weight& pos) {
    seek(pos);
    return runs_[i_].color;
  }
  const Weight& run_start() const { return start_; }
  Weight run_end() const { return start_ + runs_[i_].length; }
  int color() const { return runs_[i_].color; }

 private:
  const std::vector<LeafRun>& runs_;
  std::size_t i_ = 0;
  Weight start_ = 0;
};

}  // namespace

TrieColoring color_segments_full(const LeafColoring& input) {
  require_explicit(input.width);
  const LeafColoring lc = checked_segments(input);
  const unsigned W = lc.width;
  std::vector<std::vector<int>> level(W + 1);
  level[W] = expand_leaves(lc);
  for (unsigned D = W; D >= 2; --D) {
    const auto& cur = level[D];
    auto& par = level[D - 1];
    par.resize(cur.size() / 2);
    for (std::size_t q = 0; q < cur.size(); q += 4) {
      int a = cur[q], b = cur[q + 1], c = cur[q + 2], d = cur[q + 3];
      par[q / 2] = b == c ? b : a;
      par[q / 2 + 1] = b == c ? b : d;
    }
  }
  const int root = W == 0 ? level[0][0] : level[1][1];
  TrieColoring out = make_root_coloring(W, root);
  if (W == 0) return out;
  level[0] = {root};
  for (unsigned D = 1; D <= W; ++D)
    for (std::size_t x = 0; x < level[D].size(); ++x)
      if (level[D][x] != level[D - 1][x / 2]) out.marked[Prefix{x, D}] = level[D][x];
  return out;
}

FastColoring color_segments_fast(const LeafColoring& input, bool trace) {
  const LeafColoring lc = checked_segments(input);
  const unsigned W = lc.width;
  FastColoring f;
  std::vector<LeafRun> cur = lc.runs;
  f.max_runs = cur.size();
  if (trace) {
    f.levels.resize(W + 1);
    f.levels[W] = cur;
  }
  for (unsigned D = W; D >= 2; --D) {
    // Quads holding a boundary that is not quad-aligned.
    std::vector<Weight> mixed;
    Weight pos = 0;
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      pos += cur[i].length;
      if ((pos & 3) != 0) {
        Weight q = pos >> 2;
        if (mixed.empty() || mixed.back() != q) mixed.push_back(q);
      }
    }
    std::vector<LeafRun> par;
    RunCursor cursor(cur);
    const Weight total = pow2(D);
    auto emit_pure = [&](const Weight& from, const Weight& to) {
      Weight p = from;
      while (p < to) {
        cursor.seek(p);
        Weight end = std::min(cursor.run_end(), to);
        push_run(par, cursor.color(), Weight((end - p) >> 1));
        p = end;
      }
    };
    Weight done = 0;
    for (const Weight& q : mixed) {
      Weight base = q << 2;
      emit_pure(done, base);
      int col[4];
      for (int i = 0; i < 4; ++i) col[i] = cursor.color_at(base + i);
      const bool mid = col[1] == col[2];
      const int left = mid ? col[1] : col[0];
      const int right = mid ? col[1] : col[3];
      for (int i = 0; i < 4; ++i) {
        int pc = i < 2 ? left : right;
        if (col[i] != pc) f.conflicts.push_back({D, base + i, col[i], pc});
      }
      push_run(par, left, 1);
      push_run(par, right, 1);
      done = base + 4;
    }
    emit_pure(done, total);
    cur = std::move(par);
    f.max_runs = std::max(f.max_runs, cur.size());
    if (trace) f.levels[D - 1] = cur;
  }
  int root;
  if (W == 0) {
    root = cur[0].color;
  } else {
    RunCursor cursor(cur);
    int l = cursor.color_at(0), r = cursor.color_at(1);
    root = r;
    if (l != r) f.conflicts.push_back({1, 0, l, r});
  }
  f.conflicts.push_back({0, 0, root, 0});
  f.count = f.conflicts.size();
  return f;
}

TrieColoring coloring_from_fast(const FastColoring& f, unsigned width) {
  if (width > kMaxColoringWidth)
    throw Error(ErrorCode::WidthCapExceeded, "width " + std::to_string(width));
  TrieColoring c;
  c.width = width;
  for (const auto& n : f.conflicts) c.marked[Prefix{n.position.convert_to<std::uint64_t>(), n.depth}] = n.color;
  return c;
}

TransactionSequence sequence_from_fast(const FastColoring& f, unsigned width) {
  std::vector<const FastConflict*> order;
  for (const auto& n : f.conflicts) order.push_back(&n);
  std::sort(order.begin(), order.end(), [](const FastConflict* a, const FastConflict* b) {
    return a->depth != b->depth ? a->depth > b->depth : a->position < b->position;
  });
  TransactionSequence s;
  for (const auto* n : order) s.push_back(Transaction{n->color, n->parent_color, width - n->depth});
  return s;
}

TrieColoring ortc(const LeafColoring& input, bool segmented) {
  require_explicit(input.width);
  const LeafColoring lc = segmented ? checked_segments(input) : normalize(input);
  const unsigned W = lc.width;
  std::vector<int> palette;
  for (const auto& r : lc.runs) palette.push_back(r.color);
  std::sort(palette.begin(), palette.end());
  palette.erase(std::unique(palette.begin(), palette.end()), palette.end());
  const std::size_t words = (palette.size() + 63) / 64;
  auto index_of = [&](int color) {
    return static_cast<std::size_t>(std::lower_bound(palette.begin(), palette.end(), color) - palette.begin());
  };

  // sets[D] is a flat array of 2^D candidate sets of `words` words each.
  std::vector<std::vector<std::uint64_t>> sets(W + 1);
  {
    const std::vector<int> leaves = expand_leaves(lc);
    auto& s = sets[W];
    s.assign(leaves.size() * words, 0);
    for (std::size_t x = 0; x < leaves.size(); ++x) {
      std::size_t ci = index_of(leaves[x]);
      s[x * words + ci / 64] |= std::uint64_t{1} << (ci % 64);
    }
  }
  for (unsigned D = W; D >= 1; --D) {
    const auto& cur = sets[D];
    auto& par = sets[D - 1];
    const std::size_t n = (std::size_t{1} << (D - 1));
    par.assign(n * words, 0);
    for (std::size_t x = 0; x < n; ++x) {
      const std::uint64_t* a = &cur[2 * x * words];
      const std::uint64_t* b = &cur[(2 * x + 1) * words];
      std::uint64_t* o = &par[x * words];
      bool any = false;
      for (std::size_t w = 0; w < words; ++w) {
        o[w] = a[w] & b[w];
        any = any || o[w] != 0;
      }
      if (!any)
        for (std::size_t w = 0; w < words; ++w) o[w] = a[w] | b[w];
    }
  }

  auto smallest = [&](const std::uint64_t* s) {
    for (std::size_t w = 0; w < words; ++w)
      if (s[w]) return static_cast<int>(w * 64 + static_cast<std::size_t>(std::countr_zero(s[w])));
    return -1;
  };
  auto contains = [&](const std::uint64_t* s, int ci) {
    return (s[ci / 64] >> (ci % 64)) & 1;
  };

  std::vector<int> parent_colors{smallest(sets[0].data())};
  TrieColoring out = make_root_coloring(W, palette[parent_colors[0]]);
  for (unsigned D = 1; D <= W; ++D) {
    const std::size_t n = std::size_t{1} << D;
    std::vector<int> colors(n);
    for (std::size_t x = 0; x < n; ++x) {
      const std::uint64_t* s = &sets[D][x * words];
      int pc = parent_colors[x / 2];
      colors[x] = contains(s, pc) ? pc : smallest(s);
      if (colors[x] != pc) out.marked[Prefix{x, D}] = palette[colors[x]];
    }
    parent_colors = std::move(colors);
    sets[D].clear();
    sets[D].shrink_to_fit();
  }
  return out;
}

std::size_t n_of(const Partition& p, const std::vector<int>& order) {
  return color_segments_fast(segments_in_order(p, order)).count;
}

unsigned floor_log2(std::size_t k) { return k == 0 ? 0 : static_cast<unsigned>(std::bit_width(k) - 1); }

std::size_t segmented_size_bound(unsigned width, std::size_t k) {
  return (width - floor_log2(k) + 1) * (k - 1) + 1;
}

}  // namespace tcamsplit
