#pragma once

#include <cstdint>
#include <vector>

namespace strip {

// Lattice point (n, m) of the strip {0 <= m <= n <= m + N}.
struct LatticePoint {
  long n = 0;
  long m = 0;
  bool operator==(const LatticePoint&) const = default;
};

enum class Step : std::uint8_t { Right, Down };

enum class MoveKind { Bulk, LeftBoundary, RightBoundary };

// index is the path vertex that moves: 0 for the left boundary move,
// N for the right boundary move, 1..N-1 for bulk moves.
struct LocalMove {
  MoveKind kind = MoveKind::Bulk;
  int index = 0;
};

// A down-right path: anchor on the left boundary plus N unit steps.
// Vertices are recomputed from the anchor on demand.  labels[k] is the
// parameter carried by step k+1: a horizontal edge (n-1,m)->(n,m) carries
// a_n, a vertical edge (n,m-1)->(n,m) carries a_m.
class DownRightPath {
 public:
  DownRightPath(LatticePoint anchor, std::vector<Step> steps, const std::vector<double>& bulk);

  static DownRightPath horizontal(const std::vector<double>& bulk, long shift = 0);

  int size() const { return static_cast<int>(steps_.size()); }
  LatticePoint anchor() const { return anchor_; }
  const std::vector<Step>& steps() const { return steps_; }
  const std::vector<double>& labels() const { return labels_; }
  LatticePoint vertex(int j) const;
  std::vector<LatticePoint> vertices() const;

  bool admissible(const LocalMove& move) const;
  bool is_horizontal() const;

  // Same path translated by (k,k), labels recomputed from the bulk vector.
  DownRightPath translated(long k, const std::vector<double>& bulk) const;

  bool operator==(const DownRightPath&) const = default;

 private:
  DownRightPath() = default;
  friend DownRightPath apply_local_move(const DownRightPath&, const LocalMove&);

  LatticePoint anchor_;
  std::vector<Step> steps_;
  std::vector<double> labels_;
};

// Throws Error(InadmissibleMove) when the path does not have the move's
// pre-shape at the given index.
DownRightPath apply_local_move(const DownRightPath& path, const LocalMove& move);

// An admissible sequence of N+1 local moves (each vertex moved once) that
// maps the path to its translate by (1,1).  Moves are found by repeated
// left-to-right scans, so the order is deterministic.
std::vector<LocalMove> tau1_moves(const DownRightPath& path);

}  // namespace strip
