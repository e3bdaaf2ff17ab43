#include "strip/path.hpp"

#include <string>
#include <utility>

#include "strip/error.hpp"

namespace strip {

namespace {

double label_for(const std::vector<double>& bulk, LatticePoint from, Step s) {
  const long n = static_cast<long>(bulk.size());
  // Right step (n-1,m)->(n,m) carries a_n; Down step (n,m)->(n,m-1) is the
  // vertical edge (n,m-1)->(n,m) and carries a_m.
  const long idx = s == Step::Right ? from.n + 1 : from.m;
  long r = (idx - 1) % n;
  if (r < 0) r += n;
  return bulk[static_cast<std::size_t>(r)];
}

LatticePoint advance(LatticePoint p, Step s) {
  if (s == Step::Right) ++p.n;
  else --p.m;
  return p;
}

}  // namespace

DownRightPath::DownRightPath(LatticePoint anchor, std::vector<Step> steps, const std::vector<double>& bulk)
    : anchor_(anchor), steps_(std::move(steps)) {
  const long n = static_cast<long>(steps_.size());
  if (n == 0 || static_cast<long>(bulk.size()) != n)
    throw Error(ErrorKind::ParamDomain, "path length must equal the strip width");
  if (anchor_.n != anchor_.m) throw Error(ErrorKind::ParamDomain, "path must start on the left boundary");
  LatticePoint p = anchor_;
  labels_.reserve(steps_.size());
  for (Step s : steps_) {
    labels_.push_back(label_for(bulk, p, s));
    p = advance(p, s);
    if (p.m < 0) throw Error(ErrorKind::ParamDomain, "path leaves the strip (m < 0)");
  }
}

DownRightPath DownRightPath::horizontal(const std::vector<double>& bulk, long shift) {
  return DownRightPath({shift, shift}, std::vector<Step>(bulk.size(), Step::Right), bulk);
}

LatticePoint DownRightPath::vertex(int j) const {
  LatticePoint p = anchor_;
  for (int k = 0; k < j; ++k) p = advance(p, steps_[static_cast<std::size_t>(k)]);
  return p;
}

std::vector<LatticePoint> DownRightPath::vertices() const {
  std::vector<LatticePoint> out;
  out.reserve(steps_.size() + 1);
  LatticePoint p = anchor_;
  out.push_back(p);
  for (Step s : steps_) {
    p = advance(p, s);
    out.push_back(p);
  }
  return out;
}

bool DownRightPath::admissible(const LocalMove& move) const {
  const int n = size();
  switch (move.kind) {
    case MoveKind::LeftBoundary:
      return move.index == 0 && steps_.front() == Step::Right;
    case MoveKind::RightBoundary:
      return move.index == n && steps_.back() == Step::Down;
    case MoveKind::Bulk:
      return move.index > 0 && move.index < n &&
             steps_[static_cast<std::size_t>(move.index - 1)] == Step::Down &&
             steps_[static_cast<std::size_t>(move.index)] == Step::Right;
  }
  return false;
}

bool DownRightPath::is_horizontal() const {
  for (Step s : steps_)
    if (s != Step::Right) return false;
  return true;
}

DownRightPath DownRightPath::translated(long k, const std::vector<double>& bulk) const {
  return DownRightPath({anchor_.n + k, anchor_.m + k}, steps_, bulk);
}

DownRightPath apply_local_move(const DownRightPath& path, const LocalMove& move) {
  if (!path.admissible(move))
    throw Error(ErrorKind::InadmissibleMove, "move at vertex " + std::to_string(move.index) +
                                                 " does not match the path shape");
  DownRightPath out = path;
  const std::size_t j = static_cast<std::size_t>(move.index);
  switch (move.kind) {
    case MoveKind::LeftBoundary:
      out.anchor_.n += 1;
      out.anchor_.m += 1;
      out.steps_[0] = Step::Down;
      break;
    case MoveKind::RightBoundary:
      out.steps_[j - 1] = Step::Right;
      break;
    case MoveKind::Bulk:
      out.steps_[j - 1] = Step::Right;
      out.steps_[j] = Step::Down;
      std::swap(out.labels_[j - 1], out.labels_[j]);
      break;
  }
  return out;
}

std::vector<LocalMove> tau1_moves(const DownRightPath& path) {
  const int n = path.size();
  std::vector<char> moved(static_cast<std::size_t>(n + 1), 0);
  std::vector<Step> steps = path.steps();
  std::vector<LocalMove> seq;
  seq.reserve(static_cast<std::size_t>(n + 1));
  while (static_cast<int>(seq.size()) < n + 1) {
    bool progress = false;
    for (int j = 0; j <= n; ++j) {
      if (moved[static_cast<std::size_t>(j)]) continue;
      if (j == 0 && steps[0] == Step::Right) {
        steps[0] = Step::Down;
        seq.push_back({MoveKind::LeftBoundary, 0});
      } else if (j == n && steps[static_cast<std::size_t>(n - 1)] == Step::Down) {
        steps[static_cast<std::size_t>(n - 1)] = Step::Right;
        seq.push_back({MoveKind::RightBoundary, n});
      } else if (j > 0 && j < n && steps[static_cast<std::size_t>(j - 1)] == Step::Down &&
                 steps[static_cast<std::size_t>(j)] == Step::Right) {
        steps[static_cast<std::size_t>(j - 1)] = Step::Right;
        steps[static_cast<std::size_t>(j)] = Step::Down;
        seq.push_back({MoveKind::Bulk, j});
      } else {
        continue;
      }
      moved[static_cast<std::size_t>(j)] = 1;
      progress = true;
    }
    if (!progress) throw Error(ErrorKind::InadmissibleMove, "no admissible move sequence for tau_1");
  }
  return seq;
}

}  // namespace strip
