#include "cbs/assembly.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace cbs {

std::string_view to_string(PieceKind k) {
  switch (k) {
    case PieceKind::Interior: return "interior";
    case PieceKind::Border: return "border";
    case PieceKind::Corner: return "corner";
    case PieceKind::StripEnd: return "strip-end";
    case PieceKind::Single: return "single";
  }
  return "interior";
}

int PieceDescriptor::straight_count() const {
  return static_cast<int>(std::count_if(sides.begin(), sides.end(),
                                        [](const SideDescriptor& s) { return s.cls == SideClass::Straight; }));
}

PieceKind PieceDescriptor::kind() const {
  switch (straight_count()) {
    case 0: return PieceKind::Interior;
    case 1: return PieceKind::Border;
    case 2: return PieceKind::Corner;
    case 3: return PieceKind::StripEnd;
    default: return PieceKind::Single;
  }
}

bool id_less(const std::string& a, const std::string& b) {
  long long va = 0, vb = 0;
  const auto ra = std::from_chars(a.data(), a.data() + a.size(), va);
  const auto rb = std::from_chars(b.data(), b.data() + b.size(), vb);
  const bool na = ra.ec == std::errc() && ra.ptr == a.data() + a.size();
  const bool nb = rb.ec == std::errc() && rb.ptr == b.data() + b.size();
  if (na && nb && va != vb) return va < vb;
  if (na != nb) return na;
  return a < b;
}

namespace {

bool opposite(SideClass a, SideClass b) {
  return (a == SideClass::Convex && b == SideClass::Concave) || (a == SideClass::Concave && b == SideClass::Convex);
}

struct Evaluation {
  bool valid = false;
  double energy = 0.0;
  std::vector<MatchScore> matches;
  std::string reason;
};

Evaluation evaluate(const PieceDescriptor& piece, int rotation, const CellConstraints& constraints,
                    const AssemblyParams& params) {
  Evaluation ev;
  ev.valid = true;
  for (int d = 0; d < 4; ++d) {
    const SideDescriptor& side = piece.sides[static_cast<std::size_t>(side_facing(d, rotation))];
    const Constraint& c = constraints[static_cast<std::size_t>(d)];
    switch (c.kind) {
      case Constraint::Kind::Free:
        break;
      case Constraint::Kind::Straight:
        if (side.cls != SideClass::Straight) {
          ev.valid = false;
          ev.reason = side.id() + " is not straight";
        }
        break;
      case Constraint::Kind::Curved:
        if (side.cls == SideClass::Straight) {
          ev.valid = false;
          ev.reason = side.id() + " is straight";
        }
        break;
      case Constraint::Kind::Match: {
        if (!opposite(c.neighbor->cls, side.cls)) {
          ev.valid = false;
          ev.reason = side.id() + " has the wrong convexity for " + c.neighbor->id();
          break;
        }
        MatchScore m = pair_energy(*c.neighbor, side, params.match);
        if (m.rejected) {
          ev.valid = false;
          std::ostringstream os;
          os << c.neighbor->id() << " vs " << side.id() << " fails the length gate (" << m.length_ratio << "%)";
          ev.reason = os.str();
        }
        ev.energy += m.energy;
        ev.matches.push_back(std::move(m));
        break;
      }
    }
    if (!ev.valid && ev.reason.find("length gate") == std::string::npos && c.kind != Constraint::Kind::Match) break;
  }
  return ev;
}

bool better(double e, const PieceDescriptor& p, int r, double best_e, const PieceDescriptor* best_p, int best_r) {
  if (best_p == nullptr) return true;
  if (e != best_e) return e < best_e;
  if (p.id != best_p->id) return id_less(p.id, best_p->id);
  return r < best_r;
}

struct Search {
  std::optional<StepResult> best;
  std::vector<std::pair<double, std::string>> rejected;
};

Search search(std::span<const PieceDescriptor> pieces, std::span<const bool> used, const CellConstraints& constraints,
              const AssemblyParams& params) {
  Search out;
  const PieceDescriptor* best_piece = nullptr;
  const PieceDescriptor* second_piece = nullptr;
  int best_r = 0, second_r = 0;
  double best_e = std::numeric_limits<double>::infinity();
  double second_e = std::numeric_limits<double>::infinity();
  StepResult result;
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    if (used[p]) continue;
    for (int r = 0; r < 4; ++r) {
      Evaluation ev = evaluate(pieces[p], r, constraints, params);
      if (!ev.valid) {
        out.rejected.emplace_back(ev.energy, pieces[p].id + " rotation " + std::to_string(r) + ": " + ev.reason);
        continue;
      }
      if (better(ev.energy, pieces[p], r, best_e, best_piece, best_r)) {
        if (best_piece != nullptr) {
          second_piece = best_piece;
          second_r = best_r;
          second_e = best_e;
          result.runner_up_placement = result.placement;
        }
        best_piece = &pieces[p];
        best_r = r;
        best_e = ev.energy;
        result.placement = {p, r};
        result.energy = ev.energy;
        result.matches = std::move(ev.matches);
      } else if (better(ev.energy, pieces[p], r, second_e, second_piece, second_r)) {
        second_piece = &pieces[p];
        second_r = r;
        second_e = ev.energy;
        result.runner_up_placement = Placement{p, r};
      }
    }
  }
  if (best_piece != nullptr) {
    result.runner_up = second_e;
    out.best = std::move(result);
  }
  std::sort(out.rejected.begin(), out.rejected.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  if (out.rejected.size() > 5) out.rejected.resize(5);
  return out;
}

}  // namespace

StepResult best_placement(std::span<const PieceDescriptor> pieces, std::span<const bool> used,
                          const CellConstraints& constraints, const AssemblyParams& params) {
  Search s = search(pieces, used, constraints, params);
  if (!s.best) throw Error(ErrorCode::NoCandidate, "no piece satisfies the cell constraints");
  return *s.best;
}

Placement find_seed_corner(std::span<const PieceDescriptor> pieces) {
  std::optional<Placement> best;
  double best_e = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    for (int r = 0; r < 4; ++r) {
      const SideDescriptor& left = pieces[p].sides[static_cast<std::size_t>(side_facing(kLeft, r))];
      const SideDescriptor& top = pieces[p].sides[static_cast<std::size_t>(side_facing(kTop, r))];
      if (left.cls != SideClass::Straight || top.cls != SideClass::Straight) continue;
      const double e = left.energy + top.energy;
      if (!best || better(e, pieces[p], r, best_e, &pieces[best->piece], best->rotation)) {
        best = Placement{p, r};
        best_e = e;
      }
    }
  }
  if (!best) throw Error(ErrorCode::NoCornerFound, "no piece has two adjacent straight sides");
  return *best;
}

StepResult next_border_piece(std::span<const PieceDescriptor> pieces, std::span<const bool> used,
                             const SideDescriptor& open_side, const AssemblyParams& params) {
  CellConstraints c{Constraint::straight(), Constraint::free(), Constraint::free(), Constraint::match(open_side)};
  return best_placement(pieces, used, c, params);
}

StepResult next_interior_piece(std::span<const PieceDescriptor> pieces, std::span<const bool> used,
                               const SideDescriptor& left_side, const SideDescriptor& top_side,
                               const AssemblyParams& params) {
  CellConstraints c{Constraint::match(top_side), Constraint::curved(), Constraint::curved(),
                    Constraint::match(left_side)};
  return best_placement(pieces, used, c, params);
}

PuzzleState assemble(std::span<const PieceDescriptor> pieces, const AssemblyParams& params) {
  PuzzleState state;
  if (pieces.empty()) throw Error(ErrorCode::InvalidArgument, "no pieces to assemble");
  std::vector<bool> used_vec(pieces.size(), false);
  auto used_span = [&] {
    // std::vector<bool> is not contiguous; copy into a plain buffer.
    static thread_local std::vector<char> buf;
    buf.assign(used_vec.begin(), used_vec.end());
    return std::span<const bool>(reinterpret_cast<const bool*>(buf.data()), buf.size());
  };

  const Placement seed = find_seed_corner(pieces);
  std::vector<Placement> first_row{seed};
  used_vec[seed.piece] = true;

  auto side_of = [&](const Placement& pl, int direction) -> const SideDescriptor& {
    return pieces[pl.piece].sides[static_cast<std::size_t>(side_facing(direction, pl.rotation))];
  };

  auto place = [&](int row, int col, const CellConstraints& c) {
    Search s = search(pieces, used_span(), c, params);
    if (!s.best) {
      std::vector<std::string> diag;
      for (auto& [e, why] : s.rejected) diag.push_back(why);
      throw AssemblyStuck(row, col, std::move(diag),
                          "no candidate for cell (" + std::to_string(row) + ", " + std::to_string(col) + ")");
    }
    used_vec[s.best->placement.piece] = true;
    state.steps.push_back({row, col, *s.best});
    return s.best->placement;
  };

  while (side_of(first_row.back(), kRight).cls != SideClass::Straight) {
    if (first_row.size() == pieces.size()) {
      throw AssemblyStuck(0, static_cast<int>(first_row.size()), {}, "first row never reaches a second corner");
    }
    const SideDescriptor& open = side_of(first_row.back(), kRight);
    CellConstraints c{Constraint::straight(), Constraint::free(), Constraint::free(), Constraint::match(open)};
    first_row.push_back(place(0, static_cast<int>(first_row.size()), c));
  }

  state.cols = static_cast<int>(first_row.size());
  if (pieces.size() % first_row.size() != 0) {
    throw AssemblyStuck(1, 0, {},
                        std::to_string(pieces.size()) + " pieces do not fill rows of " + std::to_string(state.cols));
  }
  state.rows = static_cast<int>(pieces.size() / first_row.size());
  state.grid.assign(pieces.size(), Placement{});
  for (int c = 0; c < state.cols; ++c) state.grid[static_cast<std::size_t>(c)] = first_row[static_cast<std::size_t>(c)];

  for (int r = 1; r < state.rows; ++r) {
    for (int c = 0; c < state.cols; ++c) {
      CellConstraints cons;
      cons[kTop] = Constraint::match(side_of(state.at(r - 1, c), kBottom));
      cons[kLeft] = c == 0 ? Constraint::straight() : Constraint::match(side_of(state.at(r, c - 1), kRight));
      cons[kRight] = c + 1 == state.cols ? Constraint::straight() : Constraint::curved();
      cons[kBottom] = r + 1 == state.rows ? Constraint::straight() : Constraint::curved();
      state.grid[static_cast<std::size_t>(r * state.cols + c)] = place(r, c, cons);
    }
  }
  return state;
}

}  // namespace cbs
