#include "ultra/step_function.hpp"

#include "ultra/errors.hpp"

namespace ultra {

StepFunction StepFunction::identity(const Value& upper) {
  if (!upper.is_positive()) throw InvalidArgument("identity needs a positive upper bound");
  StepFunction f;
  f.pieces_.push_back({upper, true, BigRat(0), BigRat(1)});
  return f;
}

StepFunction StepFunction::truncation(const Value& cap) {
  return identity(cap);  // min(x, cap): linear to cap, constant cap above
}

StepFunction StepFunction::staircase(std::vector<Value> radii_desc) {
  if (radii_desc.empty()) throw InvalidArgument("staircase needs at least one radius");
  for (size_t i = 0; i + 1 < radii_desc.size(); ++i)
    if (!(radii_desc[i + 1] < radii_desc[i]))
      throw InvalidArgument("staircase radii must be strictly decreasing");
  if (!radii_desc.back().is_positive())
    throw InvalidArgument("staircase radii must be positive");
  StepFunction f;
  // pieces (r(n+1), r(n)] -> r(n), listed from the lowest interval upward
  for (size_t n = radii_desc.size(); n-- > 1;) {
    const Value& v = radii_desc[n - 1];
    f.pieces_.push_back({v, false, v.rat(), BigRat(0)});
  }
  if (f.pieces_.empty()) {
    const Value& v = radii_desc[0];  // single radius: constant at and above it
    f.pieces_.push_back({v, false, v.rat(), BigRat(0)});
  }
  f.tail_floor_ = radii_desc.back();
  return f;
}

StepFunction StepFunction::from_pieces(std::vector<Piece> pieces) {
  if (pieces.empty()) throw InvalidArgument("a step function needs at least one piece");
  for (size_t i = 0; i + 1 < pieces.size(); ++i)
    if (!(pieces[i].upto < pieces[i + 1].upto))
      throw InvalidArgument("piece breakpoints must be strictly increasing");
  if (!pieces.front().upto.is_positive())
    throw InvalidArgument("breakpoints must be positive");
  StepFunction f;
  f.pieces_ = std::move(pieces);
  return f;
}

Value StepFunction::piece_lo(size_t i) const {
  if (i == 0) return tail_floor_ ? *tail_floor_ : Value(0);
  return pieces_[i - 1].upto;
}

BigRat StepFunction::lo_limit(size_t i) const {
  const Piece& p = pieces_[i];
  if (!p.linear) return p.a;
  return p.a + p.b * piece_lo(i).rat();
}

BigRat StepFunction::hi_value(size_t i) const {
  const Piece& p = pieces_[i];
  if (!p.linear) return p.a;
  return p.a + p.b * p.upto.rat();
}

Value StepFunction::evaluate(const Value& x) const {
  if (x.is_zero()) return Value(0);
  if (tail_floor_) {
    if (x < *tail_floor_)
      throw DomainError("staircase truncated below its lowest radius",
                        {{"x", x.str()}, {"floor", tail_floor_->str()}});
    if (x == *tail_floor_) return *tail_floor_;
  }
  const Piece* hit = &pieces_.back();  // constant continuation above the top
  for (const Piece& p : pieces_)
    if (x <= p.upto) {
      hit = &p;
      break;
    }
  BigRat y = hit->linear ? hit->a + hit->b * meet(x, pieces_.back().upto).rat() : hit->a;
  if (y < 0)
    throw DomainError("map value is negative", {{"x", x.str()}});
  return Value(y);
}

bool StepFunction::validate() const {
  // valued in [0, ∞) and weakly increasing
  for (size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& p = pieces_[i];
    if (p.linear && p.b < 0) return false;
    if (lo_limit(i) < 0) return false;
    if (i > 0 && hi_value(i - 1) > lo_limit(i)) return false;
  }
  if (zero_violation()) return false;
  // continuity at 0: a declared descending tail, or a first piece whose
  // limit at 0+ vanishes
  if (tail_floor_) return true;
  return lo_limit(0) == 0;
}

std::optional<std::pair<Value, Value>> StepFunction::increasing_violation() const {
  for (size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& p = pieces_[i];
    if (p.linear && p.b < 0) {
      // interior inversion: midpoint against the right endpoint
      Value lo = piece_lo(i);
      Value mid((lo.rat() + p.upto.rat()) / 2);
      return std::make_pair(mid, p.upto);
    }
    if (i > 0 && hi_value(i - 1) > lo_limit(i)) {
      // boundary inversion: end of the previous piece vs a point just inside
      Value u = pieces_[i - 1].upto;
      Value v((u.rat() + p.upto.rat()) / 2);
      return std::make_pair(u, v);
    }
  }
  return std::nullopt;
}

std::optional<Value> StepFunction::zero_violation() const {
  for (size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& p = pieces_[i];
    Value lo = piece_lo(i);
    if (!p.linear || p.b == 0) {
      if (p.a == 0) return Value((lo.rat() + p.upto.rat()) / 2);
      continue;
    }
    // increasing affine piece: zero attained only at a closed upper end
    // with value 0, or everywhere on the piece when it is constant zero
    BigRat at_hi = hi_value(i);
    if (at_hi == 0 && p.b >= 0) return p.upto;
    if (p.b > 0) continue;
    // decreasing affine piece: value hits 0 inside (lo, upto] iff
    // a + b*x = 0 for some x there
    BigRat root = -p.a / p.b;
    if (root > lo.rat() && root <= p.upto.rat()) return Value(root);
  }
  return std::nullopt;
}

}  // namespace ultra
