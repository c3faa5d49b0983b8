#include "boxsim/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace boxsim {

TrapSpec TrapSpec::wedge(double alpha_rad, const PhysicalParams& phys) {
  if (!(alpha_rad > 0.0) || !(alpha_rad < 0.5 * std::numbers::pi))
    throw std::invalid_argument("TrapSpec::wedge: alpha must be in (0, pi/2)");
  TrapSpec t;
  t.kind = TrapKind::Wedge;
  t.alpha = alpha_rad;
  t.tan_alpha = std::tan(alpha_rad);
  t.sin_alpha = std::sin(alpha_rad);
  t.cos_alpha = std::cos(alpha_rad);
  t.scales = derive_scales(phys, TrapKind::Wedge);
  return t;
}

TrapSpec TrapSpec::harmonic(const PhysicalParams& phys) {
  TrapSpec t;
  t.kind = TrapKind::Harmonic;
  t.scales = derive_scales(phys, TrapKind::Harmonic);
  return t;
}

std::optional<WallEvent> next_wall_event(const PhaseState& s, double alpha,
                                         double t_skip) {
  const double tan_a = std::tan(alpha);
  if (s.r.y() < detail::kApexEps && s.p.norm() < detail::kApexEps)
    return std::nullopt;  // stuck-at-apex
  const double t_right = detail::wall_crossing_time(s.r.x(), s.r.y(), s.p.x(),
                                                    s.p.y(), tan_a, t_skip);
  const double t_left = detail::wall_crossing_time(-s.r.x(), s.r.y(), -s.p.x(),
                                                   s.p.y(), tan_a, t_skip);
  const double best = std::min(t_right, t_left);
  if (!std::isfinite(best)) return std::nullopt;
  return WallEvent{best, t_left < t_right ? Wall::Left : Wall::Right};
}

PhaseState reflect(const PhaseState& s, Wall wall, double alpha) {
  const double tan_a = std::tan(alpha);
  if (std::abs(std::abs(s.r.x()) - s.r.y() * tan_a) > 1e-9)
    throw std::invalid_argument("reflect: state is not on the named wall");
  const double w = (wall == Wall::Right) ? 1.0 : -1.0;
  const double cos_a = std::cos(alpha);
  const double sin_a = std::sin(alpha);
  const double vn = -w * cos_a * s.p.x() + sin_a * s.p.y();
  PhaseState out = s;
  out.p.x() += 2.0 * vn * w * cos_a;
  out.p.y() -= 2.0 * vn * sin_a;
  return out;
}

PhaseState propagate(const PhaseState& s, const TrapSpec& trap, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("propagate: dt must be > 0");
  PhaseState out;
  if (trap.kind == TrapKind::Harmonic) {
    detail::HarmonicStepper st;
    st.init(s, trap);
    st.advance(dt);
    out.r = st.r;
    out.p = st.p;
  } else {
    if (!inside_wedge(s.r, trap.tan_alpha, 1e-9 * (1.0 + std::abs(s.r.y()))))
      throw std::domain_error("propagate: state outside the wedge");
    detail::WedgeStepper st;
    st.init(s, trap);
    st.advance(dt);
    out.r = st.r;
    out.p = st.p;
  }
  out.t = s.t + dt;
  return out;
}

}  // namespace boxsim
