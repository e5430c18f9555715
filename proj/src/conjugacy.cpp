#include "ndslab/conjugacy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ndslab/errors.hpp"
#include "ndslab/parallel.hpp"

namespace ndslab {

LiftHomeo LiftHomeo::identity(std::size_t grid) {
  return LiftHomeo(PeriodicSamples(std::vector<double>(grid, 0.0)));
}

double LiftHomeo::inverse(double y) const {
  // lift(x) - x is bounded by max|p|, so the root is within that of y.
  const double c = p_.max_abs() + 1e-9;
  double lo = y - c;
  double hi = y + c;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::fabs(y)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (lift(mid) < y) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

bool LiftHomeo::increasing() const noexcept {
  const std::size_t n = p_.size();
  const double h = p_.spacing();
  for (std::size_t i = 0; i < n; ++i)
    if (!(h + p_[(i + 1) % n] - p_[i] > 0.0)) return false;
  return true;
}

namespace {

void validate(const NdsSequence& nds, const CircleMap& f, std::size_t horizon) {
  for (std::size_t k = 0; k <= horizon; ++k) {
    if (nds.map_at(k).degree() != f.degree()) {
      std::ostringstream os;
      os << "map " << k << " has degree " << nds.map_at(k).degree() << " but the target has degree "
         << f.degree();
      throw Error(ErrorKind::degree_mismatch, os.str());
    }
  }
  if (nds.tail().degree() != f.degree()) {
    throw Error(ErrorKind::degree_mismatch, "tail degree differs from the target degree");
  }
  if (!(nds.tail() == f)) {
    throw Error(ErrorKind::precond_violated, "the sequence tail must equal the target map");
  }
  if (horizon < nds.prefix().size()) {
    std::ostringstream os;
    os << "horizon " << horizon << " is shorter than the prefix (" << nds.prefix().size() << " maps)";
    throw Error(ErrorKind::precond_violated, os.str());
  }
  nds.require_expanding("equi-conjugacy");
  if (!f.is_expanding()) throw Error(ErrorKind::precond_violated, "target map is not expanding");
}

}  // namespace

ConjugacyState identity_state(const NdsSequence& nds, const CircleMap& f, std::size_t horizon, std::size_t grid) {
  require(grid >= 16, "conjugacy grid must have at least 16 nodes");
  validate(nds, f, horizon);
  ConjugacyState s{horizon, {}, f, nds};
  s.h.assign(horizon + 1, LiftHomeo::identity(grid));
  return s;
}

ConjugacyState sigma_step(const ConjugacyState& state, double root_tol) {
  const std::size_t horizon = state.horizon;
  const std::size_t grid = state.h.front().grid();
  ConjugacyState next{horizon, state.h, state.target, state.nds};
  // Slot T stays the identity; every other slot reads only the old state.
  std::vector<double> out(horizon * grid);
  parallel_for(horizon * grid, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t flat = lo; flat < hi; ++flat) {
      const std::size_t k = flat / grid;
      const double x = grid_point(flat % grid, grid);
      const double y = state.h[k + 1].lift(state.target.lift(x));
      out[flat] = state.nds.map_at(k).lift_inverse(y, root_tol) - x;
    }
  });
  for (std::size_t k = 0; k < horizon; ++k) {
    next.h[k] = LiftHomeo(PeriodicSamples(std::vector<double>(out.begin() + static_cast<std::ptrdiff_t>(k * grid),
                                                              out.begin() + static_cast<std::ptrdiff_t>((k + 1) * grid))));
  }
  for (std::size_t k = 0; k < horizon; ++k) {
    if (!next.h[k].increasing()) {
      std::ostringstream os;
      os << "updated lift h_" << k << " is not increasing on the grid of " << grid << " nodes";
      throw Error(ErrorKind::non_monotone, os.str());
    }
  }
  return next;
}

double state_distance(const ConjugacyState& a, const ConjugacyState& b) {
  require(a.h.size() == b.h.size(), "states have different horizons");
  double m = 0.0;
  for (std::size_t k = 0; k < a.h.size(); ++k) {
    const auto pa = a.h[k].displacement().values();
    const auto pb = b.h[k].displacement().values();
    require(pa.size() == pb.size(), "states live on different grids");
    for (std::size_t i = 0; i < pa.size(); ++i) m = std::max(m, std::fabs(pa[i] - pb[i]));
  }
  return m;
}

Conjugacy solve_equiconjugacy(const NdsSequence& nds, const CircleMap& f, std::size_t horizon, double tol,
                              std::size_t max_iter, std::size_t grid, std::size_t residual_samples,
                              std::optional<ConjugacyState> initial, double root_tol) {
  require(tol > 0.0, "tolerance must be positive");
  require(max_iter >= 1, "max_iter must be at least 1");
  ConjugacyState state = initial ? std::move(*initial) : identity_state(nds, f, horizon, grid);
  if (initial) {
    validate(nds, f, horizon);
    require(state.horizon == horizon && state.h.size() == horizon + 1, "initial state has the wrong horizon");
  }
  ConjugacyReport rep;
  const double lambda = nds.uniform_lambda();
  rep.iteration_budget =
      static_cast<std::size_t>(std::ceil(std::log(tol) / std::log(1.0 / lambda))) + 5;
  bool converged = false;
  for (std::size_t it = 0; it < max_iter; ++it) {
    ConjugacyState next = sigma_step(state, root_tol);
    const double dist = state_distance(state, next);
    rep.contraction_trace.push_back(dist);
    state = std::move(next);
    rep.iterations = it + 1;
    if (dist < tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream os;
    os << "sigma iteration did not reach tolerance " << tol << " in " << max_iter << " steps (last distance "
       << rep.contraction_trace.back() << ")";
    throw Error(ErrorKind::no_convergence, os.str()).with_trace(rep.contraction_trace);
  }
  rep.residual = conjugacy_residual(state.h, nds, f, residual_samples);
  return Conjugacy{std::move(state), std::move(rep)};
}

ConjugacyState run_sigma(const NdsSequence& nds, const CircleMap& f, std::size_t horizon, std::size_t steps,
                         std::size_t grid, double root_tol) {
  ConjugacyState state = identity_state(nds, f, horizon, grid);
  for (std::size_t i = 0; i < steps; ++i) state = sigma_step(state, root_tol);
  return state;
}

double conjugacy_residual(const std::vector<LiftHomeo>& pis, const NdsSequence& nds, const CircleMap& f,
                          std::size_t samples) {
  require(samples >= 1, "residual needs at least one sample");
  require(!pis.empty(), "no conjugacy maps");
  double m = 0.0;
  for (std::size_t k = 0; k + 1 < pis.size(); ++k) {
    const CircleMap& fk = nds.map_at(k);
    for (std::size_t j = 0; j < samples; ++j) {
      const double x = grid_point(j, samples);
      const double lhs = pis[k + 1].eval(f.eval(x));
      const double rhs = fk.eval(pis[k].eval(x));
      m = std::max(m, arc_distance(lhs, rhs));
    }
  }
  return m;
}

double oscillation(const LiftHomeo& pi, double delta) {
  double m = 0.0;
  const std::size_t n = pi.grid();
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid_point(i, n);
    m = std::max(m, pi.lift(x + delta) - pi.lift(x));
  }
  return m;
}

double modulus_bound(double c, double lambda, double gamma_f, double delta, std::size_t n_max) {
  double best = 2.0 * c + delta;
  double shrink = 1.0;
  double grow = delta;
  for (std::size_t n = 1; n <= n_max; ++n) {
    shrink /= lambda;
    grow *= gamma_f / lambda;
    best = std::min(best, 2.0 * c * shrink + grow);
  }
  return best;
}

}  // namespace ndslab
