#include "qhd/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qhd/spectral.hpp"
#include "qhd/verification.hpp"

namespace qhd {

namespace {

__extension__ typedef __int128 Wide;

// 1/e as a reduced fraction (0 for infinity).
struct Reciprocal {
  Wide num;
  Wide den;
};

Reciprocal reciprocal(const Exponent& e) {
  if (e.infinite) return {0, 1};
  return {e.den, e.num};
}

// Sign of a/b - c/d with positive denominators.
int compare(Wide a, Wide b, Wide c, Wide d) {
  const Wide l = a * d;
  const Wide r = c * b;
  return l < r ? -1 : (l > r ? 1 : 0);
}

double lr_norm(const RealField& f, const Exponent& r) {
  if (r.infinite) return max_abs(f);
  const double e = r.value();
  double s = 0.0;
  for (double v : f) s += std::pow(std::abs(v), e);
  return std::pow(s * f.grid().cell_volume(), 1.0 / e);
}

double time_norm(const std::vector<double>& t, const std::vector<double>& v, const Exponent& q) {
  if (v.empty()) return 0.0;
  if (q.infinite) return *std::max_element(v.begin(), v.end());
  const double e = q.value();
  double s = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    s += 0.5 * (t[i] - t[i - 1]) * (std::pow(v[i], e) + std::pow(v[i - 1], e));
  }
  return std::pow(s, 1.0 / e);
}

}  // namespace

Exponent Exponent::rational(std::int64_t num, std::int64_t den) {
  if (num <= 0 || den <= 0) throw std::invalid_argument("exponent must be a positive fraction");
  const std::int64_t g = std::gcd(num, den);
  return {num / g, den / g, false};
}

Exponent Exponent::infinity() { return {1, 0, true}; }

std::string Exponent::to_string() const {
  if (infinite) return "inf";
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

bool admissible_pair_check(const Exponent& q, const Exponent& r, int dim) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("dimension must be 1, 2 or 3");
  const Reciprocal iq = reciprocal(q);
  const Reciprocal ir = reciprocal(r);
  // 2 <= q, 2 <= r  <=>  1/q <= 1/2, 1/r <= 1/2
  if (compare(iq.num, iq.den, 1, 2) > 0 || compare(ir.num, ir.den, 1, 2) > 0) return false;
  // 2/q + dim/r == dim/2  <=>  (4 iq.num ir.den + 2 dim ir.num iq.den) == dim iq.den ir.den
  const Wide lhs = 4 * iq.num * ir.den + 2 * static_cast<Wide>(dim) * ir.num * iq.den;
  const Wide rhs = static_cast<Wide>(dim) * iq.den * ir.den;
  if (lhs != rhs) return false;
  if (dim == 2 && r.infinite) return false;
  // dim = 3: r <= 6 follows from q >= 2 and the scaling relation.
  return true;
}

NormReport mixed_norm(const std::vector<TimedField>& samples, const Exponent& q, const Exponent& r) {
  NormReport rep;
  rep.q = q;
  rep.r = r;
  if (samples.empty()) return rep;
  if (!q.infinite && samples.size() < 2) throw std::invalid_argument("finite time exponent needs two samples");
  std::vector<double> t;
  std::vector<double> v;
  t.reserve(samples.size());
  v.reserve(samples.size());
  int max_strip = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i > 0 && samples[i].t < samples[i - 1].t) throw std::invalid_argument("samples must be ordered by time");
    t.push_back(samples[i].t);
    v.push_back(lr_norm(samples[i].magnitude, r));
    max_strip = std::max(max_strip, samples[i].strip);
  }
  rep.value = time_norm(t, v, q);
  rep.per_strip.assign(static_cast<std::size_t>(max_strip) + 1, 0.0);
  for (int k = 0; k <= max_strip; ++k) {
    std::vector<double> tk;
    std::vector<double> vk;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (samples[i].strip == k) {
        tk.push_back(t[i]);
        vk.push_back(v[i]);
      }
    }
    rep.per_strip[static_cast<std::size_t>(k)] = time_norm(tk, vk, q);
  }
  return rep;
}

std::vector<NormReport> strichartz_monitor(const Trajectory& traj,
                                           const std::vector<std::pair<Exponent, Exponent>>& pairs) {
  if (traj.snapshots != SnapshotPolicy::substeps) {
    throw std::invalid_argument("Strichartz monitor needs substep snapshots");
  }
  std::vector<TimedField> fields;
  for (const Sample* s : ordered_samples(traj)) {
    // The closing boundary sample of a strip belongs to that strip for the
    // per-strip partials; the opening one starts the next.
    const ComplexVectorField grad = spectral_gradient(s->state.psi);
    RealField mag(s->state.grid());
    for (const ComplexField& c : grad) {
      for (std::size_t n = 0; n < c.size(); ++n) mag[n] += std::norm(c[n]);
    }
    for (double& v : mag) v = std::sqrt(v);
    fields.push_back({s->t, std::min(s->strip, static_cast<int>(traj.strip_count()) - 1), std::move(mag)});
  }
  const int dim = fields.empty() ? 3 : fields.front().magnitude.grid().dim();
  std::vector<NormReport> out;
  for (const auto& [q, r] : pairs) {
    NormReport rep = mixed_norm(fields, q, r);
    rep.admissible = admissible_pair_check(q, r, 3);
    if (dim != 3) rep.warning = "admissibility is defined for three dimensions; grid has dim " + std::to_string(dim);
    out.push_back(std::move(rep));
  }
  return out;
}

double local_smoothing_norm(const Trajectory& traj, const TestFunction& window) {
  const auto samples = ordered_samples(traj);
  double total = 0.0;
  double t_prev = 0.0;
  double f_prev = 0.0;
  bool first = true;
  bool inside_prev = false;
  for (const Sample* s : samples) {
    double f = 0.0;
    const auto tf = window.time_factor(s->t);
    const bool inside = tf[0] != 0.0;
    if (inside) {
      const Grid& grid = s->state.grid();
      const TestFunctionSample chi = window.evaluate(grid, s->t);
      const ComplexVectorField grad = spectral_gradient(s->state.psi);
      double acc = 0.0;
      for (const ComplexField& c : grad) {
        const ComplexField b = bessel_quarter_power(c);
        for (std::size_t n = 0; n < b.size(); ++n) acc += chi.value[n] * chi.value[n] * std::norm(b[n]);
      }
      f = acc * grid.cell_volume();
    }
    // An indicator window only integrates panels lying inside its interval.
    const bool panel = !window.is_unit() || (inside && inside_prev);
    if (!first && panel) total += 0.5 * (s->t - t_prev) * (f + f_prev);
    t_prev = s->t;
    f_prev = f;
    inside_prev = inside;
    first = false;
  }
  return total;
}

}  // namespace qhd
