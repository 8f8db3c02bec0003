#include "topcorr/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "topcorr/errors.hpp"
#include "topcorr/parallel.hpp"
#include "topcorr/quadrature.hpp"

namespace topcorr {

namespace {

constexpr std::size_t kChunk = 4096;

// moment index layout: l+ (0..2), l- (3..5), l+_i l-_j (6..14)
using Moments = std::array<CompensatedSum, 15>;

void accumulate(Moments& m, Moments& sq, const DileptonEvent& e, double w)
{
  std::array<double, 15> x;
  for (int i = 0; i < 3; ++i) {
    x[i] = e.lplus[i];
    x[3 + i] = e.lminus[i];
    for (int j = 0; j < 3; ++j)
      x[6 + 3 * i + j] = e.lplus[i] * e.lminus[j];
  }
  for (int k = 0; k < 15; ++k) {
    m[k].add(w * x[k]);
    sq[k].add(w * x[k] * x[k]);
  }
}

double factor(int k)
{
  return k < 3 ? 3.0 : k < 6 ? -3.0 : -9.0;
}

TwoQubitState state_from_means(const std::array<double, 15>& mean, FrameTag frame)
{
  TwoQubitState s;
  s.frame = frame;
  for (int i = 0; i < 3; ++i) {
    s.bplus[i] = 3.0 * mean[i];
    s.bminus[i] = -3.0 * mean[3 + i];
    for (int j = 0; j < 3; ++j)
      s.corr(i, j) = -9.0 * mean[6 + 3 * i + j];
  }
  return s;
}

void check_alpha(double alpha)
{
  if (!(alpha > 0.0 && alpha <= std::numbers::pi / 4.0))
    throw DomainError("cone half-angle must lie in (0, pi/4]");
}

double cone_solid_angle(double alpha)
{
  return 2.0 * std::numbers::pi * (1.0 - std::cos(alpha));
}

Vector3 clamp_unit(const Vector3& v)
{
  const double r = v.norm();
  return r > 1.0 ? Vector3(v / r) : v;
}

} // namespace

StateEstimate estimate_state(const EventBatch& batch)
{
  const std::size_t n = batch.events.size();
  if (n < 100)
    throw InsufficientStatisticsError("estimate_state: need at least 100 events, got " + std::to_string(n));
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<Moments> sums(chunks), squares(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t end = std::min(n, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i)
      accumulate(sums[c], squares[c], batch.events[i], 1.0);
  });
  Moments m, sq;
  for (std::size_t c = 0; c < chunks; ++c)
    for (int k = 0; k < 15; ++k) {
      m[k].merge(sums[c][k]);
      sq[k].merge(squares[c][k]);
    }

  StateEstimate est;
  est.n_events = n;
  const double dn = static_cast<double>(n);
  std::array<double, 15> mean;
  for (int k = 0; k < 15; ++k) {
    mean[k] = m[k].value() / dn;
    const double var = std::max(0.0, (sq[k].value() - dn * mean[k] * mean[k]) / (dn - 1.0));
    est.std_errors[k] = std::abs(factor(k)) * std::sqrt(var / dn);
  }
  est.state = state_from_means(mean, batch.events.front().frame);
  return est;
}

double spectral_entropy(const TwoQubitState& state, const std::array<double, 15>& std_errors, double noise_sigmas)
{
  // |d lambda| <= ||d rho||_F and E ||d rho||_F^2 = sum(se^2) / 4
  double var = 0.0;
  for (const double se : std_errors)
    var += se * se;
  const double floor = noise_sigmas * 0.5 * std::sqrt(var);

  Eigen::SelfAdjointEigenSolver<DensityMatrix4> es(to_density_matrix(state), Eigen::EigenvaluesOnly);
  std::array<double, 4> ev;
  double total = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double lambda = es.eigenvalues()[k];
    ev[k] = lambda <= floor || lambda <= 0.0 ? 0.0 : lambda;
    total += ev[k];
  }
  if (!(total > 0.0))
    throw InternalError("spectral_entropy: no eigenvalue above the noise floor");
  for (auto& x : ev)
    x /= total;
  return entropy_from_eigenvalues(ev);
}

ConeSelector::ConeSelector(const EventBatch& batch) : nz_(64), nphi_(128)
{
  const std::size_t n = batch.events.size();
  lminus_.reserve(n);
  std::vector<int> bins(n);
  offsets_.assign(static_cast<std::size_t>(nz_ * nphi_) + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector3& l = batch.events[i].lminus;
    lminus_.push_back(l);
    bins[i] = bin_of(l.z(), std::atan2(l.y(), l.x()));
    ++offsets_[bins[i] + 1];
  }
  for (std::size_t b = 1; b < offsets_.size(); ++b)
    offsets_[b] += offsets_[b - 1];
  order_.resize(n);
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < n; ++i)
    order_[fill[bins[i]]++] = static_cast<std::uint32_t>(i);
}

int ConeSelector::bin_of(double z, double phi) const
{
  const int iz = std::clamp(static_cast<int>((z + 1.0) * 0.5 * nz_), 0, nz_ - 1);
  double u = phi / (2.0 * std::numbers::pi);
  u -= std::floor(u);
  const int ip = std::clamp(static_cast<int>(u * nphi_), 0, nphi_ - 1);
  return iz * nphi_ + ip;
}

std::vector<std::uint32_t> ConeSelector::select(const Vector3& axis, double alpha) const
{
  const double cos_alpha = std::cos(alpha);
  const double theta = std::acos(std::clamp(axis.z(), -1.0, 1.0));
  const double z_lo = std::cos(std::min(std::numbers::pi, theta + alpha));
  const double z_hi = std::cos(std::max(0.0, theta - alpha));
  const int iz_lo = std::clamp(static_cast<int>((z_lo + 1.0) * 0.5 * nz_), 0, nz_ - 1);
  const int iz_hi = std::clamp(static_cast<int>((z_hi + 1.0) * 0.5 * nz_), 0, nz_ - 1);

  int ip_lo = 0, ip_count = nphi_;
  if (theta - alpha > 0.0 && theta + alpha < std::numbers::pi) {
    const double half = std::asin(std::min(1.0, std::sin(alpha) / std::sin(theta)));
    const double phi0 = std::atan2(axis.y(), axis.x());
    double u_lo = (phi0 - half) / (2.0 * std::numbers::pi);
    u_lo -= std::floor(u_lo);
    ip_lo = static_cast<int>(u_lo * nphi_);
    ip_count = std::min(nphi_, static_cast<int>(std::ceil(2.0 * half / (2.0 * std::numbers::pi) * nphi_)) + 2);
  }

  std::vector<std::uint32_t> out;
  for (int iz = iz_lo; iz <= iz_hi; ++iz)
    for (int k = 0; k < ip_count; ++k) {
      const int b = iz * nphi_ + (ip_lo + k) % nphi_;
      for (std::uint32_t j = offsets_[b]; j < offsets_[b + 1]; ++j) {
        const std::uint32_t idx = order_[j];
        if (lminus_[idx].dot(axis) >= cos_alpha)
          out.push_back(idx);
      }
    }
  return out;
}

namespace {

ConditionalEstimate cone_estimate(const EventBatch& batch, const std::vector<std::uint32_t>& selected,
                                  const Vector3& n, double alpha)
{
  if (selected.size() < kMinConeEvents)
    throw InsufficientStatisticsError("conditional_bloch: " + std::to_string(selected.size()) +
                                      " events in the cone, need " + std::to_string(kMinConeEvents));
  std::array<CompensatedSum, 3> s, s2;
  for (const auto idx : selected) {
    const Vector3& l = batch.events[idx].lplus;
    for (int k = 0; k < 3; ++k) {
      s[k].add(l[k]);
      s2[k].add(l[k] * l[k]);
    }
  }
  ConditionalEstimate ce;
  ce.direction = n;
  ce.cone_alpha = alpha;
  ce.n_selected = selected.size();
  const double m = static_cast<double>(selected.size());
  for (int k = 0; k < 3; ++k) {
    const double mean = s[k].value() / m;
    ce.bloch[k] = 3.0 * mean;
    ce.bloch_error[k] = 3.0 * std::sqrt(std::max(0.0, (s2[k].value() - m * mean * mean) / (m - 1.0)) / m);
  }
  ce.prob = m / static_cast<double>(batch.events.size()) * 2.0 * std::numbers::pi / cone_solid_angle(alpha);
  return ce;
}

} // namespace

ConditionalEstimate conditional_bloch(const EventBatch& batch, const Vector3& n, double alpha)
{
  check_alpha(alpha);
  if (std::abs(n.norm() - 1.0) > 1e-10)
    throw DomainError("conditional_bloch: direction must be a unit vector");
  const double cos_alpha = std::cos(alpha);
  std::vector<std::uint32_t> selected;
  for (std::size_t i = 0; i < batch.events.size(); ++i)
    if (-batch.events[i].lminus.dot(n) >= cos_alpha)
      selected.push_back(static_cast<std::uint32_t>(i));
  return cone_estimate(batch, selected, n, alpha);
}

ConditionalEstimate conditional_bloch(const EventBatch& batch, const ConeSelector& selector, const Vector3& n,
                                      double alpha)
{
  check_alpha(alpha);
  if (std::abs(n.norm() - 1.0) > 1e-10)
    throw DomainError("conditional_bloch: direction must be a unit vector");
  return cone_estimate(batch, selector.select(-n, alpha), n, alpha);
}

ConditionalOutcome debias_conditional(const Vector3& cone_bloch, double cone_prob, const Vector3& bplus, double alpha)
{
  // cone means are (B+ + f C n)/(1 + f n.B-) and (1 + f n.B-)/2 with f = (1 + cos alpha)/2
  const double f = 0.5 * (1.0 + std::cos(alpha));
  const double nb = (2.0 * cone_prob - 1.0) / f;
  const Vector3 cn = (2.0 * cone_prob * cone_bloch - bplus) / f;
  const double denom = 1.0 + nb;
  ConditionalOutcome out;
  out.prob = 0.5 * denom;
  out.bloch = denom > 1e-12 ? Vector3((bplus + cn) / denom) : Vector3::Zero();
  return out;
}

double discord_from_conditionals(double entropy_b, double entropy_total, const std::vector<ConditionalPair>& pairs)
{
  if (pairs.empty())
    throw DomainError("discord_from_conditionals: no measurement directions");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& pr : pairs) {
    double p_plus = std::max(pr.plus.prob, 0.0);
    double p_minus = std::max(pr.minus.prob, 0.0);
    const double total = p_plus + p_minus;
    if (!(total > 0.0))
      continue;
    p_plus /= total;
    p_minus /= total;
    const double value = p_plus * von_neumann_entropy(clamp_unit(pr.plus.bloch)) +
                         p_minus * von_neumann_entropy(clamp_unit(pr.minus.bloch));
    best = std::min(best, value);
  }
  if (!std::isfinite(best))
    throw InsufficientStatisticsError("discord_from_conditionals: every measurement direction is empty");
  return entropy_b - entropy_total + best;
}

namespace {

std::uint8_t poisson1(double u)
{
  // inverse CDF of Poisson(1)
  double p = std::exp(-1.0);
  double cdf = p;
  std::uint8_t k = 0;
  while (u >= cdf && k < 20) {
    ++k;
    p /= k;
    cdf += p;
  }
  return k;
}

struct ReplicaMoments
{
  double weight = 0.0;
  std::array<double, 15> sums{};
};

// Weighted cone sums for every replica: [replica] -> (sum of weights, sum of w l+).
struct ConeSums
{
  std::vector<double> count;
  std::vector<Vector3> lplus;
};

ConeSums cone_sums(const EventBatch& batch, const std::vector<std::uint32_t>& selected,
                   const std::vector<std::vector<std::uint8_t>>& weights)
{
  const std::size_t replicas = weights.size() + 1;
  ConeSums cs;
  cs.count.assign(replicas, 0.0);
  cs.lplus.assign(replicas, Vector3::Zero());
  for (const auto idx : selected) {
    const Vector3& l = batch.events[idx].lplus;
    cs.count[0] += 1.0;
    cs.lplus[0] += l;
    for (std::size_t r = 1; r < replicas; ++r) {
      const double w = weights[r - 1][idx];
      cs.count[r] += w;
      cs.lplus[r] += w * l;
    }
  }
  return cs;
}

ConditionalOutcome outcome_from_sums(double count, const Vector3& lsum, double total_weight, double alpha,
                                     const Vector3& bplus, bool debias)
{
  const double prob = count / total_weight * 2.0 * std::numbers::pi / cone_solid_angle(alpha);
  const Vector3 bloch = count > 0.0 ? Vector3(3.0 * lsum / count) : Vector3::Zero();
  if (debias)
    return debias_conditional(bloch, prob, bplus, alpha);
  return {bloch, prob};
}

} // namespace

DirectDiscordResult direct_discord(const EventBatch& batch, const DirectDiscordOptions& opts)
{
  check_alpha(opts.alpha);
  if (opts.grid_size < 2)
    throw DomainError("direct_discord: grid needs at least two directions");
  if (opts.bootstrap < 0 || opts.bootstrap == 1)
    throw DomainError("direct_discord: bootstrap needs 0 or at least 2 replicas");
  const std::size_t n = batch.events.size();
  if (n < 100)
    throw InsufficientStatisticsError("direct_discord: need at least 100 events");

  const std::size_t replicas = static_cast<std::size_t>(opts.bootstrap);
  std::vector<std::vector<std::uint8_t>> weights(replicas, std::vector<std::uint8_t>(n));
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  parallel_for(replicas * chunks, [&](std::size_t task) {
    const std::size_t r = task / chunks, c = task % chunks;
    const std::size_t end = std::min(n, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      RandomStream rng(opts.bootstrap_seed, i, static_cast<std::uint32_t>(r + 1));
      weights[r][i] = poisson1(rng.uniform());
    }
  });

  // global moments per replica
  std::vector<std::vector<Moments>> chunk_sums(replicas + 1, std::vector<Moments>(chunks));
  std::vector<std::vector<CompensatedSum>> chunk_w(replicas + 1, std::vector<CompensatedSum>(chunks));
  std::vector<Moments> chunk_sq(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    Moments unused;
    const std::size_t end = std::min(n, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i)
      for (std::size_t r = 0; r <= replicas; ++r) {
        const double w = r == 0 ? 1.0 : weights[r - 1][i];
        if (w == 0.0)
          continue;
        chunk_w[r][c].add(w);
        accumulate(chunk_sums[r][c], r == 0 ? chunk_sq[c] : unused, batch.events[i], w);
      }
  });
  std::vector<TwoQubitState> states(replicas + 1);
  std::array<double, 15> std_errors{};
  std::vector<double> total_weight(replicas + 1);
  for (std::size_t r = 0; r <= replicas; ++r) {
    Moments m;
    CompensatedSum w;
    for (std::size_t c = 0; c < chunks; ++c) {
      w.merge(chunk_w[r][c]);
      for (int k = 0; k < 15; ++k)
        m[k].merge(chunk_sums[r][c][k]);
    }
    total_weight[r] = w.value();
    std::array<double, 15> mean;
    for (int k = 0; k < 15; ++k)
      mean[k] = m[k].value() / total_weight[r];
    states[r] = state_from_means(mean, batch.events.front().frame);
    if (r == 0) {
      Moments sq;
      for (std::size_t c = 0; c < chunks; ++c)
        for (int k = 0; k < 15; ++k)
          sq[k].merge(chunk_sq[c][k]);
      const double dn = static_cast<double>(n);
      for (int k = 0; k < 15; ++k) {
        const double var = std::max(0.0, (sq[k].value() - dn * mean[k] * mean[k]) / (dn - 1.0));
        std_errors[k] = std::abs(factor(k)) * std::sqrt(var / dn);
      }
    }
  }

  const ConeSelector selector(batch);
  const auto grid = fibonacci_sphere(opts.grid_size);
  std::vector<double> alphas{opts.alpha};
  if (opts.extrapolate)
    alphas.push_back(opts.alpha / std::numbers::sqrt2);

  // sums[a][2 * g + s]: cone for grid direction g, s = 0 outcome +n (lepton near -n), s = 1 outcome -n
  std::vector<std::vector<ConeSums>> sums(alphas.size(), std::vector<ConeSums>(2 * grid.size()));
  std::vector<std::size_t> min_events(alphas.size() * 2 * grid.size());
  parallel_for(alphas.size() * 2 * grid.size(), [&](std::size_t task) {
    const std::size_t a = task / (2 * grid.size());
    const std::size_t k = task % (2 * grid.size());
    const Vector3 axis = (k % 2 == 0 ? -1.0 : 1.0) * grid[k / 2];
    const auto selected = selector.select(axis, alphas[a]);
    min_events[task] = selected.size();
    sums[a][k] = cone_sums(batch, selected, weights);
  });
  const std::size_t fewest = *std::min_element(min_events.begin(), min_events.end());
  if (fewest < kMinConeEvents)
    throw InsufficientStatisticsError("direct_discord: a cone holds only " + std::to_string(fewest) +
                                      " events, need " + std::to_string(kMinConeEvents));

  auto evaluate = [&](std::size_t r, Vector3* best_dir, double* sb, double* stot) {
    const TwoQubitState& s = states[r];
    std::vector<ConditionalPair> pairs(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
      std::array<ConditionalOutcome, 2> out;
      for (int side = 0; side < 2; ++side) {
        std::vector<ConditionalOutcome> per_alpha;
        for (std::size_t a = 0; a < alphas.size(); ++a) {
          const auto& cs = sums[a][2 * g + side];
          per_alpha.push_back(
            outcome_from_sums(cs.count[r], cs.lplus[r], total_weight[r], alphas[a], s.bplus, opts.debias));
        }
        if (alphas.size() == 2) {
          // linear in alpha^2 through alpha and alpha / sqrt(2)
          out[side].bloch = 2.0 * per_alpha[1].bloch - per_alpha[0].bloch;
          out[side].prob = 2.0 * per_alpha[1].prob - per_alpha[0].prob;
        } else {
          out[side] = per_alpha[0];
        }
      }
      pairs[g] = {out[0], out[1]};
    }
    const double entropy_b = von_neumann_entropy(clamp_unit(s.bminus));
    const double entropy_total = spectral_entropy(s, std_errors, opts.entropy_noise_sigmas);
    if (sb)
      *sb = entropy_b;
    if (stot)
      *stot = entropy_total;
    if (best_dir) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t g = 0; g < grid.size(); ++g) {
        const double v = discord_from_conditionals(entropy_b, entropy_total, {pairs[g]});
        if (v < best) {
          best = v;
          *best_dir = grid[g];
        }
      }
    }
    return discord_from_conditionals(entropy_b, entropy_total, pairs);
  };

  DirectDiscordResult res;
  res.min_cone_events = fewest;
  res.value = evaluate(0, &res.optimal_direction, &res.entropy_b, &res.entropy_total);
  if (replicas > 0) {
    std::vector<double> values(replicas);
    parallel_for(replicas, [&](std::size_t r) { values[r] = evaluate(r + 1, nullptr, nullptr, nullptr); });
    double mean = 0.0;
    for (double v : values)
      mean += v;
    mean /= static_cast<double>(replicas);
    double var = 0.0;
    for (double v : values)
      var += (v - mean) * (v - mean);
    res.std_error = std::sqrt(var / static_cast<double>(replicas - 1));
  }
  return res;
}

EllipsoidReconstruction reconstruct_ellipsoid(const EventBatch& batch, int grid_size, double alpha, bool debias)
{
  check_alpha(alpha);
  if (grid_size < 9)
    throw DomainError("reconstruct_ellipsoid: need at least 9 directions");
  const StateEstimate est = estimate_state(batch);
  const ConeSelector selector(batch);
  const auto grid = fibonacci_sphere(grid_size);
  EllipsoidReconstruction rec;
  rec.directions.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t g) { rec.directions[g] = conditional_bloch(batch, selector, grid[g], alpha); });

  const double f = 0.5 * (1.0 + std::cos(alpha));
  std::vector<Vector3> points;
  std::vector<double> errors;
  for (const auto& ce : rec.directions) {
    points.push_back(debias ? debias_conditional(ce.bloch, ce.prob, est.state.bplus, alpha).bloch : ce.bloch);
    errors.push_back(ce.bloch_error.maxCoeff() / (debias ? f : 1.0));
  }
  std::nth_element(errors.begin(), errors.begin() + errors.size() / 2, errors.end());
  rec.degenerate_tol = 3.0 * errors[errors.size() / 2];
  rec.fit = fit_ellipsoid(points, rec.degenerate_tol);
  return rec;
}

} // namespace topcorr
