#include "dbar/logspace.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <random>

#include "dbar/parallel.hpp"

namespace dbar {

namespace {

// R2 sequence: additive recurrence on the plastic number.
constexpr double kPlastic = 1.32471795724474602596;
constexpr double kR2a = 1.0 / kPlastic;
constexpr double kR2b = 1.0 / (kPlastic * kPlastic);

std::vector<cplx> base_points(const PlanarDomain& domain, const ScalarField& f, int count, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u0 = unit(rng);
  const double v0 = unit(rng);
  const BoundingBox b = domain.bounding_box();
  std::vector<cplx> pts;
  pts.reserve(count);
  const long max_draws = 64L * count + 1024;
  for (long n = 1; n <= max_draws && static_cast<int>(pts.size()) < count; ++n) {
    const double u = std::fmod(u0 + n * kR2a, 1.0);
    const double v = std::fmod(v0 + n * kR2b, 1.0);
    const cplx z{b.xmin + u * (b.xmax - b.xmin), b.ymin + v * (b.ymax - b.ymin)};
    if (domain.contains(z) && f.defined_at(z)) pts.push_back(z);
  }
  if (static_cast<int>(pts.size()) < count) fail(ErrorCode::insufficient_sampling, "could not place base points inside the domain");
  return pts;
}

class Evaluator {
 public:
  Evaluator(const ScalarField& f, bool memoize) : f_(f), memoize_(memoize) {}

  cplx operator()(cplx z) {
    if (!memoize_) return f_(z);
    const std::pair<double, double> key{z.real(), z.imag()};
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    const cplx v = f_(z);
    std::lock_guard<std::mutex> lock(mu_);
    cache_.emplace(key, v);
    return v;
  }

 private:
  const ScalarField& f_;
  bool memoize_;
  std::mutex mu_;
  std::map<std::pair<double, double>, cplx> cache_;
};

struct ScaleResult {
  double omega = 0.0;
  double omega_segment = 0.0;
  size_t pairs = 0;
  double sup = 0.0;
};

double linear_fit(const std::vector<double>& x, const std::vector<double>& y, double& slope, double& intercept) {
  const size_t n = x.size();
  double mx = 0.0;
  double my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) fail(ErrorCode::degenerate_fit, "log-order fit has no spread in scales");
  slope = sxy / sxx;
  intercept = my - slope * mx;
  double ss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    ss += r * r;
  }
  return std::sqrt(ss / n);
}

}  // namespace

ModulusProfile ModulusProfile::truncated(int k_max) const {
  ModulusProfile out;
  out.sup_norm = sup_norm;
  for (size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] > k_max) continue;
    out.ks.push_back(ks[i]);
    out.scales.push_back(scales[i]);
    out.omega.push_back(omega[i]);
    out.pair_count.push_back(pair_count[i]);
    if (!omega_segment.empty()) out.omega_segment.push_back(omega_segment[i]);
  }
  return out;
}

ModulusProfile modulus_profile(const PlanarDomain& domain, const ScalarField& f, const ProfileOptions& o) {
  require(o.k_min >= 1 && o.k_min < o.k_max && o.k_max <= 40, "profile scales need 1 <= k_min < k_max <= 40");
  require(o.base_points >= 0 && o.directions >= 1, "profile needs a non-negative base point count and directions");
  const std::vector<cplx> base = base_points(domain, f, o.base_points, o.seed);
  Evaluator eval(f, o.memoize);
  std::vector<cplx> base_values(base.size());
  for (size_t i = 0; i < base.size(); ++i) base_values[i] = eval(base[i]);

  auto admissible = [&](cplx z) { return domain.contains(z) && f.defined_at(z); };
  const int nk = o.k_max - o.k_min + 1;
  std::vector<ScaleResult> res(nk);
  parallel_for(static_cast<size_t>(nk), [&](size_t idx) {
    const int k = o.k_min + static_cast<int>(idx);
    const double h = std::ldexp(1.0, -k);
    const double rot = std::fmod(k * 0.6180339887498949, 1.0);
    ScaleResult& r = res[idx];
    auto take = [&](cplx, cplx fa, cplx b, bool singular = false) {
      if (!admissible(b)) return;
      const cplx fb = eval(b);
      r.omega = std::max(r.omega, std::abs(fb - fa));
      if (singular) r.omega_segment = std::max(r.omega_segment, std::abs(fb - fa));
      r.sup = std::max({r.sup, std::abs(fa), std::abs(fb)});
      ++r.pairs;
    };
    for (size_t i = 0; i < base.size(); ++i) {
      for (int j = 0; j < o.directions; ++j) {
        const double phi = kTwoPi * (j + rot) / o.directions;
        take(base[i], base_values[i], base[i] + std::polar(h, phi));
      }
    }
    if (f.declared_singularity) {
      const cplx p = *f.declared_singularity;
      for (int a = 0; a < o.singular_angles; ++a) {
        const double phi = kTwoPi * a / o.singular_angles;
        for (double alpha : o.singular_alphas) {
          const cplx w = p + alpha * h * std::polar(1.0, phi);
          if (!admissible(w)) continue;
          const cplx fw = eval(w);
          take(w, fw, w + std::polar(h, phi), alpha >= -1.0 && alpha <= 0.0);
          for (int d = 0; d < o.singular_directions; ++d)
            take(w, fw, w + std::polar(h, kTwoPi * d / o.singular_directions));
        }
        const cplx w = p + std::polar(h / std::sqrt(2.0), phi);
        if (admissible(w)) take(w, eval(w), p + std::polar(h / std::sqrt(2.0), phi + 0.5 * kPi));
      }
    }
  });

  ModulusProfile prof;
  for (size_t i = 0; i < base.size(); ++i) prof.sup_norm = std::max(prof.sup_norm, std::abs(base_values[i]));
  for (int idx = 0; idx < nk; ++idx) {
    const int k = o.k_min + idx;
    if (res[idx].pairs == 0)
      fail(ErrorCode::insufficient_sampling, "no admissible pairs at scale 2^-" + std::to_string(k));
    prof.ks.push_back(k);
    prof.scales.push_back(std::ldexp(1.0, -k));
    prof.omega.push_back(res[idx].omega);
    prof.pair_count.push_back(res[idx].pairs);
    if (f.declared_singularity) prof.omega_segment.push_back(res[idx].omega_segment);
    prof.sup_norm = std::max(prof.sup_norm, res[idx].sup);
  }
  return prof;
}

ModulusProfile modulus_profile(const PlanarDomain& domain, const ScalarField& f, int k_min, int k_max,
                               int pairs_per_scale, uint64_t seed) {
  require(k_min >= 3 && k_min < k_max, "modulus_profile requires 3 <= k_min < k_max");
  require(pairs_per_scale >= 1000, "modulus_profile requires at least 1000 pairs per scale");
  ProfileOptions o;
  o.k_min = k_min;
  o.k_max = k_max;
  o.base_points = pairs_per_scale;
  o.seed = seed;
  return modulus_profile(domain, f, o);
}

ProfileOptions sparse_profile_options(int k_min, int k_max, uint64_t seed) {
  ProfileOptions o;
  o.k_min = k_min;
  o.k_max = k_max;
  o.base_points = 4;
  o.seed = seed;
  o.directions = 2;
  o.singular_alphas = {0.0, -0.5};
  o.singular_angles = 1;
  o.singular_directions = 1;
  o.memoize = true;
  return o;
}

double log_norm(const ModulusProfile& profile, double nu) {
  require(nu > 0.0, "log_norm requires nu > 0");
  double semi = 0.0;
  for (size_t i = 0; i < profile.omega.size(); ++i)
    semi = std::max(semi, profile.omega[i] * std::pow(std::abs(std::log(profile.scales[i])), nu));
  return profile.sup_norm + semi;
}

LogOrderFit fit_log_order(const ModulusProfile& profile, FitModel model, FitSource source) {
  if (source == FitSource::segment_pairs && profile.omega_segment.empty())
    fail(ErrorCode::degenerate_fit, "profile has no segment pairs");
  const bool singular = source == FitSource::segment_pairs ||
                        (source == FitSource::automatic && !profile.omega_segment.empty());
  const std::vector<double>& omega = singular ? profile.omega_segment : profile.omega;
  std::vector<double> t;
  std::vector<double> y;
  LogOrderFit fit;
  for (size_t i = 0; i < omega.size(); ++i) {
    if (!(omega[i] > 0.0) || !std::isfinite(omega[i])) continue;
    if (t.empty()) fit.k_first = profile.ks[i];
    fit.k_last = profile.ks[i];
    t.push_back(std::log(1.0 / profile.scales[i]));
    y.push_back(std::log(omega[i]));
  }
  if (t.size() < 4) fail(ErrorCode::degenerate_fit, "log-order fit needs at least 4 scales with omega > 0");
  fit.scales_used = t.size();

  auto rms_for = [&](double c, double& slope, double& intercept) {
    std::vector<double> x(t.size());
    for (size_t i = 0; i < t.size(); ++i) x[i] = std::log(t[i] + c);
    return linear_fit(x, y, slope, intercept);
  };
  double c = 0.0;
  if (model == FitModel::shifted) {
    const double tmin = *std::min_element(t.begin(), t.end());
    const double tmax = *std::max_element(t.begin(), t.end());
    const double lo = -0.9 * tmin;
    const double hi = 4.0 * tmax;
    const int grid = 400;
    double best = std::numeric_limits<double>::infinity();
    int best_i = 0;
    double s = 0.0;
    double a = 0.0;
    for (int i = 0; i <= grid; ++i) {
      const double r = rms_for(lo + (hi - lo) * i / grid, s, a);
      if (r < best) {
        best = r;
        best_i = i;
      }
    }
    double l = lo + (hi - lo) * std::max(0, best_i - 1) / grid;
    double u = lo + (hi - lo) * std::min(grid, best_i + 1) / grid;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = u - g * (u - l);
    double x2 = l + g * (u - l);
    double f1 = rms_for(x1, s, a);
    double f2 = rms_for(x2, s, a);
    for (int it = 0; it < 200 && u - l > 1e-13 * std::max(1.0, std::abs(l)); ++it) {
      if (f1 <= f2) {
        u = x2;
        x2 = x1;
        f2 = f1;
        x1 = u - g * (u - l);
        f1 = rms_for(x1, s, a);
      } else {
        l = x1;
        x1 = x2;
        f1 = f2;
        x2 = l + g * (u - l);
        f2 = rms_for(x2, s, a);
      }
    }
    c = 0.5 * (l + u);
  }
  double slope = 0.0;
  double intercept = 0.0;
  rms_for(c, slope, intercept);
  fit.nu_hat = -slope;
  fit.intercept = intercept;
  fit.shift = c;
  for (size_t i = 0; i < t.size(); ++i)
    fit.residual = std::max(fit.residual, std::abs(y[i] - (intercept + slope * std::log(t[i] + c))));
  return fit;
}

double c1_log_norm(const PlanarDomain& domain, const ScalarField& u, double nu, const ProfileOptions& options) {
  require(u.dz && u.dzbar, "c1_log_norm needs derivative closures on the field");
  ScalarField du;
  du.evaluate = u.dz;
  du.declared_singularity = u.declared_singularity;
  du.intended_domain = u.intended_domain;
  ScalarField dbu = du;
  dbu.evaluate = u.dzbar;
  const ModulusProfile pu = modulus_profile(domain, u, options);
  const ModulusProfile pdz = modulus_profile(domain, du, options);
  const ModulusProfile pdzb = modulus_profile(domain, dbu, options);
  return pu.sup_norm + log_norm(pdz, nu) + log_norm(pdzb, nu);
}

GridSeminorm grid_pair_seminorm(const std::vector<cplx>& points, const std::vector<cplx>& values, double order) {
  require(points.size() == values.size(), "grid_pair_seminorm needs one value per point");
  GridSeminorm out;
  for (size_t i = 0; i < points.size(); ++i) {
    for (size_t j = i + 1; j < points.size(); ++j) {
      const double d = std::abs(points[i] - points[j]);
      if (!(d > 0.0) || d > 0.5) continue;
      ++out.pairs;
      out.value = std::max(out.value, std::abs(values[i] - values[j]) * std::pow(std::abs(std::log(d)), order));
    }
  }
  return out;
}

std::string profile_csv(const ModulusProfile& profile) {
  const bool sing = !profile.omega_segment.empty();
  std::string out = sing ? "k,h_k,omega,pair_count,omega_segment\n" : "k,h_k,omega,pair_count\n";
  char buf[160];
  for (size_t i = 0; i < profile.ks.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%zu", profile.ks[i], profile.scales[i], profile.omega[i],
                  profile.pair_count[i]);
    out += buf;
    if (sing) {
      std::snprintf(buf, sizeof buf, ",%.17g", profile.omega_segment[i]);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace dbar
