#include "polyprop/oracle.hpp"

#include "polyprop/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <sstream>

namespace polyprop {

namespace {

using cplx = std::complex<double>;

int fast_size(int n) {
  for (int m = std::max(n, 1);; ++m) {
    int r = m;
    for (int f : {2, 3, 5, 7}) {
      while (r % f == 0) r /= f;
    }
    if (r == 1) return m;
  }
}

std::vector<double> fft_frequencies(int n, double h) {
  std::vector<double> p(n);
  for (int k = 0; k < n; ++k) {
    const int kk = k <= n / 2 ? k : k - n;
    p[k] = 2.0 * std::numbers::pi * kk / (n * h);
  }
  return p;
}

double lanczos(double x, int a) {
  if (x == 0.0) return 1.0;
  if (std::abs(x) >= a) return 0.0;
  const double px = std::numbers::pi * x;
  return a * std::sin(px) * std::sin(px / a) / (px * px);
}

bool on_thin_face(const WallSegment& w, const Vec2& q) {
  if (!w.thin()) return false;
  const double tol = kEpsActive / w.length();
  const double tau = w.slab(q);
  return tau >= -tol && tau <= 1.0 + tol && std::abs(w.signed_distance(q)) <= kEpsActive;
}

struct Run {
  std::uint32_t target;
  std::uint32_t source;  // source index for the first element, decreasing along the run
  std::uint32_t kernel;  // kernel index for the first element, increasing along the run
  std::uint32_t length;
};

struct FftPlan {
  int px = 0, py = 0;
  fftw_complex* buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  FftPlan(int px_, int py_) : px(px_), py(py_) {
    buf = fftw_alloc_complex(static_cast<std::size_t>(px) * py);
    fwd = fftw_plan_dft_2d(py, px, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_2d(py, px, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FftPlan() {
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(buf);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  cplx* data() { return reinterpret_cast<cplx*>(buf); }
};

struct SliceOperator {
  int radius = 0;
  int px = 0, py = 0;
  std::vector<cplx> multiplier;  // already divided by px*py
  SliceKernel kernel;
};

SliceOperator build_operator(const Lattice& lat, const PhysicalConstants& pc) {
  const double dt = pc.T / lat.slices;
  const double sigma = std::sqrt(pc.hbar * dt / pc.mass);
  const auto& o = lat.options;
  SliceOperator op;
  op.radius = static_cast<int>(std::ceil(o.reach * sigma / lat.h)) + 1;
  op.px = fast_size(lat.nx + op.radius + 1);
  op.py = fast_size(lat.ny + op.radius + 1);
  const int R = op.radius;
  if (2 * R + 1 > std::min(op.px, op.py)) {
    op.px = fast_size(std::max(op.px, 2 * R + 2));
    op.py = fast_size(std::max(op.py, 2 * R + 2));
  }

  const auto fx = fft_frequencies(op.px, lat.h);
  const auto fy = fft_frequencies(op.py, lat.h);
  const double pcut = o.window / sigma;
  const double width = o.taper / sigma;
  const double norm = 1.0 / (static_cast<double>(op.px) * op.py);
  op.multiplier.resize(static_cast<std::size_t>(op.px) * op.py);
  for (int ky = 0; ky < op.py; ++ky) {
    for (int kx = 0; kx < op.px; ++kx) {
      const double p2 = fx[kx] * fx[kx] + fy[ky] * fy[ky];
      const double f = 0.5 * std::erfc((std::sqrt(p2) - pcut) / width);
      op.multiplier[static_cast<std::size_t>(ky) * op.px + kx] =
          std::polar(f * norm, -pc.hbar * p2 * dt / (2.0 * pc.mass));
    }
  }

  FftPlan plan(op.px, op.py);
  std::copy(op.multiplier.begin(), op.multiplier.end(), plan.data());
  fftw_execute(plan.bwd);
  op.kernel.radius = R;
  op.kernel.values.resize(static_cast<std::size_t>(2 * R + 1) * (2 * R + 1));
  for (int dy = -R; dy <= R; ++dy) {
    for (int dx = -R; dx <= R; ++dx) {
      const int ix = (dx + op.px) % op.px;
      const int iy = (dy + op.py) % op.py;
      op.kernel.values[static_cast<std::size_t>(dy + R) * (2 * R + 1) + (dx + R)] =
          plan.data()[static_cast<std::size_t>(iy) * op.px + ix];
    }
  }
  return op;
}

// Kernel terms whose straight segment passes through an obstacle, grouped into
// runs of consecutive x offsets.
std::vector<Run> blocked_runs(const Lattice& lat, int R) {
  std::vector<WallSegment> faces;
  for (const auto& f : lat.cs.faces()) {
    bool dup = false;
    for (const auto& g : faces) {
      dup = dup || (f.thin() && g.thin() && (f.a - g.a).norm() <= kEpsActive && (f.b - g.b).norm() <= kEpsActive);
    }
    if (!dup) faces.push_back(f);
  }
  std::vector<Run> runs;
  if (faces.empty()) return runs;
  const double reach = (R * std::sqrt(2.0) + 1.0) * lat.h;
  const int W = 2 * R + 1;
  std::vector<const WallSegment*> near;
  for (int j = 0; j < lat.ny; ++j) {
    for (int i = 0; i < lat.nx; ++i) {
      const Vec2 t = lat.node(i, j);
      near.clear();
      for (const auto& f : faces) {
        if (distance_to_face(f, t) <= reach) near.push_back(&f);
      }
      if (near.empty()) continue;
      const auto tidx = static_cast<std::uint32_t>(lat.index(i, j));
      for (int dy = -R; dy <= R; ++dy) {
        const int sj = j - dy;
        if (sj < 0 || sj >= lat.ny) continue;
        int open = 0;
        Run cur{};
        auto flush = [&] {
          if (open > 0) {
            cur.length = open;
            runs.push_back(cur);
          }
          open = 0;
        };
        for (int dx = -R; dx <= R; ++dx) {
          const int si = i - dx;
          bool blocked = false;
          if (si >= 0 && si < lat.nx && lat.mask[lat.index(si, sj)]) {
            const Vec2 s = lat.node(si, sj);
            for (const auto* f : near) {
              if (face_blocks(*f, s, t)) {
                blocked = true;
                break;
              }
            }
          }
          if (!blocked) {
            flush();
            continue;
          }
          if (open == 0) {
            cur.target = tidx;
            cur.source = static_cast<std::uint32_t>(lat.index(si, sj));
            cur.kernel = static_cast<std::uint32_t>((dy + R) * W + (dx + R));
          }
          ++open;
        }
        flush();
      }
    }
  }
  return runs;
}

}  // namespace

Lattice make_lattice(const ConstraintSet& cs, const Box& box, const Vec2& anchor, const LatticeOptions& opts) {
  if (opts.grid < 8) throw ValidationError("oracle grid must have at least 8 nodes per side");
  if (opts.slices < 1) throw ValidationError("oracle needs at least one time slice");
  Lattice lat;
  lat.cs = cs;
  lat.options = opts;
  lat.slices = opts.slices;
  const Vec2 ext = box.extent();
  const double longer = std::max(ext.x(), ext.y());
  if (!(longer > 0.0)) throw ValidationError("oracle box has zero extent");
  lat.h = longer / (opts.grid - 1);
  lat.nx = std::min(opts.grid, static_cast<int>(std::floor(ext.x() / lat.h + 1e-9)) + 1);
  lat.ny = std::min(opts.grid, static_cast<int>(std::floor(ext.y() / lat.h + 1e-9)) + 1);
  lat.nx = std::max(lat.nx, 2);
  lat.ny = std::max(lat.ny, 2);
  const Vec2 steps = ((anchor - box.lo) / lat.h).array().round();
  lat.origin = anchor - lat.h * steps;
  lat.mask = lattice_mask(cs, lat);
  if (opts.sponge > 0.0) {
    lat.damping.assign(lat.size(), 1.0);
    const Vec2 far = lat.node(lat.nx - 1, lat.ny - 1);
    for (int j = 0; j < lat.ny; ++j) {
      for (int i = 0; i < lat.nx; ++i) {
        const Vec2 q = lat.node(i, j);
        const double d = std::min({q.x() - lat.origin.x(), far.x() - q.x(), q.y() - lat.origin.y(), far.y() - q.y()});
        if (d < opts.sponge) {
          const double u = (opts.sponge - d) / opts.sponge;
          lat.damping[lat.index(i, j)] = std::exp(-opts.sponge_strength * u * u);
        }
      }
    }
  }
  return lat;
}

std::vector<std::uint8_t> lattice_mask(const ConstraintSet& cs, const Lattice& lat) {
  std::vector<std::uint8_t> mask(lat.size(), 1);
  for (int j = 0; j < lat.ny; ++j) {
    for (int i = 0; i < lat.nx; ++i) {
      const Vec2 q = lat.node(i, j);
      bool ok = cs.max_g(q) <= kEpsActive;
      for (const auto& f : cs.faces()) ok = ok && !on_thin_face(f, q);
      mask[lat.index(i, j)] = ok ? 1 : 0;
    }
  }
  return mask;
}

void apply_mask(const Lattice& lat, std::vector<cplx>& field) {
  for (std::size_t k = 0; k < field.size(); ++k) {
    if (!lat.mask[k]) field[k] = 0.0;
  }
}

SliceKernel slice_kernel(const Lattice& lat, const PhysicalConstants& pc) { return build_operator(lat, pc).kernel; }

LatticeField propagate_field(const Lattice& lat, const PhysicalConstants& pc, std::vector<cplx> initial) {
  pc.validate();
  if (initial.size() != lat.size()) throw std::invalid_argument("propagate_field: field size does not match lattice");
  LatticeField out;
  out.lattice = lat;

  const double dt = pc.T / lat.slices;
  const double sigma = std::sqrt(pc.hbar * dt / pc.mass);
  if (lat.slices < 4) {
    out.warnings.push_back("InstabilityWarning: fewer than 4 time slices");
  }
  if (lat.options.wavelength > 0.0 && lat.options.wavelength / lat.h < 8.0) {
    std::ostringstream msg;
    msg << "InstabilityWarning: wavelength/h = " << lat.options.wavelength / lat.h << " < 8";
    out.warnings.push_back(msg.str());
  }
  if ((lat.options.window + 4.0 * lat.options.taper) / sigma > std::numbers::pi / lat.h) {
    out.warnings.push_back("InstabilityWarning: slice kernel band exceeds the grid Nyquist limit");
  }

  const SliceOperator op = build_operator(lat, pc);
  const auto runs = blocked_runs(lat, op.radius);
  const auto& k = op.kernel.values;

  FftPlan plan(op.px, op.py);
  std::vector<cplx> phi = std::move(initial);
  std::vector<cplx> next(lat.size());
  for (int s = 0; s < lat.slices; ++s) {
    apply_mask(lat, phi);
    cplx* buf = plan.data();
    std::fill(buf, buf + static_cast<std::size_t>(op.px) * op.py, cplx(0.0));
    for (int j = 0; j < lat.ny; ++j) {
      std::copy_n(phi.begin() + static_cast<std::ptrdiff_t>(lat.index(0, j)), lat.nx,
                  buf + static_cast<std::size_t>(j) * op.px);
    }
    fftw_execute(plan.fwd);
    for (std::size_t q = 0; q < op.multiplier.size(); ++q) buf[q] *= op.multiplier[q];
    fftw_execute(plan.bwd);
    for (int j = 0; j < lat.ny; ++j) {
      std::copy_n(buf + static_cast<std::size_t>(j) * op.px, lat.nx,
                  next.begin() + static_cast<std::ptrdiff_t>(lat.index(0, j)));
    }
    for (const auto& r : runs) {
      cplx acc = 0.0;
      const cplx* kk = k.data() + r.kernel;
      const cplx* src = phi.data() + r.source;
      for (std::uint32_t m = 0; m < r.length; ++m) acc += kk[m] * *(src - m);
      next[r.target] -= acc;
    }
    if (!lat.damping.empty()) {
      for (std::size_t q = 0; q < next.size(); ++q) next[q] *= lat.damping[q];
    }
    std::swap(phi, next);
  }
  apply_mask(lat, phi);
  out.values = std::move(phi);
  return out;
}

LatticeField lattice_propagate(const Lattice& lat, const PhysicalConstants& pc, const Vec2& q_src) {
  const Vec2 u = (q_src - lat.origin) / lat.h;
  const int i = static_cast<int>(std::lround(u.x()));
  const int j = static_cast<int>(std::lround(u.y()));
  if (i < 0 || j < 0 || i >= lat.nx || j >= lat.ny || (lat.node(i, j) - q_src).norm() > 1e-9 * std::max(1.0, lat.h))
    throw ValidationError("source is not on a lattice node");
  if (!lat.mask[lat.index(i, j)]) throw ValidationError("source node is masked");
  std::vector<cplx> init(lat.size(), 0.0);
  init[lat.index(i, j)] = 1.0 / (lat.h * lat.h);
  return propagate_field(lat, pc, std::move(init));
}

std::complex<double> LatticeField::sample(const Vec2& q) const {
  constexpr int a = 3;
  const Vec2 u = (q - lattice.origin) / lattice.h;
  const int i0 = static_cast<int>(std::floor(u.x()));
  const int j0 = static_cast<int>(std::floor(u.y()));
  cplx acc = 0.0;
  for (int j = j0 - a + 1; j <= j0 + a; ++j) {
    if (j < 0 || j >= lattice.ny) continue;
    const double wy = lanczos(u.y() - j, a);
    if (wy == 0.0) continue;
    for (int i = i0 - a + 1; i <= i0 + a; ++i) {
      if (i < 0 || i >= lattice.nx) continue;
      const double wx = lanczos(u.x() - i, a);
      if (wx != 0.0) acc += wx * wy * at(i, j);
    }
  }
  return acc;
}

IntensityProfile oracle_intensity(const LatticeField& field, const Screen& screen) {
  IntensityProfile p;
  for (int i = 0; i < screen.n_bins; ++i) {
    p.coordinate.push_back(screen.coordinate(i));
    p.intensity.push_back(std::norm(field.sample(screen.bin_center(i))));
    p.n_paths.push_back(0);
    p.shadow.push_back(false);
  }
  normalize_peak(p);
  return p;
}

std::vector<double> local_maxima(const std::vector<double>& y, int first, int last, double floor) {
  std::vector<double> out;
  double top = 0.0;
  for (int i = first; i < last; ++i) top = std::max(top, y[i]);
  for (int i = first + 1; i + 1 < last; ++i) {
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1]) || y[i] < floor * top) continue;
    const double den = y[i - 1] - 2.0 * y[i] + y[i + 1];
    const double d = den != 0.0 ? 0.5 * (y[i - 1] - y[i + 1]) / den : 0.0;
    out.push_back(i + std::clamp(d, -0.5, 0.5));
  }
  return out;
}

std::vector<double> local_minima(const std::vector<double>& y, int first, int last) {
  std::vector<double> neg(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) neg[i] = -y[i];
  std::vector<double> out;
  for (int i = first + 1; i + 1 < last; ++i) {
    if (!(neg[i] > neg[i - 1] && neg[i] >= neg[i + 1])) continue;
    const double den = neg[i - 1] - 2.0 * neg[i] + neg[i + 1];
    const double d = den != 0.0 ? 0.5 * (neg[i - 1] - neg[i + 1]) / den : 0.0;
    out.push_back(i + std::clamp(d, -0.5, 0.5));
  }
  return out;
}

namespace {

std::vector<double> nearest_offsets(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out;
  for (double x : a) {
    double best = std::numeric_limits<double>::infinity();
    for (double y : b) best = std::min(best, std::abs(x - y));
    out.push_back(best);
  }
  return out;
}

}  // namespace

SimilarityReport compare_profiles(const IntensityProfile& a, const IntensityProfile& b, int first_bin, int last_bin) {
  if (a.size() != b.size()) throw std::invalid_argument("compare_profiles: bin counts differ");
  const int n = static_cast<int>(a.size());
  if (last_bin < 0 || last_bin > n) last_bin = n;
  first_bin = std::clamp(first_bin, 0, last_bin);
  SimilarityReport r;
  r.first_bin = first_bin;
  r.last_bin = last_bin;
  const int m = last_bin - first_bin;
  if (m <= 0) return r;

  double ma = 0.0, mb = 0.0;
  for (int i = first_bin; i < last_bin; ++i) {
    ma += a.intensity[i];
    mb += b.intensity[i];
  }
  ma /= m;
  mb /= m;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (int i = first_bin; i < last_bin; ++i) {
    const double da = a.intensity[i] - ma;
    const double db = b.intensity[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
    r.max_abs_deviation = std::max(r.max_abs_deviation, std::abs(a.intensity[i] - b.intensity[i]));
  }
  r.correlation = (saa > 0.0 && sbb > 0.0) ? sab / std::sqrt(saa * sbb) : (saa == sbb ? 1.0 : 0.0);

  r.maxima_a = local_maxima(a.intensity, first_bin, last_bin);
  r.maxima_b = local_maxima(b.intensity, first_bin, last_bin);
  r.minima_a = local_minima(a.intensity, first_bin, last_bin);
  r.minima_b = local_minima(b.intensity, first_bin, last_bin);
  r.maxima_offsets = nearest_offsets(r.maxima_a, r.maxima_b);
  r.minima_offsets = nearest_offsets(r.minima_a, r.minima_b);
  for (double d : r.maxima_offsets) r.max_maxima_offset = std::max(r.max_maxima_offset, d);
  return r;
}

std::pair<int, int> central_fringe_window(const IntensityProfile& p, int n_fringes) {
  const int n = static_cast<int>(p.size());
  const auto maxima = local_maxima(p.intensity, 0, n);
  if (maxima.empty()) return {0, n};
  const auto minima = local_minima(p.intensity, 0, n);
  auto coord = [&](double x) {
    const int i = std::clamp(static_cast<int>(std::lround(x)), 0, n - 1);
    return std::abs(p.coordinate[i]);
  };
  int c = 0;
  for (int k = 1; k < static_cast<int>(maxima.size()); ++k) {
    if (coord(maxima[k]) < coord(maxima[c])) c = k;
  }
  const int half = n_fringes / 2;
  const int lo_k = std::max(0, c - half);
  const int hi_k = std::min(static_cast<int>(maxima.size()) - 1, c + (n_fringes - 1 - half));
  double lo = 0.0, hi = n - 1;
  for (double x : minima) {
    if (x < maxima[lo_k]) lo = x;
    if (x > maxima[hi_k]) {
      hi = x;
      break;
    }
  }
  return {std::max(0, static_cast<int>(std::floor(lo))), std::min(n, static_cast<int>(std::ceil(hi)) + 1)};
}

double Composition1D::max_error() const {
  double e = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) e = std::max(e, std::abs(composed[i] - exact[i]));
  return e;
}

Composition1D compose_free_kernels_1d(const PhysicalConstants& pc, double dt, double h_over_sigma,
                                      const std::vector<double>& targets, double radius, double cutoff,
                                      double taper) {
  const double sigma = std::sqrt(pc.hbar * dt / pc.mass);
  Composition1D out;
  out.h = h_over_sigma * sigma;
  out.targets = targets;
  const double origin = 0.0;
  for (double q : targets) {
    const long lo = static_cast<long>(std::ceil((q - radius * sigma) / out.h));
    const long hi = static_cast<long>(std::floor((q + radius * sigma) / out.h));
    cplx acc = 0.0;
    for (long j = lo; j <= hi; ++j) {
      const double x = j * out.h;
      const double w = 0.5 * std::erfc((std::abs(q - x) - cutoff * sigma) / (taper * sigma));
      const double a[1] = {origin}, b[1] = {x}, c[1] = {q};
      acc += free_kernel(pc, a, b, dt) * free_kernel(pc, b, c, dt) * w;
    }
    out.composed.push_back(acc * out.h);
    const double a[1] = {origin}, c[1] = {q};
    out.exact.push_back(free_kernel(pc, a, c, 2.0 * dt));
  }
  return out;
}

}  // namespace polyprop
