#include "eprlab/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace eprlab {
namespace {

// FFTW plans are cached per length; creation is not thread safe, execution
// with the new-array interface is. All execution buffers come from
// fftw_malloc so their alignment matches the planning buffers.
struct PlanEntry {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

PlanEntry plans_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, PlanEntry> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  fftw_complex* a = fftw_alloc_complex(n);
  fftw_complex* b = fftw_alloc_complex(n);
  PlanEntry e;
  e.fwd = fftw_plan_dft_1d(static_cast<int>(n), a, b, FFTW_FORWARD, FFTW_ESTIMATE);
  e.bwd = fftw_plan_dft_1d(static_cast<int>(n), a, b, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_free(a);
  fftw_free(b);
  cache[n] = e;
  return e;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : ptr(fftw_alloc_complex(n)) {
    if (!ptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  Complex& operator[](std::size_t i) { return reinterpret_cast<Complex*>(ptr)[i]; }
  fftw_complex* ptr;
};

inline double parity(std::size_t j) { return (j & 1U) ? -1.0 : 1.0; }

// e^(-i p_k x_min / hbar) for all k; conjugated for the inverse direction.
std::vector<Complex> edge_phases(const Grid1D& g) {
  std::vector<Complex> ph(g.n);
  for (std::size_t k = 0; k < g.n; ++k) {
    const double arg = -g.p(k) * g.x_min / g.hbar;
    ph[k] = Complex{std::cos(arg), std::sin(arg)};
  }
  return ph;
}

// Core 1D kernel operating on a strided slice of `values`.
void transform_slice(const Grid1D& g, Representation target, const Complex* in,
                     std::size_t stride, Complex* out, const PlanEntry& plans,
                     const std::vector<Complex>& phases, FftwBuffer& buf_in,
                     FftwBuffer& buf_out) {
  const std::size_t n = g.n;
  const double root = std::sqrt(2.0 * std::numbers::pi * g.hbar);
  if (target == Representation::Momentum) {
    for (std::size_t j = 0; j < n; ++j) buf_in[j] = in[j * stride] * parity(j);
    fftw_execute_dft(plans.fwd, buf_in.ptr, buf_out.ptr);
    const double scale = g.dx / root;
    for (std::size_t k = 0; k < n; ++k) out[k * stride] = scale * phases[k] * buf_out[k];
  } else {
    for (std::size_t k = 0; k < n; ++k)
      buf_in[k] = in[k * stride] * std::conj(phases[k]);
    fftw_execute_dft(plans.bwd, buf_in.ptr, buf_out.ptr);
    const double scale = g.dp() / root;
    for (std::size_t j = 0; j < n; ++j)
      out[j * stride] = scale * parity(j) * buf_out[j];
  }
}

}  // namespace

Field1D fourier_transform(const Field1D& field, Representation target) {
  if (field.rep == target)
    throw std::invalid_argument(
        "fourier_transform: field is already in the requested representation");
  if (field.values.size() != field.grid.n)
    throw std::invalid_argument("fourier_transform: value count does not match grid");
  const Grid1D& g = field.grid;
  Field1D out;
  out.grid = g;
  out.rep = target;
  out.values.resize(g.n);
  const PlanEntry plans = plans_for(g.n);
  const auto phases = edge_phases(g);
  FftwBuffer bi(g.n), bo(g.n);
  transform_slice(g, target, field.values.data(), 1, out.values.data(), plans, phases,
                  bi, bo);
  return out;
}

Field2D fourier_transform_axis(const Field2D& field, int axis, Representation target) {
  if (axis != 1 && axis != 2)
    throw std::invalid_argument("fourier_transform_axis: axis must be 1 or 2");
  const Representation current = axis == 1 ? field.rep1 : field.rep2;
  if (current == target)
    throw std::invalid_argument(
        "fourier_transform_axis: axis is already in the requested representation");
  const Grid1D& g = axis == 1 ? field.grid1 : field.grid2;
  Field2D out = field;
  (axis == 1 ? out.rep1 : out.rep2) = target;
  const PlanEntry plans = plans_for(g.n);
  const auto phases = edge_phases(g);
  FftwBuffer bi(g.n), bo(g.n);
  const std::size_t n1 = field.grid1.n;
  const std::size_t n2 = field.grid2.n;
  if (axis == 2) {
    for (std::size_t j1 = 0; j1 < n1; ++j1)
      transform_slice(g, target, field.values.data() + j1 * n2, 1,
                      out.values.data() + j1 * n2, plans, phases, bi, bo);
  } else {
    for (std::size_t j2 = 0; j2 < n2; ++j2)
      transform_slice(g, target, field.values.data() + j2, n2, out.values.data() + j2,
                      plans, phases, bi, bo);
  }
  return out;
}

Field2D fourier_transform(const Field2D& field, Representation target) {
  return fourier_transform_axis(fourier_transform_axis(field, 1, target), 2, target);
}

}  // namespace eprlab
