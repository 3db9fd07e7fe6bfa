#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "sublimit/error.hpp"

namespace sublimit::detail {
namespace {

struct PlanDeleter {
  void operator()(fftw_plan_s* plan) const { fftw_destroy_plan(plan); }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// fftw_execute_dft on an existing plan is thread-safe; only the planner
// needs the lock.
fftw_plan plan_for(std::size_t n, FftSign sign) {
  static std::mutex mutex;
  static std::map<std::pair<std::size_t, FftSign>, Plan> cache;

  std::lock_guard lock(mutex);
  auto& slot = cache[{n, sign}];
  if (!slot) {
    ComplexVector scratch_in(n), scratch_out(n);
    const int direction = sign == FftSign::kNegative ? FFTW_FORWARD : FFTW_BACKWARD;
    slot.reset(fftw_plan_dft_1d(static_cast<int>(n),
                                reinterpret_cast<fftw_complex*>(scratch_in.data()),
                                reinterpret_cast<fftw_complex*>(scratch_out.data()),
                                direction, FFTW_ESTIMATE | FFTW_UNALIGNED));
    if (!slot) throw Error("fftw planner failed");
  }
  return slot.get();
}

}  // namespace

void dft(std::span<const Complex> in, std::span<Complex> out, FftSign sign) {
  if (in.size() != out.size()) throw ShapeError("dft: input and output lengths differ");
  if (in.empty()) return;
  // FFTW may scribble on the input for out-of-place plans without
  // FFTW_PRESERVE_INPUT; copy so callers keep const semantics.
  ComplexVector buffer(in.begin(), in.end());
  fftw_execute_dft(plan_for(in.size(), sign), reinterpret_cast<fftw_complex*>(buffer.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace sublimit::detail
