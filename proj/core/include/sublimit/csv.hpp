#ifndef SUBLIMIT_CSV_HPP
#define SUBLIMIT_CSV_HPP

// Text formats for signals and spectra: header `t,re,im` (or `w,re,im`),
// one row per sample, 17 significant digits.

#include <iosfwd>
#include <string>

#include "sublimit/signal.hpp"

namespace sublimit {

void write_signal_csv(std::ostream& out, const SampledSignal& s);
void write_spectrum_csv(std::ostream& out, const Spectrum& s);

/// Reads a `t,re,im` table. Rows must lie on a uniform grid with an even
/// number of samples; throws PreconditionError otherwise.
SampledSignal read_signal_csv(std::istream& in);
/// Reads a `w,re,im` table written by write_spectrum_csv. The time origin of
/// the dual grid is not stored in the file and must be supplied.
Spectrum read_spectrum_csv(std::istream& in, double t_start);

/// Formats a double with 17 significant digits, locale-independent.
std::string format_number(double value);

}  // namespace sublimit

#endif  // SUBLIMIT_CSV_HPP
