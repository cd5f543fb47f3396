#pragma once

// Text output: round-trip float formatting, CSV tables, PGM heatmaps, and
// range/digest helpers for the command-line tool.

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hrtlab/flow.hpp"
#include "hrtlab/operators.hpp"
#include "hrtlab/torus.hpp"
#include "hrtlab/zak.hpp"

namespace hrtlab {

/// 17 significant digits ("%.17g").
std::string format_double(double v);

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);
void write_zak_csv(std::ostream& out, const ZakImage& z);
void write_ledger_csv(std::ostream& out, const OrbitProductLedger& ledger);
void write_line_csv(std::ostream& out, const ToralLine& line);
void write_trace_csv(std::ostream& out, const ProductTrace& trace);

/// Plain (P2) PGM with maxval 65535; values are scaled linearly from
/// [min, max] of the data, row-major, `width` values per row.
void write_pgm(std::ostream& out, std::span<const double> values, std::size_t width);

/// "start:stop:step": start, start + step, ... up to stop inclusive when hit
/// (within 1e-9 steps). A bare number is a one-element range.
std::vector<double> parse_range(std::string_view text);

/// FNV-1a 64-bit hash of the bytes, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace hrtlab
