#pragma once

#include "superres/config.hpp"
#include "superres/runner.hpp"
#include "superres/table.hpp"

namespace superres {

inline constexpr const char *kToolVersion = SUPERRES_VERSION;

/// Path-length bookkeeping: a phase quantity dphi corresponds to lambda / X
/// with X = 2 pi / dphi.
double wavelength_fraction(double phase_rad);

ResultTable cmd_scan(const RunConfig &config, const ExecutionOptions &exec = {});
ResultTable cmd_sweep(const RunConfig &config, const ExecutionOptions &exec = {});

/// Fits both observables' peak heights. Reads `input` (a sweep table) when
/// given, otherwise runs the sweep described by `config`.
ResultTable cmd_fit_heights(const RunConfig &config, const ExecutionOptions &exec = {},
                            const ResultTable *input = nullptr);

/// Per-point propagated uncertainty plus resolution summary. Reads `input`
/// (a scan table) when given, otherwise runs the scan described by `config`.
ResultTable cmd_analyze(const RunConfig &config, const ExecutionOptions &exec = {},
                        const ResultTable *input = nullptr);

ResultTable run_command(const RunConfig &config, const ExecutionOptions &exec = {},
                        const ResultTable *input = nullptr);

std::string render(const ResultTable &table, OutputFormat format);

}  // namespace superres
