#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "fpsvqe/config.h"
#include "fpsvqe/driver.h"

namespace fpsvqe {

/// JSON documents are returned pretty-printed; CSV goes straight to a stream.

std::string reference_json(const Problem &problem, size_t levels);
std::string resources_json(const ResourceReport &report);
std::string vqe_json(const VqeRun &run, const Problem &problem);

std::string ensemble_json(const EnsembleResult &result, const ExperimentConfig &config);
void write_ensemble_csv(std::ostream &out, const EnsembleResult &result);

std::string barrier_scan_json(std::span<const BarrierScanRow> rows);
void write_barrier_scan_csv(std::ostream &out, std::span<const BarrierScanRow> rows);

std::string qubit_scan_json(std::span<const QubitScanRow> rows);
void write_qubit_scan_csv(std::ostream &out, std::span<const QubitScanRow> rows);

std::string hierarchical_json(std::span<const HierarchicalRung> rungs);
void write_hierarchical_csv(std::ostream &out, std::span<const HierarchicalRung> rungs);

std::string distribution_json(const DistributionStudy &study);
/// One row per estimate: mode, repetition, value.
void write_distribution_csv(std::ostream &out, const DistributionStudy &study);

}  // namespace fpsvqe
