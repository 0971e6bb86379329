#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "msfq/params.hpp"

namespace msfq::sweep {

// One figure-regeneration request. Grids and per-panel fixed values follow
// the published plots; base supplies the physical parameters.
struct SweepSpec {
  std::string figure = "all";  // fig1 | fig2 | figA1 | figC1 | all
  std::filesystem::path out_dir = ".";
  params::SensorConfig base;
  double epsilon = 0.1;  // RWA validity threshold
  int threads = 1;
};

std::vector<std::filesystem::path> fig1_data(const SweepSpec& spec);
std::vector<std::filesystem::path> fig2_data(const SweepSpec& spec);
std::vector<std::filesystem::path> figA1_data(const SweepSpec& spec);
std::vector<std::filesystem::path> figC1_data(const SweepSpec& spec);

// Dispatch on spec.figure; returns every file written.
std::vector<std::filesystem::path> run(const SweepSpec& spec);

// Time-series exports used by the CLI front end.
void write_coherent_series(const std::filesystem::path& file,
                           const params::DerivedParams& p, double t_max,
                           int points);
void write_bloch_series(const std::filesystem::path& file,
                        const params::DerivedParams& p, double t_max,
                        int points);

}  // namespace msfq::sweep
