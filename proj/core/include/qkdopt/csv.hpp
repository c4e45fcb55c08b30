#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "qkdopt/link_apps.hpp"
#include "qkdopt/optimizer.hpp"

namespace qkdopt {

/// Malformed CSV input; message names the offending row and column.
class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Headers are fixed per format:
//   pass profile:     t_s,loss_db,background_cps
//   detector catalog: name,wavelength_nm,time_resolution_ps,efficiency,dark_cps
//   sweep:            eta,d,eps_star,p_tf_star,skr_per_window,mu,feasible

std::vector<PassSample> read_pass_profile_csv(const std::string& path);
std::vector<DetectorCatalogEntry> read_detector_catalog_csv(const std::string& path);
std::vector<SweepRow> read_sweep_csv(const std::string& path);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

}  // namespace qkdopt
