#pragma once

#include <string>

#include "ssprof/config.hpp"
#include "ssprof/continuation.hpp"
#include "ssprof/profile.hpp"

namespace ssprof {

// Measured constants of the global bound curves of the existence theorem.
struct EnvelopeReport {
    double c_u = 0.0, c_uprime = 0.0, c_theta = 0.0, c_thetaprime = 0.0;
    double p_lo = 0.0, p_hi = 0.0;  // two-sided density comparability
    bool theta_nonneg = false;
    bool finite = false;
};

EnvelopeReport measure_envelopes(const ProfileTriple& profile, const PhysicalParams& pp,
                                 const BoundaryData& bd);

// Envelope shape values at radius r (unit constant).
double envelope_u(double r, const PhysicalParams& pp, const BoundaryData& bd);
double envelope_uprime(double r, const PhysicalParams& pp, const BoundaryData& bd);
double envelope_theta(double r, const BoundaryData& bd);
double envelope_thetaprime(double r, const BoundaryData& bd);
double density_shape(double r, const PhysicalParams& pp, const BoundaryData& bd);

// Runs the configured command, writes artifacts under the output directory
// (or $SSPROFILE_OUT when set). Returns the process exit status.
int run_pipeline(const RunConfig& cfg);

// Atomic file write: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace ssprof
