#pragma once

#include <string>

#include "qinsch/stepper.hpp"

namespace qinsch {

/// Checkpoint bytes: one text header line
///   QINSCH1 dim=<d> n=<n1,..> length=<L> t=<t> alpha=<a> fields=phi,u1..ud,p0,mu_p0 mu_bar=<m>
/// followed by the payload: row-major 64-bit little-endian floats, fields in
/// the declared order, (d+3) * points * 8 bytes.
struct Checkpoint {
    MixtureState state;
    double alpha = 0.0;
};

std::string write_checkpoint(const MixtureState& state, double alpha);
Checkpoint read_checkpoint(const std::string& bytes);

void save_checkpoint(const std::string& path, const MixtureState& state, double alpha);
Checkpoint load_checkpoint(const std::string& path);

} // namespace qinsch
