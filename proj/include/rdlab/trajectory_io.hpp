#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "rdlab/barriers.hpp"
#include "rdlab/pde.hpp"

namespace rdlab {

/// '#'-prefixed key: value lines, then "t,x,u" rows in time-major order.
void write_trajectory_csv(const Trajectory& tr, std::ostream& os,
                          const std::map<std::string, std::string>& meta = {});

/// Little-endian layout: u32 nx, u32 nt, f64 X, f64 T, then nt*nx f64 values row by row
/// (row j holds t_j = T j/(nt-1) on the uniform grid over [-X, X]).
/// Throws DomainError unless the domain is symmetric and the frame times are uniform.
void write_trajectory_binary(const Trajectory& tr, std::ostream& os);
Trajectory read_trajectory_binary(std::istream& is);

/// "x,t,residual" rows of a report that kept its field.
void write_residual_csv(const ResidualReport& rep, std::ostream& os);

}  // namespace rdlab
