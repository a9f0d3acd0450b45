#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xyzbethe/bae_solver.hpp"
#include "xyzbethe/errors.hpp"
#include "xyzbethe/homotopy.hpp"
#include "xyzbethe/lattice_model.hpp"
#include "xyzbethe/tq_verify.hpp"
#include "xyzbethe/xxz_limit.hpp"

// JSON keeps every double at round-trip precision; CSV is for people and
// prints "a+bi" with a fixed number of decimals.
namespace xyzbethe::io {

class FormatError : public Error {
 public:
  using Error::Error;
};

std::string format_complex(cplx z, int decimals = 4);

std::string solutions_to_json(std::span<const BetheSolution> solutions);
// Throws FormatError.
std::vector<BetheSolution> solutions_from_json(std::string_view text);
// lambda_1..lambda_M, beta, E. Singular rows list the bound pair first.
std::string solutions_to_csv(std::span<const BetheSolution> solutions);

std::string spectrum_to_json(std::span<const SpectrumEntry> spectrum);
std::vector<SpectrumEntry> spectrum_from_json(std::string_view text);
std::string spectrum_to_csv(std::span<const SpectrumEntry> spectrum);

std::string match_report_to_json(const MatchReport& report);

std::string xxz_solutions_to_json(std::span<const XXZSolution> solutions);
std::vector<XXZSolution> xxz_solutions_from_json(std::string_view text);
// Finite roots then the phantom labels ("+inf+0.7854i"), beta, E.
std::string xxz_solutions_to_csv(std::span<const XXZSolution> solutions, int num_roots);

std::string correspondence_to_json(const CorrespondenceReport& report);
// One row per accepted step of every path.
std::string path_log_csv(const CorrespondenceReport& report);
// Static picture of the root trajectories in the complex plane.
std::string trajectory_svg(const CorrespondenceReport& report, int width = 720, int height = 540);

// True when the text is a JSON array whose first object carries XXZ fields.
bool looks_like_xxz(std::string_view text);

}  // namespace xyzbethe::io
