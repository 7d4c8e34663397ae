#pragma once

#include <cstdint>
#include <string>

namespace crl::synth {

// Deterministic stand-in for the public credit-risk loan CSV: same 12-column
// schema, realistic marginals, missing values confined to person_emp_length
// and loan_int_rate, and feature-target correlations tuned to the published
// profile of the real file. Useful for demos and for running the test suite
// where the Kaggle download is not available.
void write_synthetic_csv(const std::string& path, std::size_t rows, std::uint64_t seed);

inline constexpr std::size_t kReferenceRows = 32581;
inline constexpr std::uint64_t kReferenceSeed = 20240614;

} // namespace crl::synth
