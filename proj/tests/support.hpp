#pragma once

#include <vector>

#include "cuelab/sampling.hpp"
#include "cuelab/spectrum.hpp"
#include "cuelab/zeros.hpp"

namespace cuelab::testing {

inline Spectrum su_spectrum(int n, RngStream& rng) {
  return eigenangles(haar_special_unitary(n, 0.0, rng).matrix);
}

inline CombinationEnsemble random_ensemble(std::vector<double> b, int n, std::uint64_t seed, std::uint64_t k) {
  RngStream rng(seed, k);
  std::vector<Spectrum> spectra;
  for (std::size_t j = 0; j < b.size(); ++j) spectra.push_back(su_spectrum(n, rng));
  return CombinationEnsemble(std::move(b), std::move(spectra));
}

}  // namespace cuelab::testing
