#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "carlab/errors.hpp"

namespace carlab {

// Tagged (t, value) samples for decay/growth diagnostics.  Metadata carries
// the run parameters (N, lambda, beta, window_end, seed, config hash, ...)
// as strings so records can be serialized without schema churn.
struct TimeSeriesRecord {
  std::string quantity;
  std::vector<std::pair<double, std::complex<double>>> samples;
  std::map<std::string, std::string> metadata;

  void push(double t, std::complex<double> v) {
    if (!samples.empty() && !(t > samples.back().first)) {
      throw DomainError("TimeSeriesRecord: sample times must be strictly increasing");
    }
    if (!std::isfinite(t) || !std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw DomainError("TimeSeriesRecord: non-finite sample");
    }
    samples.emplace_back(t, v);
  }

  double window_end() const {
    auto it = metadata.find("window_end");
    return it == metadata.end() ? 0.0 : std::stod(it->second);
  }
};

}  // namespace carlab
