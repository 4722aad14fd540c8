#pragma once

// JSON form of truncated series:
//   {"M": 4, "coeffs": [{"n": 1, "c": [1, 0]}, {"n": 2, "c": [0.1, 0]}]}
// Missing indices are zero.  A bare array [[re, im], ...] is read as the
// coefficients of z^2, z^3, ...

#include "json.hpp"

#include "siegel/germs.hpp"

namespace siegel {

template <class T>
nlohmann::ordered_json series_to_json(const Series<T>& s);

// `default_linear` fills c_1 when the input does not give it.
template <class T>
Series<T> series_from_json(const nlohmann::json& j, std::complex<T> default_linear = {});

}  // namespace siegel
