#include "siegel/series_io.hpp"

#include <cmath>

#include "siegel/errors.hpp"

namespace siegel {

namespace {

template <class T>
std::complex<T> read_coeff(const nlohmann::json& c) {
  if (c.is_number()) return {c.get<T>(), T(0)};
  if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
    return {c[0].get<T>(), c[1].get<T>()};
  }
  throw Error(ErrorKind::InvalidInput, "series coefficient must be [re, im] or a number");
}

}  // namespace

template <class T>
nlohmann::ordered_json series_to_json(const Series<T>& s) {
  nlohmann::ordered_json coeffs = nlohmann::ordered_json::array();
  for (int n = 0; n <= s.order(); ++n) {
    if (n == 0 && s[0] == std::complex<T>{}) continue;
    coeffs.push_back({{"n", n},
                      {"c", {static_cast<double>(s[n].real()), static_cast<double>(s[n].imag())}}});
  }
  return {{"M", s.order()}, {"coeffs", std::move(coeffs)}};
}

template <class T>
Series<T> series_from_json(const nlohmann::json& j, std::complex<T> default_linear) {
  if (j.is_array()) {
    Series<T> s(static_cast<int>(j.size()) + 1);
    s[1] = default_linear;
    for (std::size_t i = 0; i < j.size(); ++i) s[static_cast<int>(i) + 2] = read_coeff<T>(j[i]);
    return s;
  }
  if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_array()) {
    throw Error(ErrorKind::InvalidInput, "series JSON needs a \"coeffs\" array");
  }
  int order = 1;
  for (const auto& e : j["coeffs"]) {
    if (!e.is_object() || !e.contains("n") || !e["n"].is_number_integer() || !e.contains("c")) {
      throw Error(ErrorKind::InvalidInput, "series entries are {\"n\": k, \"c\": [re, im]}");
    }
    int n = e["n"].get<int>();
    if (n < 0 || n > kMaxSeriesOrder) throw Error(ErrorKind::InvalidInput, "series index out of range");
    order = std::max(order, n);
  }
  if (j.contains("M")) {
    if (!j["M"].is_number_integer()) throw Error(ErrorKind::InvalidInput, "\"M\" must be an integer");
    int m = j["M"].get<int>();
    if (m < 1 || m > kMaxSeriesOrder) throw Error(ErrorKind::InvalidInput, "\"M\" out of range");
    if (m < order) throw Error(ErrorKind::InvalidInput, "series has coefficients above \"M\"");
    order = m;
  }
  Series<T> s(order);
  s[1] = default_linear;
  for (const auto& e : j["coeffs"]) s[e["n"].get<int>()] = read_coeff<T>(e["c"]);
  return s;
}

template nlohmann::ordered_json series_to_json(const Series<double>&);
template nlohmann::ordered_json series_to_json(const Series<long double>&);
template Series<double> series_from_json(const nlohmann::json&, std::complex<double>);
template Series<long double> series_from_json(const nlohmann::json&, std::complex<long double>);

}  // namespace siegel
