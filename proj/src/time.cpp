#include "mtrpp/time.hpp"

#include <cmath>
#include <stdexcept>

namespace mtrpp {

Time time_from_double(double minutes) {
  if (!std::isfinite(minutes)) throw std::invalid_argument("non-finite time value");
  const double scaled = minutes * static_cast<double>(kTicksPerMinute);
  if (std::fabs(scaled) > 9.0e18) throw std::invalid_argument("time value out of range");
  return Time(std::llround(scaled), kTicksPerMinute);
}

double to_double(const Time& t) {
  return static_cast<double>(t.numerator()) / static_cast<double>(t.denominator());
}

std::string to_exact_string(const Time& t) {
  if (t.denominator() == 1) return std::to_string(t.numerator());
  return std::to_string(t.numerator()) + "/" + std::to_string(t.denominator());
}

std::int64_t floor_int(const Time& t) {
  std::int64_t q = t.numerator() / t.denominator();
  if (t.numerator() % t.denominator() != 0 && t.numerator() < 0) --q;
  return q;
}

bool is_multiple_of(const Time& t, const Time& step) {
  const Time q = t / step;
  return q.denominator() == 1;
}

}  // namespace mtrpp
