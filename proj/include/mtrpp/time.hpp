/**
 * @file time.hpp
 * @brief Exact time arithmetic.
 *
 * All times, running times and costs are exact rationals in minutes so that
 * boundary comparisons against unavailability windows never drift. Floating
 * point only appears inside the MILP solver.
 */
#pragma once

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace mtrpp {

using Time = boost::rational<std::int64_t>;

/// Decimal inputs are resolved to this many ticks per minute.
inline constexpr std::int64_t kTicksPerMinute = 1'000'000;

/// Nearest multiple of 1e-6 minute.
Time time_from_double(double minutes);

double to_double(const Time& t);

/// "p" or "p/q".
std::string to_exact_string(const Time& t);

/// Largest integer not above t.
std::int64_t floor_int(const Time& t);

/// Whether t is an integer multiple of step (step > 0).
bool is_multiple_of(const Time& t, const Time& step);

}  // namespace mtrpp
