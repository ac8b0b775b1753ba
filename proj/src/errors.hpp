#pragma once

#include <stdexcept>
#include <string>

namespace opp {

// Bad caller-supplied values (unknown vertex, size mismatch, ...).
struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// More demand than room (every slot taken, more cars than vacancies).
struct capacity_error : input_error {
  using input_error::input_error;
};

// Bad scenario / configuration fields.
struct config_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed scenario or instance text.
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File system problems.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Well-formed input the implementation deliberately does not handle
// (e.g. a parking instance whose occupied region touches an end slot).
struct unsupported_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A checked internal invariant failed; always a bug, never user input.
struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace opp
