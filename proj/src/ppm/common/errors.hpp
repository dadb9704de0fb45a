// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef PPM_COMMON_ERRORS_HPP
#define PPM_COMMON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ppm {

// Base class for all toolkit errors so callers can catch one type.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

class ConfigError : public Error {
public:
  using Error::Error;
};

// Simulation reached a state outside the model's validity region
// (negative DC-link voltage or rotor speed).
class NonPhysicalState : public Error {
public:
  using Error::Error;
};

class NoConvergence : public Error {
public:
  using Error::Error;
};

// Requested setpoints violate the modulation limit at the solution.
class InfeasibleSetpoint : public Error {
public:
  using Error::Error;
};

class NotAnEquilibrium : public Error {
public:
  using Error::Error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

// No stabilizing static feedback exists for the synthesis model.
class Infeasible : public Error {
public:
  using Error::Error;
};

class SolverFailure : public Error {
public:
  using Error::Error;
};

class UnstableSystem : public Error {
public:
  using Error::Error;
};

class DegenerateCurve : public Error {
public:
  using Error::Error;
};

class NoDeloadSolution : public Error {
public:
  using Error::Error;
};

class InsufficientSamples : public Error {
public:
  using Error::Error;
};

class EventOutOfRange : public Error {
public:
  using Error::Error;
};

class MissingChannel : public Error {
public:
  using Error::Error;
};

} // namespace ppm

#endif
