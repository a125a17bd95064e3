#pragma once

#include <stdexcept>
#include <string>

namespace starfield {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

// Wrong symbol kind for the requested operation, e.g. a Wick Hamiltonian
// handed to the Q-function equation of motion.
class ComplementarityError : public Error {
public:
  using Error::Error;
};

class BeyondDiffusion : public Error {
public:
  BeyondDiffusion(int order, const std::string& what)
      : Error(what), order_(order) {}
  int order() const noexcept { return order_; }

private:
  int order_;
};

class NumericalInstability : public Error {
public:
  NumericalInstability(const std::string& what, double time, double dt,
                       double max_rate)
      : Error(what), time_(time), dt_(dt), max_rate_(max_rate) {}
  double time() const noexcept { return time_; }
  double dt() const noexcept { return dt_; }
  double max_rate() const noexcept { return max_rate_; }

private:
  double time_;
  double dt_;
  double max_rate_;
};

class TailBoundError : public Error {
public:
  using Error::Error;
};

}  // namespace starfield
