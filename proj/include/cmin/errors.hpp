#pragma once

#include <stdexcept>
#include <string>

namespace cmin
{
//! Base of every error raised by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! Distribution or model parameter outside its admissible range.
class ParameterError : public Error
{
  public:
    using Error::Error;
};

//! Argument outside the domain of an operation (empty input, bad index, ...).
class DomainError : public Error
{
  public:
    using Error::Error;
};

//! A subset-average or slope tie made a supposedly unique object ambiguous.
class TieError : public Error
{
  public:
    using Error::Error;
};

//! Exhaustive computation requested beyond its supported size.
class CapacityError : public Error
{
  public:
    using Error::Error;
};

//! A sampler could not produce a draw (rejection stall, degenerate path).
class SamplingError : public Error
{
  public:
    using Error::Error;
};

//! Operation not available for the requested distribution kind.
class UnsupportedError : public Error
{
  public:
    using Error::Error;
};

namespace detail
{
template<class E>
inline void require(bool cond, const std::string& what)
{
    if (!cond)
        throw E(what);
}
}  // namespace detail
}  // namespace cmin
