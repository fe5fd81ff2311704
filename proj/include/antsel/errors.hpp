// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>

namespace antsel {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Random placement could not satisfy the obstacle/bounds constraints.
class PlacementError : public Error {
 public:
  using Error::Error;
};

// Coincident points produce a zero-length propagation path.
class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

class NormalizationError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

// Non-finite or otherwise malformed numeric input.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

// Malformed files or configuration documents.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace antsel
