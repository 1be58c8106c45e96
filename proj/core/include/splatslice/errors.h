// Copyright 2026 The splatslice Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace splatslice {

// Root of every exception thrown by the library. Callers that only need to
// report a failure can catch this; the subclasses carry structured context.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

// A caller broke a documented precondition (e.g. unsorted compositor input).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// --- ingestion ---

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& property)
      : Error("missing required property '" + property + "'"),
        property_(property) {}
  SchemaError(const std::string& property, const std::string& what)
      : Error(what), property_(property) {}
  const std::string& property() const { return property_; }

 private:
  std::string property_;
};

class DataError : public Error {
 public:
  DataError(std::size_t vertex, const std::string& what)
      : Error("vertex " + std::to_string(vertex) + ": " + what),
        vertex_(vertex) {}
  std::size_t vertex() const { return vertex_; }

 private:
  std::size_t vertex_;
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class ManifestError : public Error {
 public:
  using Error::Error;
};

// --- compilation and the binary asset format ---

class CompileError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class LengthError : public FormatError {
 public:
  LengthError(std::size_t expected, std::size_t actual)
      : FormatError("truncated asset: expected at least " +
                    std::to_string(expected) + " bytes, got " +
                    std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}
  std::size_t expected() const { return expected_; }
  std::size_t actual() const { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

class IntegrityError : public FormatError {
 public:
  using FormatError::FormatError;
};

}  // namespace splatslice
