#pragma once

#include <stdexcept>
#include <string>

namespace dbk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An input violates a stated hypothesis or precondition (bad grid spacing,
/// a map that vanishes where it must be bounded below, data that is not
/// closed, ...). The CLI maps these to exit code 2.
class HypothesisError : public Error {
public:
  HypothesisError(std::string certificate, const std::string& what)
      : Error(certificate + ": " + what), certificate_(std::move(certificate)) {}

  const std::string& certificate() const noexcept { return certificate_; }

private:
  std::string certificate_;
};

/// A numerical certificate that should hold by construction failed. The CLI
/// maps these to exit code 1.
class CertificateError : public Error {
public:
  CertificateError(std::string certificate, const std::string& what)
      : Error(certificate + ": " + what), certificate_(std::move(certificate)) {}

  const std::string& certificate() const noexcept { return certificate_; }

private:
  std::string certificate_;
};

/// Two objects that must live on the same grid (or share ambient
/// dimensions) do not.
class DomainMismatch : public Error {
public:
  using Error::Error;
};

}  // namespace dbk
