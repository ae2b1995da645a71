#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace latticekit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class BackendMismatch : public Error {
 public:
  using Error::Error;
};

/// Raised by order operations (sup, inf, positivity) on complex elements.
class OrderUndefined : public Error {
 public:
  OrderUndefined() : Error("order undefined on complex elements") {}
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// An exhaustive evaluation would need more work than the configured cap.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::size_t required, std::size_t cap)
      : Error("budget exceeded: " + std::to_string(required) +
              " grid tuples required, cap is " + std::to_string(cap)),
        required_(required),
        cap_(cap) {}

  std::size_t required() const noexcept { return required_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t required_;
  std::size_t cap_;
};

class GeneratorCapExceeded : public Error {
 public:
  GeneratorCapExceeded(std::size_t count, std::size_t cap)
      : Error("generator blow-up: " + std::to_string(count) +
              " generators exceed cap " + std::to_string(cap)),
        count_(count),
        cap_(cap) {}

  std::size_t count() const noexcept { return count_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t count_;
  std::size_t cap_;
};

}  // namespace latticekit
