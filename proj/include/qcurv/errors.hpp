#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qcurv {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class DivisionByZero : public Error {
public:
    DivisionByZero() : Error("division by zero") {}
    explicit DivisionByZero(const std::string& what) : Error(what) {}
};

// A rational function does not reduce at a place; witness names the vanishing denominator.
class BadReduction : public Error {
public:
    BadReduction(long place_index, std::string witness)
        : Error("bad reduction at place n=" + std::to_string(place_index) + ": denominator " + witness +
                " vanishes"),
          place_(place_index), witness_(std::move(witness)) {}
    long place() const noexcept { return place_; }
    const std::string& witness() const noexcept { return witness_; }

private:
    long place_;
    std::string witness_;
};

class SingularMatrix : public Error {
public:
    SingularMatrix() : Error("matrix is singular") {}
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class BadPlace : public Error {
public:
    using Error::Error;
};

class NoGoodPlaces : public Error {
public:
    using Error::Error;
};

class FactorizationOutOfRange : public Error {
public:
    using Error::Error;
};

class NotSpecializable : public Error {
public:
    using Error::Error;
};

class BadSpecialization : public Error {
public:
    using Error::Error;
};

class Resonant : public Error {
public:
    Resonant(int k, int l, int m)
        : Error("resonant exponents: q^" + std::to_string(k) + "*c_" + std::to_string(m) + " = c_" +
                std::to_string(l)),
          k_(k), l_(l), m_(m) {}
    int k() const noexcept { return k_; }
    int l() const noexcept { return l_; }
    int m() const noexcept { return m_; }

private:
    int k_, l_, m_;
};

class NotRegularSingular : public Error {
public:
    using Error::Error;
};

class NearZero : public Error {
public:
    using Error::Error;
};

class TruncationDominates : public Error {
public:
    using Error::Error;
};

}  // namespace qcurv
