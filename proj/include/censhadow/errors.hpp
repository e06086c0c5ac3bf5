/*
 * errors.hpp — exception hierarchy for the censhadow library.
 *
 * Every failure mode of the library maps to one of the types below, all
 * derived from censhadow::Error. The CLI translates them to exit code 2
 * (invalid input) while internal bound violations surface as uncertified
 * results rather than exceptions.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace censhadow {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or out-of-domain caller input (non-finite values, dimension
// mismatches, inadmissible parameters).
class InvalidInput : public Error {
public:
    using Error::Error;
};

// A system description that cannot be instantiated (non-unimodular matrix,
// non-Anosov base, ...).
class InvalidSystem : public Error {
public:
    using Error::Error;
};

// The matrix is a toral diffeomorphism but admits no invariant splitting
// with the required rates in the flat metric.
class NotPartiallyHyperbolic : public InvalidSystem {
public:
    using InvalidSystem::InvalidSystem;
};

// A chart operation was requested beyond the injectivity radius (0.5 on
// the flat torus) or beyond the locality radius delta0.
class ChartDomainExceeded : public Error {
public:
    using Error::Error;
};

// A point claimed to lie on a leaf misses it by more than the leaf
// tolerance; the message carries the transversal residual.
class NotOnLeaf : public Error {
public:
    using Error::Error;
};

// Two points handed to a local leaf-intersection solver are farther apart
// than the admissible radius.
class TooFarApart : public Error {
public:
    using Error::Error;
};

// The splitting frame is numerically rank-deficient (condition number
// beyond the cap).
class DegenerateFrame : public Error {
public:
    using Error::Error;
};

// No slack parameter mu satisfies the constants-engine inequalities; the
// contraction rate lambda is too small at the current power.
class ConstantsInfeasible : public Error {
public:
    using Error::Error;
};

// An internal |z| <= L d bound failed during a correction pass. This is a
// consistency failure of the construction, not a user error.
class Lemma1Violation : public Error {
public:
    using Error::Error;
};

// The pseudotrajectory step d exceeds the admissible d0 for the derived
// constants. Carries the computed d0 so callers can report it.
class StepTooLarge : public Error {
public:
    StepTooLarge(const std::string& msg, double admissible_d0)
        : Error(msg), d0(admissible_d0) {}
    double d0;
};

}  // namespace censhadow
