#pragma once

#include <stdexcept>
#include <string>

namespace bergm {

/// Bad input: malformed files, unknown labels, invalid arguments.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical procedure could not produce a meaningful answer.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Design matrix of change statistics is not of full column rank.
class RankDeficiencyError : public NumericalError {
public:
    RankDeficiencyError(const std::string& what, std::string term)
        : NumericalError(what), term_(std::move(term)) {}
    const std::string& term() const noexcept { return term_; }

private:
    std::string term_;
};

/// A term perfectly predicts tie presence; its estimate diverges.
class SeparationError : public NumericalError {
public:
    SeparationError(const std::string& what, std::string term)
        : NumericalError(what), term_(std::move(term)) {}
    const std::string& term() const noexcept { return term_; }

private:
    std::string term_;
};

/// The observed statistic sits on the boundary of the attainable set.
class MleNonexistenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SingularCovarianceError : public NumericalError {
public:
    SingularCovarianceError(const std::string& what, std::string statistic)
        : NumericalError(what), statistic_(std::move(statistic)) {}
    const std::string& statistic() const noexcept { return statistic_; }

private:
    std::string statistic_;
};

/// Incrementally tracked state disagrees with a full recomputation.
class InternalConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace bergm
