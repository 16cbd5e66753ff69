// errors.hpp
// Exception taxonomy shared by all dlab modules. The CLI maps these onto
// exit codes: data problems -> 3, numeric/model problems -> 4.

#pragma once

#include <stdexcept>
#include <string>

namespace dlab {

class DlabError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input text (bad number, bad date, bad payload shape).
class ParseError : public DlabError {
public:
    using DlabError::DlabError;
};

// Well-formed input that violates a documented invariant.
class ValidationError : public DlabError {
public:
    using DlabError::DlabError;
};

// Numerical kernel failure (rank deficiency, domain errors).
class NumericError : public DlabError {
public:
    using DlabError::DlabError;
};

// Statistical model precondition failure (single-class target, n <= p, ...).
class ModelError : public DlabError {
public:
    using DlabError::DlabError;
};

// HTTP-level failure talking to the data provider.
class TransportError : public DlabError {
public:
    using DlabError::DlabError;
};

// Provider answered but with an error/notice body instead of data.
class ProviderError : public DlabError {
public:
    using DlabError::DlabError;
};

} // namespace dlab
