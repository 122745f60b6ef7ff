#pragma once

#include <stdexcept>
#include <string>

namespace qmit
{

// Error classes map onto CLI exit codes (see tools/qmit_main.cpp):
// ConfigError -> 2, data-side errors -> 3, TrainingDivergence -> 4.

class ArgumentError : public std::invalid_argument
{
public:
	using std::invalid_argument::invalid_argument;
};

class StateError : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

class ContractError : public std::logic_error
{
public:
	using std::logic_error::logic_error;
};

class CapabilityError : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

class AlignmentError : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

class DegeneratePostSelection : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error
{
public:
	ParseError(const std::string& path, std::size_t line, const std::string& what)
	    : std::runtime_error(path + ":" + std::to_string(line) + ": " + what), line_{line}
	{
	}

	[[nodiscard]] std::size_t line() const { return line_; }

private:
	std::size_t line_;
};

class ConfigError : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

class TrainingDivergence : public std::runtime_error
{
public:
	TrainingDivergence(std::size_t epoch, const std::string& what)
	    : std::runtime_error(what + " at epoch " + std::to_string(epoch)), epoch_{epoch}
	{
	}

	[[nodiscard]] std::size_t epoch() const { return epoch_; }

private:
	std::size_t epoch_;
};

} // namespace qmit
