#ifndef LCED_ERRORS_HPP
#define LCED_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace lced {

/// Raised for malformed or inconsistent case input. Carries the file and
/// line the problem was detected on so CLI users can fix their data.
class DataError : public std::runtime_error {
public:
    DataError(std::string file, int line, const std::string& what)
        : std::runtime_error(file.empty() ? what
                                          : file + (line > 0 ? ":" + std::to_string(line) : "") +
                                                ": " + what),
          file_(std::move(file)),
          line_(line) {}

    explicit DataError(const std::string& what) : DataError("", 0, what) {}

    const std::string& file() const { return file_; }
    int line() const { return line_; }

private:
    std::string file_;
    int line_;
};

/// One or more dispatch periods have no feasible operating point.
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(std::vector<int> periods)
        : std::runtime_error(describe(periods)), periods_(std::move(periods)) {}

    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}

    const std::vector<int>& periods() const { return periods_; }

private:
    static std::string describe(const std::vector<int>& periods) {
        std::string s = "infeasible period(s):";
        for (int t : periods) s += " " + std::to_string(t);
        return s;
    }

    std::vector<int> periods_;
};

/// Solver breakdown (singular basis past refactorization, iteration blowup).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lced

#endif
