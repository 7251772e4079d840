#ifndef WSOPT_COMMON_HPP
#define WSOPT_COMMON_HPP

#include <Eigen/Core>

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace wsopt {

    using Vec3 = Eigen::Vector3d;
    using Mat3 = Eigen::Matrix3d;

    inline constexpr double pi = 3.14159265358979323846;

    // Sentinel cost for hard-infeasible designs (e.g. zero support force).
    inline constexpr double big_cost = 1e12;

    // Error taxonomy. The CLI maps each family to a distinct exit code:
    //   ConfigError -> 2 (bad user input), NumericError -> 3 (degenerate data),
    //   IoError -> 4 (filesystem / parse trouble).
    struct Error : public std::runtime_error {
        using std::runtime_error::runtime_error;
    };

    struct ConfigError : public Error {
        using Error::Error;
    };

    struct NumericError : public Error {
        using Error::Error;
    };

    struct IoError : public Error {
        using Error::Error;
    };

    // Configuration family
    struct InvalidConfig : public ConfigError {
        using ConfigError::ConfigError;
    };

    struct OutOfBounds : public ConfigError {
        using ConfigError::ConfigError;
    };

    struct AngleCountMismatch : public ConfigError {
        using ConfigError::ConfigError;
    };

    struct LengthMismatch : public ConfigError {
        using ConfigError::ConfigError;
    };

    // Numeric family
    struct DegenerateCloud : public NumericError {
        using NumericError::NumericError;
    };

    struct EmptyWorkspace : public NumericError {
        using NumericError::NumericError;
    };

    struct NotSPD : public NumericError {
        using NumericError::NumericError;
    };

    namespace detail {

        inline std::string hash_hex(std::uint64_t h)
        {
            char buf[17];
            std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
            return buf;
        }

    } // namespace detail

    // Comment lines carried by every CSV artifact so any output file can be
    // traced back to the exact configuration and seed that produced it.
    inline std::string stamp_preamble(std::uint64_t config_hash, std::uint64_t seed)
    {
        return "# config_hash " + detail::hash_hex(config_hash) + "\n# seed " + std::to_string(seed) + "\n";
    }

} // namespace wsopt

#endif
