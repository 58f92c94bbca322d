#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "photocount/media.hpp"
#include "photocount/types.hpp"

namespace photocount {

// Strengths file: one sigma per line as plain decimal text. Blank lines and
// text after '#' are ignored. Errors carry the offending line number; a
// spectrum on both sides of 1 names the first line of each side.
ScatteringStrengths read_strengths(std::istream& in, const std::string& source);
ScatteringStrengths read_strengths_file(const std::string& path);

// One value per line at 17 significant digits, after an optional '#' header.
void write_strengths(std::ostream& out, const ScatteringStrengths& strengths,
                     const std::string& header = {});

// Model file: key = value lines, '#' comments. Every key is optional here;
// the consumer decides what is required.
struct ModelFile {
    std::optional<Medium> medium;
    std::optional<double> gamma;
    std::optional<Regime> regime;
    std::optional<int> modes;       // N
    std::optional<double> nu;
    std::optional<double> f;
    std::optional<double> omega;
    std::optional<double> temperature;  // T
    std::optional<std::size_t> n_max;
    std::optional<std::uint64_t> seed;
};

ModelFile read_model(std::istream& in, const std::string& source);
ModelFile read_model_file(const std::string& path);

Medium parse_medium(std::string_view text);

// printf "%.17g": enough digits to round-trip any double.
std::string format_real(double value);

}  // namespace photocount
