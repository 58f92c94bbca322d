#include "photocount/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "photocount/errors.hpp"

namespace photocount {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string_view strip_comment(std::string_view line) {
    const auto hash = line.find('#');
    return trim(hash == std::string_view::npos ? line : line.substr(0, hash));
}

template <typename T>
std::optional<T> parse_number(std::string_view text) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return value;
}

template <typename T>
T require_number(std::string_view text, const std::string& source, int line, std::string_view what) {
    const auto value = parse_number<T>(text);
    if (!value) throw ParseError(source, line, "cannot read " + std::string(what) + " from '" + std::string(text) + "'");
    if constexpr (std::is_floating_point_v<T>)
        if (!std::isfinite(*value)) throw ParseError(source, line, std::string(what) + " is not finite");
    return *value;
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open '" + path + "'");
    return in;
}

}  // namespace

ScatteringStrengths read_strengths(std::istream& in, const std::string& source) {
    std::vector<double> sigma;
    int first_below = 0, first_above = 0;
    std::string raw;
    for (int line = 1; std::getline(in, raw); ++line) {
        const auto text = strip_comment(raw);
        if (text.empty()) continue;
        const double v = require_number<double>(text, source, line, "scattering strength");
        if (v < 0.0) throw ParseError(source, line, "scattering strength must be non-negative");
        if (v < 1.0 - ScatteringStrengths::kRegimeTolerance && first_below == 0) first_below = line;
        if (v > 1.0 + ScatteringStrengths::kRegimeTolerance && first_above == 0) first_above = line;
        sigma.push_back(v);
    }
    if (sigma.empty()) throw ParseError(source, 0, "no scattering strengths found");
    if (first_below && first_above) {
        std::ostringstream msg;
        msg << source << ": mixed regime, sigma < 1 at line " << first_below << " and sigma > 1 at line "
            << first_above;
        throw RegimeError(msg.str());
    }
    return ScatteringStrengths::classify(std::move(sigma));
}

ScatteringStrengths read_strengths_file(const std::string& path) {
    auto in = open_or_throw(path);
    return read_strengths(in, path);
}

void write_strengths(std::ostream& out, const ScatteringStrengths& strengths, const std::string& header) {
    if (!header.empty()) out << "# " << header << '\n';
    out << "# regime: " << to_string(strengths.regime()) << '\n';
    for (double s : strengths.values()) out << format_real(s) << '\n';
}

Medium parse_medium(std::string_view text) {
    if (text == "slab") return Medium::Slab;
    if (text == "cavity") return Medium::Cavity;
    throw DomainError("unknown medium '" + std::string(text) + "' (expected slab|cavity)");
}

ModelFile read_model(std::istream& in, const std::string& source) {
    ModelFile model;
    std::string raw;
    for (int line = 1; std::getline(in, raw); ++line) {
        const auto text = strip_comment(raw);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) throw ParseError(source, line, "expected key = value");
        const auto key = trim(text.substr(0, eq));
        const auto value = trim(text.substr(eq + 1));
        if (value.empty()) throw ParseError(source, line, "missing value for '" + std::string(key) + "'");
        try {
            if (key == "medium") model.medium = parse_medium(value);
            else if (key == "regime") model.regime = parse_regime(value);
            else if (key == "gamma") model.gamma = require_number<double>(value, source, line, "gamma");
            else if (key == "N") model.modes = require_number<int>(value, source, line, "N");
            else if (key == "nu") model.nu = require_number<double>(value, source, line, "nu");
            else if (key == "f") model.f = require_number<double>(value, source, line, "f");
            else if (key == "omega") model.omega = require_number<double>(value, source, line, "omega");
            else if (key == "T") model.temperature = require_number<double>(value, source, line, "T");
            else if (key == "n_max") model.n_max = require_number<std::size_t>(value, source, line, "n_max");
            else if (key == "seed") model.seed = require_number<std::uint64_t>(value, source, line, "seed");
            else throw ParseError(source, line, "unknown key '" + std::string(key) + "'");
        } catch (const ParseError&) {
            throw;
        } catch (const DomainError& e) {
            throw ParseError(source, line, e.what());
        }
    }
    return model;
}

ModelFile read_model_file(const std::string& path) {
    auto in = open_or_throw(path);
    return read_model(in, path);
}

std::string format_real(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

}  // namespace photocount
