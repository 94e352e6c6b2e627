#include "cnsg/bounds.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "cnsg/errors.hpp"

namespace cnsg {

namespace {

void require_margin(double margin) {
    if (!(margin > 0 && margin < 1)) throw InvalidInput("margin must lie in (0, 1)");
}

}  // namespace

double area_constant(int genus, double sweepout_area, double margin) {
    if (genus < 1) throw InvalidInput("genus must be at least 1");
    if (!(sweepout_area > 0)) throw InvalidInput("sweep-out area bound must be positive");
    require_margin(margin);
    const double floor_value = std::max(sweepout_area, 2 * std::numbers::pi * (2 * genus - 2));
    return floor_value * (1 + (1 - margin));
}

double delta_constant(double delta0, double delta1, double margin) {
    if (!(delta0 > 0) || !(delta1 > 0)) throw InvalidInput("length scales must be positive");
    require_margin(margin);
    return margin * std::min(delta1, delta0 / 8);
}

int weight_budget(double K, double C) {
    if (!(K > 1)) throw InvalidInput("K must exceed 1");
    if (!(C > 0)) throw InvalidInput("C must be positive");
    const double raw = K * (C + 1);
    // absorb representation error just below an integer
    const double w = std::floor(raw * (1 + 1e-12));
    if (w > std::numeric_limits<int>::max()) throw InvalidInput("weight budget does not fit in an int");
    return static_cast<int>(w);
}

void check_config(const BoundsConfig& c) {
    area_constant(c.genus, c.sweepout_area, c.margin);
    delta_constant(c.delta0, c.delta1, c.margin);
    if (!(c.K > 1)) throw InvalidInput("K must exceed 1");
}

Bounds compute_bounds(const BoundsConfig& c) {
    check_config(c);
    Bounds b;
    b.C = area_constant(c.genus, c.sweepout_area, c.margin);
    b.delta = delta_constant(c.delta0, c.delta1, c.margin);
    b.W = weight_budget(c.K, b.C);
    return b;
}

BoundsConfig parse_bounds_config(std::string_view text) {
    BoundsConfig c;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, raw)) {
        ++line;
        if (auto h = raw.find('#'); h != std::string::npos) raw.resize(h);
        if (trim(raw).empty()) continue;
        const auto eq = raw.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", line, 1);
        const std::string key = trim(raw.substr(0, eq));
        const std::string value = trim(raw.substr(eq + 1));
        const int col = static_cast<int>(raw.find_first_not_of(" \t", eq + 1)) + 1;
        double x = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
        if (ec != std::errc() || ptr != value.data() + value.size() || value.empty())
            throw ParseError("expected a number for '" + key + "'", line, col);
        if (key == "genus") {
            if (x != std::floor(x)) throw ParseError("genus must be an integer", line, col);
            c.genus = static_cast<int>(x);
        } else if (key == "sweepout_area") {
            c.sweepout_area = x;
        } else if (key == "K") {
            c.K = x;
        } else if (key == "delta0") {
            c.delta0 = x;
        } else if (key == "delta1") {
            c.delta1 = x;
        } else if (key == "margin") {
            c.margin = x;
        } else {
            throw ParseError("unknown key '" + key + "'", line, 1);
        }
    }
    return c;
}

BoundsConfig load_bounds_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_bounds_config(ss.str());
}

}  // namespace cnsg
