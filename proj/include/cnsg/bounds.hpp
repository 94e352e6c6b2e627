#pragma once

#include <string>
#include <string_view>

namespace cnsg {

// Geometric inputs. K, the sweep-out area bound and both length scales are supplied by
// the caller; nothing here derives them from a metric.
struct BoundsConfig {
    int genus = 2;
    double sweepout_area = 1.0;  // C'
    double K = 2.0;
    double delta0 = 8.0;  // injectivity radius
    double delta1 = 2.0;  // compression-disk diameter floor
    double margin = 0.99;
};

// max{C', 2*pi*(2g-2)} scaled up by (2 - margin), so strictly above the maximum.
double area_constant(int genus, double sweepout_area, double margin = 0.99);
// margin * min{delta1, delta0/8}, strictly below the minimum.
double delta_constant(double delta0, double delta1, double margin = 0.99);
// floor(K * (C + 1)); requires K > 1 and C > 0.
int weight_budget(double K, double C);

struct Bounds {
    double C = 0;
    double delta = 0;
    int W = 0;
};

// Throws InvalidInput on a config that breaks the positivity or K > 1 requirements.
void check_config(const BoundsConfig& config);
Bounds compute_bounds(const BoundsConfig& config);

// key = value lines; keys genus, sweepout_area, K, delta0, delta1, margin; '#' comments.
BoundsConfig parse_bounds_config(std::string_view text);
BoundsConfig load_bounds_config(const std::string& path);

}  // namespace cnsg
