#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace rulelift {

// Monotone reward applied to a heuristic value as a function of head size.
// Always 1 at size 1, so single-label heads are never lifted.
struct LiftFunction {
    enum class Variant { Identity, Kln, Peak, Table };

    Variant variant = Variant::Identity;
    double k = 0.0;                // kln: 1 + k*ln(x)
    std::size_t peak_m = 1;        // peak: size with the maximum lift
    double l_max = 1.0;            // peak: lift at peak_m
    double curvature = 1.0;        // peak: exponent parameter c
    std::vector<double> table;     // table: explicit per-size values, table[0] == 1

    static LiftFunction identity();
    static LiftFunction kln(double k);
    static LiftFunction peak(std::size_t m, double l_max, double curvature);
    static LiftFunction from_table(std::vector<double> values);

    bool operator==(const LiftFunction&) const = default;
};

// Lift at head size x for a dataset with n labels; requires 1 <= x <= n.
double lift_at(const LiftFunction& f, std::size_t x, std::size_t n);

// h * lift(size).
double lifted_value(const LiftFunction& f, double h, std::size_t head_size, std::size_t n);

// max over sizes in (k, n] of the lift; 0 when k == n (nothing remains).
double max_remaining_lift(const LiftFunction& f, std::size_t k, std::size_t n);

// Accepts "none", "kln:k=0.14", "peak:m=3,lmax=1.2,c=1",
// "table:1.0,1.1,1.15,1.19".
LiftFunction parse_lift(const std::string& text);
std::string format_lift(const LiftFunction& f);

}  // namespace rulelift
