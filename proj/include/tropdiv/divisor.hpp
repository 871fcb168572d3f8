#pragma once

#include <map>
#include <vector>

#include "tropdiv/model.hpp"

namespace tropdiv {

// Finite formal integer combination of points; only nonzero coefficients are
// stored, keyed by PointRef in a deterministic order.
class Divisor {
public:
    Divisor() = default;
    explicit Divisor(std::map<PointRef, long long> coeffs);

    static Divisor at(const PointRef& p, long long c = 1);

    long long coeff(const PointRef& p) const;
    void add(const PointRef& p, long long c);

    long long degree() const;
    bool is_effective() const;
    bool is_zero() const { return coeffs_.empty(); }
    std::vector<PointRef> support() const;
    bool vertex_supported() const;

    const std::map<PointRef, long long>& entries() const { return coeffs_; }

    Divisor& operator+=(const Divisor& o);
    Divisor& operator-=(const Divisor& o);
    friend Divisor operator+(Divisor a, const Divisor& b) { a += b; return a; }
    friend Divisor operator-(Divisor a, const Divisor& b) { a -= b; return a; }
    friend Divisor operator*(long long k, const Divisor& d);
    friend bool operator==(const Divisor& a, const Divisor& b) { return a.coeffs_ == b.coeffs_; }
    friend bool operator!=(const Divisor& a, const Divisor& b) { return !(a == b); }

    std::string str() const;

private:
    std::map<PointRef, long long> coeffs_;
};

// K = sum over points of (val - 2) * P; intrinsic valence, so refinement
// never changes it.  Degree is 2g - 2.
Divisor canonical_divisor(const Model& m);

// Vertex-indexed dense view; throws InvalidPoint unless vertex-supported.
std::vector<long long> to_dense(const Model& m, const Divisor& d);
Divisor from_dense(const std::vector<long long>& dense);

// Re-address through a refinement (all points become points of the new
// model); pull goes the other way.
Divisor push_divisor(const Refinement& r, const Divisor& d);
Divisor pull_divisor(const Refinement& r, const Divisor& d);

// Continuous piecewise-linear function with integer slopes, stored per edge
// as breakpoint offsets (first 0, last the edge length) and values.
struct PLFunction {
    struct Track {
        std::vector<Rational> offsets;
        std::vector<Rational> values;
    };
    std::vector<Track> tracks;  // indexed by edge

    static PLFunction constant(const Model& m, const Rational& c);
    Rational value_at(const Model& m, const PointRef& p) const;

    friend PLFunction operator+(const PLFunction& f, const PLFunction& g);
};

// Checks continuity at vertices and integrality of every segment slope.
void validate_pl(const PLFunction& f, const Model& m);

// div(f): at each point, the sum of the slopes of f emanating from it.
// Always degree 0.
Divisor div_of_function(const PLFunction& f, const Model& m);

// Re-address a PLFunction through a refinement of its model.
PLFunction push_pl(const Refinement& r, const PLFunction& f, const Model& refined);

}  // namespace tropdiv
