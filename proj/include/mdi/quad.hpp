#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mdi {

// Composite 1-d quadrature rules on [a,b]. N is the total node count along
// one direction:
//   trap      N >= 2      equispaced nodes, order 2
//   simpson   N odd >= 3  equispaced nodes, order 4
//   gauss2    N even >= 2 two nodes per panel (N/2 panels), order 4
//   midpoint  N >= 1      one node per panel (N panels), order 2
enum class RuleKind : std::uint8_t { trap = 1, simpson = 2, gauss2 = 3, midpoint = 4 };

const char* rule_name(RuleKind r);
RuleKind rule_from_name(const std::string& name); // accepts names and 1..4

struct Rule1D {
    RuleKind kind;
    double a, b;
    std::vector<double> nodes;   // ascending, inside [a,b]
    std::vector<double> weights; // same length; sum == b - a up to roundoff
    double weight_sum;           // pairwise sum of weights, reused for v-free monomials

    int n_points() const { return static_cast<int>(nodes.size()); }
};

struct Interval {
    double lo, hi;
};

// Axis-aligned integration domain; axis(i) is 0-based.
class Box {
public:
    Box() = default;
    explicit Box(std::vector<Interval> axes);
    static Box cube(int dims, double lo, double hi);

    int dims() const { return static_cast<int>(axes_.size()); }
    const Interval& axis(int i) const { return axes_[static_cast<std::size_t>(i)]; }
    double volume() const;

private:
    std::vector<Interval> axes_;
};

// Builds the composite rule; throws BadNodeCount when N violates the rule's
// parity or minimum, DimensionMismatch when a >= b.
Rule1D make_rule(RuleKind kind, int n_points, double a, double b);

int convergence_order(RuleKind kind); // 2, 4, 4, 2

// Pairwise (binary-counter) summation: deterministic for a fixed push order
// and accurate for long streams.
class PairwiseAccumulator {
public:
    void add(double v);
    double total() const;

private:
    std::vector<double> levels_;
    std::uint64_t count_ = 0;
};

} // namespace mdi
