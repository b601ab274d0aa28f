#include "mdi/quad.hpp"

#include "mdi/errors.hpp"

#include <cmath>

namespace mdi {

const char* rule_name(RuleKind r) {
    switch (r) {
    case RuleKind::trap:
        return "trap";
    case RuleKind::simpson:
        return "simpson";
    case RuleKind::gauss2:
        return "gauss2";
    case RuleKind::midpoint:
        return "midpoint";
    }
    return "?";
}

RuleKind rule_from_name(const std::string& name) {
    if (name == "trap" || name == "1") return RuleKind::trap;
    if (name == "simpson" || name == "2") return RuleKind::simpson;
    if (name == "gauss2" || name == "3") return RuleKind::gauss2;
    if (name == "midpoint" || name == "4") return RuleKind::midpoint;
    throw BadNodeCount("unknown quadrature rule '" + name + "'");
}

Box::Box(std::vector<Interval> axes) : axes_(std::move(axes)) {
    for (const Interval& iv : axes_)
        if (!(iv.lo < iv.hi))
            throw DimensionMismatch("box axis must have lo < hi");
}

Box Box::cube(int dims, double lo, double hi) {
    return Box(std::vector<Interval>(static_cast<std::size_t>(dims), Interval{lo, hi}));
}

double Box::volume() const {
    double v = 1.0;
    for (const Interval& iv : axes_) v *= iv.hi - iv.lo;
    return v;
}

Rule1D make_rule(RuleKind kind, int n, double a, double b) {
    if (!(a < b)) throw DimensionMismatch("interval must have a < b");
    Rule1D r{kind, a, b, {}, {}, 0.0};
    switch (kind) {
    case RuleKind::trap: {
        if (n < 2) throw BadNodeCount("trap needs at least 2 points");
        double h = (b - a) / (n - 1);
        for (int i = 0; i < n; ++i) {
            r.nodes.push_back(a + i * h);
            r.weights.push_back((i == 0 || i == n - 1) ? h / 2 : h);
        }
        break;
    }
    case RuleKind::simpson: {
        if (n < 3 || n % 2 == 0) throw BadNodeCount("simpson needs an odd point count >= 3");
        double h = (b - a) / (n - 1);
        for (int i = 0; i < n; ++i) {
            r.nodes.push_back(a + i * h);
            double w = (i == 0 || i == n - 1) ? h / 3 : (i % 2 == 1 ? 4 * h / 3 : 2 * h / 3);
            r.weights.push_back(w);
        }
        break;
    }
    case RuleKind::gauss2: {
        if (n < 2 || n % 2 == 1) throw BadNodeCount("gauss2 needs an even point count >= 2");
        int panels = n / 2;
        double h = (b - a) / panels;
        double off = h / (2 * std::sqrt(3.0));
        for (int p = 0; p < panels; ++p) {
            double mid = a + (p + 0.5) * h;
            r.nodes.push_back(mid - off);
            r.nodes.push_back(mid + off);
            r.weights.push_back(h / 2);
            r.weights.push_back(h / 2);
        }
        break;
    }
    case RuleKind::midpoint: {
        if (n < 1) throw BadNodeCount("midpoint needs at least 1 point");
        double h = (b - a) / n;
        for (int i = 0; i < n; ++i) {
            r.nodes.push_back(a + (i + 0.5) * h);
            r.weights.push_back(h);
        }
        break;
    }
    }
    PairwiseAccumulator acc;
    for (double w : r.weights) acc.add(w);
    r.weight_sum = acc.total();
    return r;
}

int convergence_order(RuleKind kind) {
    switch (kind) {
    case RuleKind::trap:
    case RuleKind::midpoint:
        return 2;
    case RuleKind::simpson:
    case RuleKind::gauss2:
        return 4;
    }
    return 0;
}

void PairwiseAccumulator::add(double v) {
    // binary counter: level i holds a partial sum of 2^i inputs
    std::uint64_t c = ++count_;
    std::size_t i = 0;
    while ((c & 1) == 0) {
        v += levels_[i];
        levels_[i] = 0.0;
        c >>= 1;
        ++i;
    }
    if (i == levels_.size())
        levels_.push_back(v);
    else
        levels_[i] = v;
}

double PairwiseAccumulator::total() const {
    double s = 0.0;
    for (double v : levels_) s += v;
    return s;
}

} // namespace mdi
