#pragma once

#include "rham/poly.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <utility>
#include <vector>

namespace rham {

/// Scalar expression tree over x, y, z and parameters, evaluated in double
/// precision. Gradients are not derived automatically: each ClosedForm
/// carries explicit gradient trees which validate_gradient() cross-checks
/// against central finite differences.
class ClosedForm {
  public:
    enum class Op { constant, symbol, add, sub, mul, div, pow, abs };

    struct Node;
    using NodeP = std::shared_ptr<const Node>;

    struct Node {
        Op op;
        Rational cval{};
        SymId symbol = -1;
        NodeP a, b;
    };

    ClosedForm() = default;
    ClosedForm(NodeP value, std::array<NodeP, 3> gradient)
        : value_(std::move(value)), grad_(std::move(gradient)) {}

    static double eval_node(const NodeP& n, const std::map<SymId, double>& vals) {
        if (!n) throw Error("closed form: empty expression");
        switch (n->op) {
            case Op::constant:
                return to_double(n->cval);
            case Op::symbol: {
                auto it = vals.find(n->symbol);
                if (it == vals.end())
                    throw Error("unbound symbol '" + sym_name(n->symbol) + "' in evaluation");
                return it->second;
            }
            case Op::add:
                return eval_node(n->a, vals) + eval_node(n->b, vals);
            case Op::sub:
                return eval_node(n->a, vals) - eval_node(n->b, vals);
            case Op::mul:
                return eval_node(n->a, vals) * eval_node(n->b, vals);
            case Op::div: {
                double d = eval_node(n->b, vals);
                if (d == 0) throw Error("closed form: division by zero");
                return eval_node(n->a, vals) / d;
            }
            case Op::pow:
                return std::pow(eval_node(n->a, vals), eval_node(n->b, vals));
            case Op::abs:
                return std::fabs(eval_node(n->a, vals));
        }
        throw Error("closed form: bad node");
    }

    double eval(const std::map<SymId, double>& vals) const { return eval_node(value_, vals); }

    double grad_eval(int axis, const std::map<SymId, double>& vals) const {
        return eval_node(grad_.at(static_cast<size_t>(axis)), vals);
    }

    std::array<double, 3> gradient(const std::map<SymId, double>& vals) const {
        return {grad_eval(0, vals), grad_eval(1, vals), grad_eval(2, vals)};
    }

    /// Checks the supplied gradient against central differences at each point.
    /// The step is refined until the difference quotient converges; near a
    /// singular locus a fixed step would be dominated by truncation error.
    /// Throws on disagreement beyond the relative tolerance at every step.
    void validate_gradient(const std::vector<std::array<double, 3>>& points,
                           std::map<SymId, double> params, double rel_tol = 1e-6) const {
        const SymId v[3] = {kSymX, kSymY, kSymZ};
        for (const auto& pt : points) {
            for (int i = 0; i < 3; ++i) params[v[i]] = pt[static_cast<size_t>(i)];
            for (int i = 0; i < 3; ++i) {
                double x0 = pt[static_cast<size_t>(i)];
                double g = grad_eval(i, params);
                double best = std::numeric_limits<double>::infinity();
                bool ok = false;
                for (double h = 1e-4 * std::max(1.0, std::fabs(x0)); h > 1e-12; h /= 10) {
                    params[v[i]] = x0 + h;
                    double fp = eval(params);
                    params[v[i]] = x0 - h;
                    double fm = eval(params);
                    params[v[i]] = x0;
                    double fd = (fp - fm) / (2 * h);
                    double rel =
                        std::fabs(fd - g) / std::max({1.0, std::fabs(g), std::fabs(fd)});
                    best = std::min(best, rel);
                    if (rel <= rel_tol) {
                        ok = true;
                        break;
                    }
                }
                if (!ok)
                    throw Error("closed form gradient disagrees with finite differences (axis " +
                                std::to_string(i) + ", relative error " + std::to_string(best) +
                                ")");
            }
        }
    }

    const NodeP& value_node() const { return value_; }

  private:
    NodeP value_;
    std::array<NodeP, 3> grad_{};
};

namespace cf {

struct Expr {
    ClosedForm::NodeP n;
};

inline Expr make(ClosedForm::Op op, Expr a = {}, Expr b = {}) {
    auto node = std::make_shared<ClosedForm::Node>();
    node->op = op;
    node->a = std::move(a.n);
    node->b = std::move(b.n);
    return {node};
}

inline Expr num(const Rational& v) {
    auto node = std::make_shared<ClosedForm::Node>();
    node->op = ClosedForm::Op::constant;
    node->cval = v;
    return {node};
}
inline Expr num(int v) { return num(Rational(v)); }

inline Expr symbol(SymId s) {
    auto node = std::make_shared<ClosedForm::Node>();
    node->op = ClosedForm::Op::symbol;
    node->symbol = s;
    return {node};
}

inline Expr operator+(Expr a, Expr b) { return make(ClosedForm::Op::add, a, b); }
inline Expr operator-(Expr a, Expr b) { return make(ClosedForm::Op::sub, a, b); }
inline Expr operator*(Expr a, Expr b) { return make(ClosedForm::Op::mul, a, b); }
inline Expr operator/(Expr a, Expr b) { return make(ClosedForm::Op::div, a, b); }
inline Expr operator-(Expr a) { return num(0) - a; }
inline Expr pow(Expr a, Expr b) { return make(ClosedForm::Op::pow, a, b); }
inline Expr abs(Expr a) { return make(ClosedForm::Op::abs, a); }

}  // namespace cf

// ---------------------------------------------------------------------------
// Quasi-random sampling

/// Van der Corput radical inverse; bases 2, 3, 5 give the 3d Halton sequence.
inline double halton(int index, int base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * (index % base);
        index /= base;
    }
    return r;
}

/// First n Halton points in [lo, hi]^3 that survive the exclusion predicate.
inline std::vector<std::array<double, 3>> halton_box(
    int n, double lo, double hi, const std::function<bool(double, double, double)>& exclude = {}) {
    std::vector<std::array<double, 3>> pts;
    double w = hi - lo;
    for (int i = 1; static_cast<int>(pts.size()) < n; ++i) {
        double x = lo + w * halton(i, 2);
        double y = lo + w * halton(i, 3);
        double z = lo + w * halton(i, 5);
        if (exclude && exclude(x, y, z)) continue;
        pts.push_back({x, y, z});
        if (i > 100000) throw Error("halton_box: exclusion rejects too many points");
    }
    return pts;
}

}  // namespace rham
