#pragma once

#include "rham/format.hpp"
#include "rham/frac.hpp"
#include "rham/vec3.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace rham {

namespace detail {

inline double ipow(double b, int e) {
    double r = 1.0;
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

}  // namespace detail

struct CompiledTerm {
    double c;
    int ex, ey, ez;
};

/// A polynomial in x, y, z with all parameters folded into double
/// coefficients. Evaluation uses compensated (Kahan) summation.
class CompiledPoly {
public:
    CompiledPoly() = default;
    explicit CompiledPoly(std::vector<CompiledTerm> terms) : terms_(std::move(terms)) {}

    const std::vector<CompiledTerm>& terms() const { return terms_; }

    double eval(double x, double y, double z) const {
        double sum = 0.0, comp = 0.0;
        for (const CompiledTerm& t : terms_) {
            double v = t.c * detail::ipow(x, t.ex) * detail::ipow(y, t.ey) *
                       detail::ipow(z, t.ez);
            double yk = v - comp;
            double s = sum + yk;
            comp = (s - sum) - yk;
            sum = s;
        }
        return sum;
    }

    double eval(const std::array<double, 3>& p) const { return eval(p[0], p[1], p[2]); }

private:
    std::vector<CompiledTerm> terms_;
};

inline CompiledPoly compile(const Poly& p, const std::map<SymId, double>& bindings,
                            double scale = 1.0) {
    std::map<std::array<int, 3>, double> acc;
    for (const auto& [mono, coeff] : p.terms()) {
        std::array<int, 3> e{0, 0, 0};
        double c = to_double(coeff) * scale;
        for (const auto& [s, d] : mono.entries()) {
            if (is_var(s)) {
                e[static_cast<std::size_t>(s)] = d;
            } else {
                auto it = bindings.find(s);
                if (it == bindings.end())
                    throw Error("unbound symbol '" + sym_name(s) + "' in compilation");
                c *= detail::ipow(it->second, d);
            }
        }
        acc[e] += c;
    }
    std::vector<CompiledTerm> terms;
    terms.reserve(acc.size());
    for (const auto& [e, c] : acc)
        if (c != 0.0) terms.push_back({c, e[0], e[1], e[2]});
    return CompiledPoly(std::move(terms));
}

inline CompiledPoly compile(const PolyFrac& f, const std::map<SymId, double>& bindings) {
    double den = 1.0;
    for (const auto& [s, d] : f.den().entries()) {
        auto it = bindings.find(s);
        if (it == bindings.end())
            throw Error("unbound symbol '" + sym_name(s) + "' in compilation");
        den *= detail::ipow(it->second, d);
    }
    if (den == 0.0)
        throw Error("denominator " + to_string(f.den()) + " evaluates to zero");
    return compile(f.num(), bindings, 1.0 / den);
}

struct CompiledVec3 {
    CompiledPoly x, y, z;

    std::array<double, 3> eval(const std::array<double, 3>& p) const {
        return {x.eval(p), y.eval(p), z.eval(p)};
    }
};

inline CompiledVec3 compile(const PolyVec3& v, const std::map<SymId, double>& bindings) {
    return {compile(v.x, bindings), compile(v.y, bindings), compile(v.z, bindings)};
}

inline CompiledVec3 compile(const FracVec3& v, const std::map<SymId, double>& bindings) {
    return {compile(v.component(0), bindings), compile(v.component(1), bindings),
            compile(v.component(2), bindings)};
}

/// Named scalar recorded along a trajectory.
struct ChannelSpec {
    std::string name;
    std::function<double(double, const std::array<double, 3>&)> fn;
};

enum class Method { rk4, rk45 };

inline std::string method_name(Method m) { return m == Method::rk4 ? "rk4" : "rk45"; }

struct IntegratorConfig {
    Method method = Method::rk4;
    double step = 1e-3;       // grid step for rk4, initial trial step for rk45
    double t_start = 0.0;
    double t_end = 10.0;
    double abs_tol = 1e-9;    // rk45 only
    double rel_tol = 1e-9;    // rk45 only
    std::map<SymId, double> param_bindings;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::array<double, 3>> states;
    std::vector<std::string> channel_names;
    std::vector<std::vector<double>> channels;
    bool diverged = false;

    const std::vector<double>& channel(const std::string& name) const {
        for (std::size_t i = 0; i < channel_names.size(); ++i)
            if (channel_names[i] == name) return channels[i];
        throw Error("unknown channel '" + name + "'");
    }
    bool has_channel(const std::string& name) const {
        for (const auto& n : channel_names)
            if (n == name) return true;
        return false;
    }
};

namespace detail {

inline bool out_of_range(const std::array<double, 3>& y) {
    for (double v : y)
        if (!std::isfinite(v) || std::abs(v) > 1e12) return true;
    return false;
}

/// Derivative of the quadratic through (ta,fa), (tb,fb), (tc,fc) at t.
inline double lagrange3_deriv(double ta, double fa, double tb, double fb, double tc,
                              double fc, double t) {
    return fa * (2 * t - tb - tc) / ((ta - tb) * (ta - tc)) +
           fb * (2 * t - ta - tc) / ((tb - ta) * (tb - tc)) +
           fc * (2 * t - ta - tb) / ((tc - ta) * (tc - tb));
}

inline std::array<double, 3> axpy(const std::array<double, 3>& y, double h,
                                  const std::array<double, 3>& k) {
    return {y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]};
}

}  // namespace detail

/// Integrate dx/dt = rhs(x) from cfg.t_start to cfg.t_end. Channels are
/// sampled at every recorded node. When analytic_rate is given and an "H"
/// channel is present, an energy_rate_residual channel is appended holding
/// d/dt H(x(t)) (finite differenced from the recorded samples) minus the
/// analytic rate evaluated on the trajectory.
inline Trajectory integrate(const CompiledVec3& rhs, const std::array<double, 3>& x0,
                            const IntegratorConfig& cfg,
                            const std::vector<ChannelSpec>& channels = {},
                            const CompiledPoly* analytic_rate = nullptr) {
    if (!(cfg.t_end > cfg.t_start)) throw Error("t_end must exceed t_start");
    if (!(cfg.step > 0)) throw Error("step must be positive");

    Trajectory traj;
    for (const auto& ch : channels) traj.channel_names.push_back(ch.name);
    traj.channels.resize(channels.size());

    auto record = [&](double t, const std::array<double, 3>& y) {
        traj.times.push_back(t);
        traj.states.push_back(y);
        for (std::size_t i = 0; i < channels.size(); ++i)
            traj.channels[i].push_back(channels[i].fn(t, y));
    };

    std::array<double, 3> y = x0;
    record(cfg.t_start, y);

    if (cfg.method == Method::rk4) {
        double span = cfg.t_end - cfg.t_start;
        long long nsteps = std::llround(span / cfg.step);
        if (nsteps < 1) nsteps = 1;
        double h = span / static_cast<double>(nsteps);
        for (long long n = 0; n < nsteps; ++n) {
            auto k1 = rhs.eval(y);
            auto k2 = rhs.eval(detail::axpy(y, h / 2, k1));
            auto k3 = rhs.eval(detail::axpy(y, h / 2, k2));
            auto k4 = rhs.eval(detail::axpy(y, h, k3));
            for (int i = 0; i < 3; ++i)
                y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
            if (detail::out_of_range(y)) {
                traj.diverged = true;
                break;
            }
            record(cfg.t_start + h * static_cast<double>(n + 1), y);
        }
    } else {
        // Dormand-Prince 5(4) with FSAL; stage times are irrelevant because
        // the fields are autonomous
        static const double a[7][6] = {
            {},
            {1.0 / 5},
            {3.0 / 40, 9.0 / 40},
            {44.0 / 45, -56.0 / 15, 32.0 / 9},
            {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
            {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
            {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
        static const double b5[7] = {35.0 / 384,    0, 500.0 / 1113, 125.0 / 192,
                                     -2187.0 / 6784, 11.0 / 84, 0};
        static const double b4[7] = {5179.0 / 57600,    0,           7571.0 / 16695,
                                     393.0 / 640,      -92097.0 / 339200,
                                     187.0 / 2100,     1.0 / 40};

        double t = cfg.t_start;
        double h = std::min(cfg.step, cfg.t_end - cfg.t_start);
        std::array<double, 3> k[7];
        k[0] = rhs.eval(y);
        long long accepted = 0, attempts = 0;
        while (t < cfg.t_end) {
            if (++attempts > 20000000) throw Error("rk45: step limit exceeded");
            if (h < 1e-14 * std::max(1.0, std::abs(t)))
                throw Error("rk45: step size underflow at t=" + std::to_string(t));
            if (t + h > cfg.t_end) h = cfg.t_end - t;

            for (int s = 1; s < 7; ++s) {
                std::array<double, 3> ys = y;
                for (int j = 0; j < s; ++j)
                    for (int i = 0; i < 3; ++i) ys[i] += h * a[s][j] * k[j][i];
                k[s] = rhs.eval(ys);
            }
            std::array<double, 3> ynew = y;
            for (int s = 0; s < 7; ++s)
                for (int i = 0; i < 3; ++i) ynew[i] += h * b5[s] * k[s][i];

            double err = 0.0;
            for (int i = 0; i < 3; ++i) {
                double ei = 0.0;
                for (int s = 0; s < 7; ++s) ei += h * (b5[s] - b4[s]) * k[s][i];
                double scale =
                    cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                err += (ei / scale) * (ei / scale);
            }
            err = std::sqrt(err / 3.0);

            if (err <= 1.0 || h <= 1e-13 * std::max(1.0, std::abs(t))) {
                t += h;
                y = ynew;
                k[0] = k[6];  // FSAL
                if (detail::out_of_range(y)) {
                    traj.diverged = true;
                    break;
                }
                record(t, y);
                if (++accepted > 10000000) throw Error("rk45: too many steps");
            }
            double fac = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            fac = std::min(5.0, std::max(0.2, fac));
            h *= fac;
        }
    }

    if (analytic_rate != nullptr && traj.has_channel("H") && traj.times.size() >= 3) {
        const std::vector<double>& hv = traj.channel("H");
        const std::vector<double>& tv = traj.times;
        std::size_t n = tv.size();
        std::vector<double> resid(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t a0 = i == 0 ? 0 : (i == n - 1 ? n - 3 : i - 1);
            double dh = detail::lagrange3_deriv(tv[a0], hv[a0], tv[a0 + 1], hv[a0 + 1],
                                                tv[a0 + 2], hv[a0 + 2], tv[i]);
            resid[i] = std::fabs(dh - analytic_rate->eval(traj.states[i]));
        }
        traj.channel_names.push_back("energy_rate_residual");
        traj.channels.push_back(std::move(resid));
    }
    return traj;
}

/// Symbolic front end: binds parameters from the config and integrates.
inline Trajectory integrate(const FracVec3& rhs, const std::array<double, 3>& x0,
                            const IntegratorConfig& cfg,
                            const std::vector<ChannelSpec>& channels = {},
                            const PolyFrac* analytic_rate = nullptr) {
    CompiledVec3 crhs = compile(rhs, cfg.param_bindings);
    if (analytic_rate != nullptr) {
        CompiledPoly crate = compile(*analytic_rate, cfg.param_bindings);
        return integrate(crhs, x0, cfg, channels, &crate);
    }
    return integrate(crhs, x0, cfg, channels, nullptr);
}

/// Largest excursion of a recorded channel from its initial value.
inline double conservation_report(const Trajectory& traj, const std::string& name) {
    const std::vector<double>& v = traj.channel(name);
    if (v.empty()) throw Error("empty channel '" + name + "'");
    double q0 = v.front(), m = 0.0;
    for (double q : v) m = std::max(m, std::abs(q - q0));
    return m;
}

namespace detail {

inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

inline void write_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,x,y,z";
    for (const auto& n : traj.channel_names) os << ',' << n;
    os << '\n';
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        os << detail::fmt17(traj.times[i]);
        for (double v : traj.states[i]) os << ',' << detail::fmt17(v);
        for (const auto& ch : traj.channels) os << ',' << detail::fmt17(ch[i]);
        os << '\n';
    }
}

inline void write_json(std::ostream& os, const Trajectory& traj,
                       const IntegratorConfig& cfg) {
    nlohmann::json j;
    j["times"] = traj.times;
    j["states"] = nlohmann::json::array();
    for (const auto& s : traj.states) j["states"].push_back({s[0], s[1], s[2]});
    j["channels"] = nlohmann::json::object();
    for (std::size_t i = 0; i < traj.channel_names.size(); ++i)
        j["channels"][traj.channel_names[i]] = traj.channels[i];
    j["diverged"] = traj.diverged;
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [s, v] : cfg.param_bindings) params[sym_name(s)] = v;
    j["config"] = {{"method", method_name(cfg.method)}, {"step", cfg.step},
                   {"t_start", cfg.t_start},            {"t_end", cfg.t_end},
                   {"abs_tol", cfg.abs_tol},            {"rel_tol", cfg.rel_tol},
                   {"param_bindings", params}};
    os << j.dump(2) << '\n';
}

}  // namespace rham
