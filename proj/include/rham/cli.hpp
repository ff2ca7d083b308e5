#pragma once

#include "rham/bihamiltonian.hpp"
#include "rham/conformal.hpp"
#include "rham/integrate.hpp"
#include "rham/systems.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace rham::cli {

namespace detail {

using rham::detail::compact;

inline const char* kGbarLiteral = "|2*y - d|^(-lam/g) * |1 - g/(4*z)|^(2*lam/g)";
inline const char* kMultiplierLiteral = "(4*lam/g) * Gbar / ((g*z - 4*z^2) * (2*y - d))";

inline Rational parse_rational(const std::string& text) {
    Poly p = parse_poly(text);
    if (!p.is_constant()) throw Error("expected a rational constant, got '" + text + "'");
    return p.constant_value();
}

inline std::pair<std::string, std::string> split_eq(const std::string& s) {
    auto pos = s.find('=');
    if (pos == std::string::npos || pos == 0)
        throw Error("expected name=value, got '" + s + "'");
    return {s.substr(0, pos), s.substr(pos + 1)};
}

inline SymId param_symbol(const std::string& name) {
    if (!SymbolTable::instance().known(name))
        throw Error("unknown parameter '" + name + "'");
    SymId id = sym(name);
    if (is_var(id)) throw Error("'" + name + "' is a state variable, not a parameter");
    return id;
}

inline std::map<SymId, Poly> parse_param_subst(const std::vector<std::string>& kvs) {
    std::map<SymId, Poly> m;
    for (const auto& kv : kvs) {
        auto [k, v] = split_eq(kv);
        m[param_symbol(k)] = Poly(parse_rational(v));
    }
    return m;
}

inline std::map<SymId, double> parse_param_doubles(const std::vector<std::string>& kvs) {
    std::map<SymId, double> m;
    for (const auto& kv : kvs) {
        auto [k, v] = split_eq(kv);
        SymId id = param_symbol(k);
        try {
            std::size_t used = 0;
            double d = std::stod(v, &used);
            if (used == v.size()) {
                m[id] = d;
                continue;
            }
        } catch (const std::exception&) {
        }
        m[id] = to_double(parse_rational(v));
    }
    return m;
}

inline std::array<double, 3> parse_x0(const std::string& text) {
    std::array<double, 3> x{};
    std::stringstream ss(text);
    std::string piece;
    int i = 0;
    while (std::getline(ss, piece, ',')) {
        if (i >= 3) throw Error("--x0 takes exactly three comma separated values");
        try {
            std::size_t used = 0;
            x[static_cast<std::size_t>(i)] = std::stod(piece, &used);
            if (used != piece.size()) throw Error("");
        } catch (const std::exception&) {
            throw Error("bad coordinate '" + piece + "' in --x0");
        }
        ++i;
    }
    if (i != 3) throw Error("--x0 takes exactly three comma separated values");
    return x;
}

inline void print_report(std::ostream& out, const Report& rep) {
    for (const auto& c : rep.checks) {
        const char* word = c.status == CheckStatus::pass   ? "PASS"
                           : c.status == CheckStatus::fail ? "FAIL"
                                                           : "INFO";
        out << word << ' ' << c.id;
        if (!c.detail.empty()) out << ' ' << c.detail;
        out << '\n';
    }
}

inline Report exactness_report(const ResistiveSystem& base, bool symbolic) {
    Report rep;
    rep.subject = base.name;
    if (base.name == "reduced_three_wave") {
        if (symbolic) {
            rep.info("exactness.closedform", "numeric check skipped under --symbolic");
            return rep;
        }
        DerivedBiHamiltonian d = derive_biham(base);
        auto pts = halton_box(100, 0.1, 2.0, three_wave_exclusion(1.0, 1.0));
        for (const Rational& lam : {Rational(1, 2), Rational(1), Rational(2)}) {
            std::map<SymId, double> bind{{sym("g"), 1.0},
                                         {sym("d"), 1.0},
                                         {sym("lam"), to_double(lam)}};
            ExactnessResult r = verify_exactness_numeric(d.n, *d.gbar_form,
                                                         *d.multiplier_form, pts, bind);
            std::ostringstream det;
            det << "lam=" << lam.str() << " samples=" << r.samples
                << " max_err=" << std::scientific << r.max_err;
            if (r.pass)
                rep.pass("exactness.closedform", det.str());
            else
                rep.fail("exactness.closedform", det.str());
        }
    } else if (base.name == "lu") {
        DerivedBiHamiltonian gen = derive_biham(base);
        if (gen.has_certificate())
            rep.fail("exactness.closedform", "unexpected certificate at generic parameters");
        else
            rep.info("exactness.closedform", "no certificate at generic parameters");
        DerivedBiHamiltonian d =
            derive_biham(base, std::nullopt, {{sym("g"), Poly::var(sym("b"))}});
        if (d.gbar.has_value())
            rep.pass("exactness.closedform",
                     "locus g=b M=" + d.multiplier->str() + " Gbar=" +
                         compact(to_string(*d.gbar)));
        else
            rep.fail("exactness.closedform", "certificate missing on locus g=b");
    } else if (base.name == "euler_rotor_dissipative") {
        DerivedBiHamiltonian d = derive_biham(base);
        if (d.gbar.has_value())
            rep.pass("exactness.closedform", "M=" + d.multiplier->str() + " Gbar=" +
                                                 compact(to_string(*d.gbar)));
        else
            rep.fail("exactness.closedform", "momentum sphere certificate missing");
    }
    return rep;
}

inline Report factorize_report(const ResistiveSystem& base) {
    Report rep;
    rep.subject = base.name;
    if (base.name != "euler_rotor" && base.name != "euler_rotor_dissipative") return rep;
    FracVec3 n = n_vector(base);
    FracMat3 nm(PolyMat3::skew_of(n.num()), n.den());
    if (factorize_check(nm, base.J, base.R))
        rep.pass("factorize.euler", "N=JR+RJ");
    else
        rep.fail("factorize.euler", "component and matrix routes disagree");
    return rep;
}

/// Full verification battery for one system. A nonempty parameter binding
/// restricts the battery to structural checks: classification rules,
/// conformal tables and certificates describe the generic parameter family.
inline Report run_battery(const ResistiveSystem& base, bool symbolic,
                          const std::map<SymId, Poly>& bind) {
    Report rep;
    rep.subject = base.name;
    if (bind.empty()) {
        rep.append(verify_system(base));
        rep.append(classify_n(base));
        rep.append(jordan_identity_check(base.J, base.R, base.name));
        rep.append(verify_conformal(base));
        rep.append(exactness_report(base, symbolic));
        rep.append(factorize_report(base));
        return rep;
    }
    ResistiveSystem sys = base.substituted(bind);
    rep.append(verify_system(sys));
    PolyFrac res = n_jacobi_residual(sys);
    if (res.is_zero())
        rep.pass("n.jacobi", "residual=0");
    else
        rep.info("n.jacobi", "nonzero");
    rep.append(jordan_identity_check(sys.J, sys.R, sys.name));
    return rep;
}

inline void print_derived(std::ostream& out, const std::string& source,
                          const FracVec3& n, const std::string& g_line,
                          const std::string& gbar_line, const std::string& m_line,
                          const FracVec3& rhs) {
    out << "# source=" << source << '\n';
    out << "# N=" << to_string(n) << '\n';
    out << "# G=" << g_line << '\n';
    out << "# Gbar=" << gbar_line << '\n';
    out << "# M=" << m_line << '\n';
    const char* lhs[3] = {"dx/dt", "dy/dt", "dz/dt"};
    for (int i = 0; i < 3; ++i)
        out << lhs[i] << " = " << to_string(rhs.component(i)) << '\n';
}

inline void print_biham(std::ostream& out, const DerivedBiHamiltonian& d) {
    std::string gbar_line = "none", m_line = "none";
    if (d.gbar.has_value()) {
        gbar_line = to_string(*d.gbar);
        m_line = d.multiplier->str();
    } else if (d.gbar_form.has_value()) {
        gbar_line = kGbarLiteral;
        m_line = kMultiplierLiteral;
    }
    print_derived(out, d.source, d.n, to_string(d.g), gbar_line, m_line, d.rhs);
}

// ---------------------------------------------------------------------------
// Subcommand bodies

inline int cmd_list(std::ostream& out) {
    for (const auto& s : registry().all()) out << s.name << '\n';
    return 0;
}

/// Looks a system up or reports exit code 2 through `code`.
inline const ResistiveSystem* lookup(const std::string& name, std::ostream& err,
                                     int& code) {
    if (!registry().contains(name)) {
        err << "error: unknown system '" << name << "'\n";
        code = 2;
        return nullptr;
    }
    return &registry().find(name);
}

inline int cmd_describe(const std::string& name, std::ostream& out) {
    const ResistiveSystem& s = registry().find(name);
    out << "name: " << s.name << '\n';
    out << "dimension: " << s.dimension << '\n';
    out << "params: ";
    for (std::size_t i = 0; i < s.params.size(); ++i) {
        if (i) out << ", ";
        out << sym_name(s.params[i].symbol) << '=' << s.params[i].default_value.str();
    }
    out << '\n';
    out << "H: " << to_string(s.H) << '\n';
    out << "J: " << to_string(s.J) << '\n';
    out << "R: " << to_string(s.R) << '\n';
    out << "V: " << to_string(s.V) << '\n';
    out << "rhs: " << to_string(s.reference_rhs) << '\n';
    return 0;
}

inline int cmd_verify(const std::string& target, bool symbolic,
                      const std::vector<std::string>& params, std::ostream& out,
                      std::ostream& err) {
    std::map<SymId, Poly> bind;
    try {
        bind = parse_param_subst(params);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    bool ok = true;
    if (target == "all") {
        for (const auto& s : registry().all()) {
            out << "# system: " << s.name << '\n';
            Report rep = run_battery(s, symbolic, bind);
            print_report(out, rep);
            ok = ok && rep.all_pass();
        }
    } else {
        int code = 0;
        const ResistiveSystem* s = lookup(target, err, code);
        if (s == nullptr) return code;
        Report rep = run_battery(*s, symbolic, bind);
        print_report(out, rep);
        ok = rep.all_pass();
    }
    return ok ? 0 : 1;
}

inline int cmd_simulate(const std::string& name, const std::string& x0_text,
                        const std::vector<std::string>& params, double t0, double t1,
                        double dt, const std::string& method, const std::string& out_path,
                        const std::string& format, std::ostream& err) {
    IntegratorConfig cfg;
    std::array<double, 3> x0{};
    CompiledVec3 rhs;
    CompiledPoly rate;
    std::vector<ChannelSpec> channels;
    try {
        int code = 0;
        const ResistiveSystem* sp = lookup(name, err, code);
        if (sp == nullptr) return code;
        const ResistiveSystem& s = *sp;

        cfg.method = method == "rk45" ? Method::rk45 : Method::rk4;
        cfg.step = dt;
        cfg.t_start = t0;
        cfg.t_end = t1;
        cfg.param_bindings = s.default_bindings();
        for (const auto& [k, v] : parse_param_doubles(params)) cfg.param_bindings[k] = v;
        x0 = parse_x0(x0_text);

        rhs = compile(s.reference_rhs, cfg.param_bindings);
        rate = compile(dot(grad(s.H), s.reference_rhs), cfg.param_bindings);
        CompiledPoly h = compile(s.H, cfg.param_bindings);
        CompiledPoly div = compile(field_divergence(s), cfg.param_bindings);
        channels.push_back(
            {"H", [h](double, const std::array<double, 3>& x) { return h.eval(x); }});
        channels.push_back(
            {"div", [div](double, const std::array<double, 3>& x) { return div.eval(x); }});
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    Trajectory traj = integrate(rhs, x0, cfg, channels, &rate);

    std::ofstream f(out_path);
    if (!f) {
        err << "error: cannot open '" << out_path << "' for writing\n";
        return 2;
    }
    if (format == "json")
        write_json(f, traj, cfg);
    else
        write_csv(f, traj);

    if (traj.diverged) {
        err << "error: trajectory diverged at t=" << traj.times.back()
            << "; partial trajectory written\n";
        return 1;
    }
    return 0;
}

inline int cmd_derive(const std::string& name, const std::string& kind,
                      const std::optional<std::string>& g_text,
                      const std::optional<std::string>& delta_text, std::ostream& out,
                      std::ostream& err) {
    int code = 0;
    const ResistiveSystem* sp = lookup(name, err, code);
    if (sp == nullptr) return code;
    const ResistiveSystem& s = *sp;
    if (g_text.has_value() && kind != "biham") {
        err << "error: --G applies to --kind biham only\n";
        return 2;
    }
    if (delta_text.has_value() && kind != "jordan") {
        err << "error: --delta applies to --kind jordan only\n";
        return 2;
    }

    std::optional<PolyFrac> g;
    std::optional<Rational> delta;
    try {
        if (g_text) g = PolyFrac(parse_poly(*g_text));
        if (delta_text) delta = parse_rational(*delta_text);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    if (kind == "biham") {
        print_biham(out, derive_biham(s, g));
        return 0;
    }

    if (kind == "jordan") {
        std::optional<OrthoMat3> t;
        try {
            t = delta ? OrthoMat3::at_delta(*delta) : OrthoMat3::delta_family();
        } catch (const Error& e) {
            err << "error: " << e.what() << '\n';
            return 2;
        }
        JordanTransformed jt = jordan_transform(s.J, s.R, *t);
        FracVec3 nvec = skew_to_vec(jt.n);
        FracVec3 rhs = generate_biham(nvec, s.H);
        if (delta.has_value() && *delta == 1) {
            DerivedBiHamiltonian d = derive_biham(s);
            if (nvec != d.n || rhs != d.rhs)
                throw Error("internal: delta=1 family does not collapse to the base");
            print_biham(out, d);
        } else {
            print_derived(out, s.name, nvec, to_string(s.H), "none", "none", rhs);
        }
        return 0;
    }

    // conformal
    auto it = conformal_table().find(s.name);
    if (it == conformal_table().end()) {
        err << "error: no conformal decomposition recorded for '" << s.name << "'\n";
        return 1;
    }
    const ConformalDecomposition& d = it->second;
    PolyVec3 field = conformal_field(d);
    out << "# source=" << d.system << '\n';
    out << "# constraint=" << d.constraint_text << '\n';
    out << "# H=" << to_string(d.h) << '\n';
    out << "# a=" << to_string(d.a) << '\n';
    const char* lhs[3] = {"dx/dt", "dy/dt", "dz/dt"};
    for (int i = 0; i < 3; ++i) out << lhs[i] << " = " << to_string(field[i]) << '\n';
    return 0;
}

inline int cmd_report(std::ostream& out) {
    static const std::vector<std::string> cols{
        "jacobi.J",        "rhs.match",       "div.match",      "energyrate.match",
        "n.jacobi",        "jordan.identity", "exactness.closedform",
        "conformal.match", "conformal.div3a", "factorize.euler"};

    bool ok = true;
    std::vector<std::pair<std::string, std::map<std::string, CheckStatus>>> rows;
    for (const auto& s : registry().all()) {
        Report rep = run_battery(s, false, {});
        ok = ok && rep.all_pass();
        std::map<std::string, CheckStatus> merged;
        for (const auto& c : rep.checks) {
            auto it = merged.find(c.id);
            if (it == merged.end()) {
                merged[c.id] = c.status;
            } else if (c.status == CheckStatus::fail || it->second == CheckStatus::fail) {
                it->second = CheckStatus::fail;
            } else if (c.status == CheckStatus::pass || it->second == CheckStatus::pass) {
                it->second = CheckStatus::pass;
            }
        }
        rows.emplace_back(s.name, std::move(merged));
    }

    std::size_t w0 = std::string("system").size();
    for (const auto& [name, cells] : rows) w0 = std::max(w0, name.size());
    auto emit_row = [&](const std::string& head, const std::vector<std::string>& cells) {
        std::string line = head + std::string(w0 - head.size(), ' ');
        for (std::size_t i = 0; i < cols.size(); ++i) {
            line += "  " + cells[i];
            line += std::string(cols[i].size() - cells[i].size(), ' ');
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << '\n';
    };
    emit_row("system", cols);
    for (const auto& [name, cells] : rows) {
        std::vector<std::string> vals;
        for (const auto& c : cols) {
            auto it = cells.find(c);
            if (it == cells.end())
                vals.push_back("-");
            else
                vals.push_back(it->second == CheckStatus::pass   ? "PASS"
                               : it->second == CheckStatus::fail ? "FAIL"
                                                                 : "INFO");
        }
        emit_row(name, vals);
    }
    return ok ? 0 : 1;
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    CLI::App app{"resistive-Hamiltonian systems: verification, derivation, simulation"};
    app.name("rham");

    auto* c_list = app.add_subcommand("list", "list registered systems");

    std::string d_system;
    auto* c_desc = app.add_subcommand("describe", "print one system's data");
    c_desc->add_option("system", d_system, "system name")->required();

    std::string v_target;
    bool v_symbolic = false;
    std::vector<std::string> v_params;
    auto* c_verify = app.add_subcommand("verify", "run the verification battery");
    c_verify->add_option("system", v_target, "system name or 'all'")->required();
    c_verify->add_flag("--symbolic", v_symbolic, "exact checks only, skip float sampling");
    c_verify->add_option("--param", v_params, "bind a parameter, name=rational")
        ->type_size(1)
        ->take_all();

    std::string s_system, s_x0, s_method = "rk4", s_out, s_format = "csv";
    std::vector<std::string> s_params;
    double s_t0 = 0.0, s_t1 = 10.0, s_dt = 1e-3;
    auto* c_sim = app.add_subcommand("simulate", "integrate a system numerically");
    c_sim->add_option("system", s_system, "system name")->required();
    c_sim->add_option("--x0", s_x0, "initial state a,b,c")->required();
    c_sim->add_option("--param", s_params, "bind a parameter, name=value")
        ->type_size(1)
        ->take_all();
    c_sim->add_option("--t0", s_t0, "start time");
    c_sim->add_option("--t1", s_t1, "end time");
    c_sim->add_option("--dt", s_dt, "step (rk4) or initial step (rk45)");
    c_sim->add_option("--method", s_method, "integrator")
        ->check(CLI::IsMember({"rk4", "rk45"}));
    c_sim->add_option("--out", s_out, "output file")->required();
    c_sim->add_option("--format", s_format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));

    std::string dv_system, dv_kind;
    std::string dv_g, dv_delta;
    auto* c_derive = app.add_subcommand("derive", "derive a companion system");
    c_derive->add_option("system", dv_system, "system name")->required();
    c_derive->add_option("--kind", dv_kind, "derivation kind")
        ->required()
        ->check(CLI::IsMember({"biham", "jordan", "conformal"}));
    auto* opt_g = c_derive->add_option("--G", dv_g, "second Hamiltonian (biham)");
    auto* opt_delta = c_derive->add_option("--delta", dv_delta, "rational Delta (jordan)");

    auto* c_report = app.add_subcommand("report", "systems x checks status table");

    app.require_subcommand(0, 1);

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (c_list->parsed()) return detail::cmd_list(out);
        if (c_desc->parsed()) {
            int code = 0;
            if (detail::lookup(d_system, err, code) == nullptr) return code;
            return detail::cmd_describe(d_system, out);
        }
        if (c_verify->parsed())
            return detail::cmd_verify(v_target, v_symbolic, v_params, out, err);
        if (c_sim->parsed())
            return detail::cmd_simulate(s_system, s_x0, s_params, s_t0, s_t1, s_dt,
                                        s_method, s_out, s_format, err);
        if (c_derive->parsed()) {
            std::optional<std::string> g, delta;
            if (opt_g->count()) g = dv_g;
            if (opt_delta->count()) delta = dv_delta;
            return detail::cmd_derive(dv_system, dv_kind, g, delta, out, err);
        }
        if (c_report->parsed()) return detail::cmd_report(out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    out << app.help();
    return 0;
}

}  // namespace rham::cli
