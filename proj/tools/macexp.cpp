#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "macexp/macexp.hpp"

namespace {

using namespace macexp;

struct Options {
    std::string model = "paper-example";
    std::vector<double> gamma;
    int grid = 0;
    int hull_grid = 1025;
    double tol = 1e-6;
    int jobs = 1;  // accepted for interface stability; evaluation is sequential
    bool bits = false;
    bool rho_mode = false;
    std::string tau = "both";
    std::vector<int> classes = {1, 1};
};

SystemModel load_model(const std::string& name) {
    SystemModel m;
    if (lookup_fixture(name, m)) return m;
    std::ifstream in(name);
    if (!in) throw std::invalid_argument("cannot open model file: " + name);
    std::stringstream ss;
    ss << in.rdbuf();
    std::vector<std::string> warnings;
    m = parse_model(ss.str(), &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    return m;
}

double disp(double v, const Options& o) { return o.bits ? v / std::log(2.0) : v; }

ErrorType parse_tau(const std::string& s) {
    if (s == "1" || s == "user1") return ErrorType::User1;
    if (s == "2" || s == "user2") return ErrorType::User2;
    if (s == "both" || s == "12") return ErrorType::Both;
    throw std::invalid_argument("bad --tau value: " + s);
}

int cmd_exponent(const Options& o) {
    Evaluator ev(load_model(o.model));
    if (!o.gamma.empty()) {
        GammaParams gp = ev.gamma_params(o.gamma[0], o.gamma[1]);
        std::printf("exponent = %.6f\n", disp(ev.d_full(gp).as_double(), o));
        std::printf("gamma1 = %.6f\ngamma2 = %.6f\n", o.gamma[0], o.gamma[1]);
    } else {
        ExponentReport rep = achievable_exponent(ev, o.hull_grid);
        std::printf("exponent = %.6f\n", disp(rep.exponent, o));
        std::printf("gamma1 = %.6f\ngamma2 = %.6f\n", rep.gamma_star[0],
                    rep.gamma_star[1]);
        std::printf("lower = %.6f\nupper = %.6f\n", disp(rep.lower, o),
                    disp(rep.upper, o));
        return 0;
    }
    LowerBoundResult lb = lower_bound(ev);
    UpperBoundResult ub = upper_bound(ev, o.hull_grid);
    std::printf("lower = %.6f\nupper = %.6f\n", disp(lb.value, o),
                disp(ub.value, o));
    return 0;
}

int cmd_bounds(const Options& o) {
    Evaluator ev(load_model(o.model));
    LowerBoundResult lb = lower_bound(ev);
    UpperBoundResult ub = upper_bound(ev, o.hull_grid);
    std::printf("lower = %.6f\n", disp(lb.value, o));
    std::printf("lower_assignment = %d,%d\n", lb.best_assignment.first,
                lb.best_assignment.second);
    std::printf("upper = %.6f\n", disp(ub.value, o));
    std::printf("upper_cells = %.6f,%.6f,%.6f\n", disp(ub.cells[0], o),
                disp(ub.cells[1], o), disp(ub.cells[2], o));
    return 0;
}

int cmd_thresholds(const Options& o) {
    Evaluator ev(load_model(o.model));
    auto [gamma, trace] = solve_thresholds(ev);
    std::printf("gamma1 = %.6f\ngamma2 = %.6f\n", gamma[0], gamma[1]);
    GammaParams gp = ev.gamma_params(gamma[0], gamma[1]);
    std::printf("d = %.6f\n", disp(ev.d_full(gp).as_double(), o));
    std::printf("crossings = %d\n", trace.crossings_found);
    std::printf("grid_won = %s\n", trace.grid_won ? "yes" : "no");
    for (const auto& n : trace.notes) std::printf("note: %s\n", n.c_str());
    return 0;
}

void print_table_row(const char* tag, const char* tau,
                     const std::array<ExtReal, 4>& row, const Options& o) {
    std::printf("%s,%s", tag, tau);
    for (const auto& v : row) {
        if (v.is_plus_inf()) std::printf(",inf");
        else if (v.is_minus_inf()) std::printf(",-inf");
        else std::printf(",%.4f", disp(v.value(), o));
    }
    std::printf("\n");
}

int cmd_tables(const Options& o) {
    Evaluator ev(load_model(o.model));
    std::array<double, 2> gamma{};
    if (!o.gamma.empty()) gamma = {o.gamma[0], o.gamma[1]};
    else gamma = solve_thresholds(ev).first;
    GammaParams gp = ev.gamma_params(gamma[0], gamma[1]);

    const char* tau_name[3] = {"1", "2", "12"};
    // columns in (i1,i2) order (1,1), (2,1), (1,2), (2,2)
    const int cols[4][2] = {{1, 1}, {2, 1}, {1, 2}, {2, 2}};
    ErrorType taus[3] = {ErrorType::User1, ErrorType::User2, ErrorType::Both};
    for (int t = 0; t < 3; ++t) {
        std::array<ExtReal, 4> row;
        for (int c = 0; c < 4; ++c)
            row[c] = ev.cell(taus[t], cols[c][0], cols[c][1], gp).value;
        print_table_row("F", tau_name[t], row, o);
    }
    for (int t = 0; t < 3; ++t) {
        std::array<ExtReal, 4> row;
        for (int c = 0; c < 4; ++c)
            row[c] = ev.cell_plain(taus[t], cols[c][0], cols[c][1]).value;
        print_table_row("FL", tau_name[t], row, o);
    }
    UpperBoundResult ub = upper_bound(ev, o.hull_grid);
    std::printf("FU,%.4f,%.4f,%.4f\n", disp(ub.cells[0], o), disp(ub.cells[1], o),
                disp(ub.cells[2], o));
    return 0;
}

int cmd_sweep(const Options& o) {
    Evaluator ev(load_model(o.model));
    if (o.rho_mode) {
        if (o.gamma.empty())
            throw std::invalid_argument("sweep --rho needs --gamma G1 G2");
        int n = o.grid > 0 ? o.grid : 201;
        ErrorType tau = parse_tau(o.tau);
        GammaParams gp = ev.gamma_params(o.gamma[0], o.gamma[1]);
        std::printf("rho,objective\n");
        ExtReal probe = ev.cell_grid(tau, o.classes[0], o.classes[1], gp);
        if (!probe.is_finite()) {
            for (int j = 0; j < n; ++j)
                std::printf("%.9g,inf\n", static_cast<double>(j) / (n - 1));
            return 0;
        }
        auto obj = ev.objective(tau, o.classes[0], o.classes[1], gp);
        for (int j = 0; j < n; ++j) {
            double rho = static_cast<double>(j) / (n - 1);
            std::printf("%.9g,%.9g\n", rho, disp(obj(rho), o));
        }
        return 0;
    }
    int n = o.grid > 0 ? o.grid : 64;
    std::printf("gamma1,gamma2,d\n");
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double g1 = static_cast<double>(a) / (n - 1);
            double g2 = static_cast<double>(b) / (n - 1);
            double v = ev.d_full(ev.gamma_params(g1, g2)).as_double();
            std::printf("%.9g,%.9g,%.9g\n", g1, g2, disp(v, o));
        }
    return 0;
}

int cmd_verify(const Options& o) {
    Evaluator ev(load_model(o.model));
    bool ok = true;
    auto report = [&](bool pass, const std::string& what, double worst) {
        std::printf("%s: %s (worst %.3e)\n", pass ? "ok" : "FAIL", what.c_str(), worst);
        if (!pass) ok = false;
    };

    // implicit-equation back-substitution residuals
    double worst = 0.0;
    for (int nu = 0; nu < 2; ++nu) {
        const SourceSpec& src = ev.model().source(nu);
        for (int j = 1; j < 100; ++j) {
            double g = j / 100.0;
            RhoGamma rg = solve_rho_gamma(g, src);
            if (!rg.interior()) continue;
            double r = std::fabs(detail::tilted_log_mean_beta(rg.beta_gamma, src) -
                                 std::log(g));
            worst = std::max(worst, r);
        }
    }
    report(worst < 1e-10, "rho_gamma back-substitution residual", worst);

    // analytic derivative vs centered differences
    worst = 0.0;
    for (int nu = 0; nu < 2; ++nu) {
        const SourceSpec& src = ev.model().source(nu);
        for (double rho : {0.1, 0.5, 0.9}) {
            double fd = oracle::fd_derivative(
                [&](double r) { return e_s(r, src); }, rho, 1e-5);
            worst = std::max(worst, std::fabs(fd - e_s_prime(rho, src)));
        }
    }
    report(worst < 1e-6, "e_s_prime vs finite differences", worst);

    // golden-section maxima vs dense-grid maxima on every cell
    auto [gamma, trace] = solve_thresholds(ev);
    GammaParams gp = ev.gamma_params(gamma[0], gamma[1]);
    worst = 0.0;
    for (ErrorType tau : {ErrorType::User1, ErrorType::User2, ErrorType::Both})
        for (int a = 1; a <= 2; ++a)
            for (int b = 1; b <= 2; ++b) {
                ObjectiveCell c = ev.cell(tau, a, b, gp);
                if (!c.value.is_finite()) continue;
                auto [x, v] = oracle::grid_max_rho(ev.objective(tau, a, b, gp), 10001);
                worst = std::max(worst, std::fabs(v - c.value.value()));
            }
    report(worst < 1e-6, "golden-section vs 1e4-point grid maxima", worst);

    // solver exponent dominates the threshold-grid maximum
    int n = o.grid > 0 ? o.grid : 32;
    oracle::GammaSweep sweep = oracle::gamma_sweep(ev, n);
    double expo = ev.d_full(gp).as_double();
    report(sweep.max_value <= expo + 1e-6, "solver exponent vs gamma-grid maximum",
           sweep.max_value - expo);

    return ok ? 0 : 3;
}

int cmd_validate(const Options& o) {
    SystemModel m = load_model(o.model);
    auto violations = validate(m);
    if (violations.empty()) {
        std::printf("ok\n");
        return 0;
    }
    for (const auto& v : violations) std::printf("violation: %s\n", v.c_str());
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"error exponents for two-user multiple-access joint "
                 "source-channel coding with two-class message-dependent codebooks"};
    app.require_subcommand(1);

    Options o;
    std::string cmd_name;
    auto add_common = [&](CLI::App* sub, bool with_gamma = true) {
        sub->add_option("model,--model", o.model, "model file path or fixture name");
        if (with_gamma)
            sub->add_option("--gamma", o.gamma, "fixed thresholds g1 g2")
                ->expected(2);
        sub->add_option("--grid", o.grid, "grid resolution");
        sub->add_option("--hull-grid", o.hull_grid, "envelope sampling resolution");
        sub->add_option("--tol", o.tol, "comparison tolerance");
        sub->add_option("--jobs", o.jobs, "worker count (accepted; sequential)");
        sub->add_flag("--bits", o.bits, "display values in bits instead of nats");
    };

    add_common(app.add_subcommand("exponent", "achievable exponent and bounds"));
    add_common(app.add_subcommand("bounds", "lower and upper bounds"));
    add_common(app.add_subcommand("thresholds", "optimal partition thresholds"), false);
    add_common(app.add_subcommand("tables", "objective tables"));
    {
        CLI::App* sub = app.add_subcommand("sweep", "CSV sweep data");
        add_common(sub);
        sub->add_flag("--rho", o.rho_mode, "sweep the inner objective over rho");
        sub->add_option("--tau", o.tau, "error type for --rho: 1|2|both");
        sub->add_option("--classes", o.classes, "class pair i1 i2 for --rho")
            ->expected(2);
    }
    add_common(app.add_subcommand("verify", "brute-force consistency audit"), false);
    add_common(app.add_subcommand("validate", "check a model file"), false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }

    try {
        std::string name = app.get_subcommands().front()->get_name();
        if (name == "exponent") return cmd_exponent(o);
        if (name == "bounds") return cmd_bounds(o);
        if (name == "thresholds") return cmd_thresholds(o);
        if (name == "tables") return cmd_tables(o);
        if (name == "sweep") return cmd_sweep(o);
        if (name == "verify") return cmd_verify(o);
        if (name == "validate") return cmd_validate(o);
        return 2;
    } catch (const macexp::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
