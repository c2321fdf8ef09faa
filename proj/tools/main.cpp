// varshrink command line: threshold queries, risk curves, dominance scans,
// and the Bayes/proof verification suites.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "varshrink/bayes_verify.hpp"
#include "varshrink/minimax.hpp"
#include "varshrink/model.hpp"
#include "varshrink/risk.hpp"
#include "varshrink/sampling.hpp"
#include "varshrink/version.hpp"

namespace vs = varshrink;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

std::string fmt17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// 12 significant digits, trailing zeros kept.
std::string fmt_sig12(double v) {
    int digits = 11;
    if (v > 0.0) digits -= static_cast<int>(std::floor(std::log10(v)));
    digits = std::clamp(digits, 0, 17);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

std::vector<double> parse_tau_grid(const std::string& text) {
    std::vector<double> grid;
    const auto colon = std::count(text.begin(), text.end(), ':');
    if (colon == 2) {
        double start = 0.0;
        double stop = 0.0;
        double step = 0.0;
        char c1 = 0;
        char c2 = 0;
        std::istringstream in(text);
        if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' ||
            !(step > 0.0) || stop < start) {
            throw std::invalid_argument("bad --tau-grid range '" + text + "'");
        }
        for (double t = start; t <= stop + 1e-9 * step; t += step) {
            grid.push_back(t);
        }
    } else {
        std::istringstream in(text);
        std::string item;
        while (std::getline(in, item, ',')) {
            if (item.empty()) continue;
            grid.push_back(std::stod(item));
        }
    }
    if (grid.empty()) {
        throw std::invalid_argument("empty --tau-grid");
    }
    for (double t : grid) {
        if (!(t >= 0.0)) throw std::invalid_argument("tau values must be >= 0");
    }
    if (!std::is_sorted(grid.begin(), grid.end())) {
        throw std::invalid_argument("--tau-grid must be ascending");
    }
    return grid;
}

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

void write_comment_header(std::ostream& out, const std::string& command,
                          const ConfigEcho& config) {
    out << "# varshrink " << vs::version << "\n";
    out << "# command: " << command << "\n";
    for (const auto& [key, value] : config) {
        out << "# " << key << "=" << value << "\n";
    }
}

json metadata_json(const std::string& command, const ConfigEcho& config) {
    json meta;
    meta["tool"] = "varshrink";
    meta["version"] = std::string(vs::version);
    meta["command"] = command;
    json cfg;
    for (const auto& [key, value] : config) cfg[key] = value;
    meta["config"] = cfg;
    return meta;
}

struct VerdictRow {
    std::string name;
    std::string operation;
    bool passed = false;
    double margin = 0.0;
    std::string detail;
};

void print_verdicts(const std::vector<VerdictRow>& rows) {
    for (const auto& row : rows) {
        std::printf("%s  %-34s margin=% .6e  [%s]%s%s\n",
                    row.passed ? "PASS" : "FAIL", row.name.c_str(), row.margin,
                    row.operation.c_str(), row.detail.empty() ? "" : "  ",
                    row.detail.c_str());
    }
}

json verdicts_json(const std::vector<VerdictRow>& rows) {
    json verdicts;
    for (const auto& row : rows) {
        json v;
        v["pass"] = row.passed;
        v["operation"] = row.operation;
        v["margin"] = row.margin;
        if (!row.detail.empty()) v["detail"] = row.detail;
        verdicts[row.name] = v;
    }
    return verdicts;
}

bool write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    out << body;
    out.flush();
    return out.good();
}

// ---------------------------------------------------------------------------
// per-command options

struct DimsOpts {
    int p = 4;
    int n = 2;
};

struct EngineOpts {
    int nodes = 128;
    double tail_tol = 1e-12;
    std::size_t samples = 1000000;
    std::uint64_t seed = 42;
};

vs::QuadConfig quad_config(const EngineOpts& eng) {
    vs::QuadConfig cfg;
    cfg.order = eng.nodes;
    cfg.tail_tol = eng.tail_tol;
    return cfg;
}

// alpha given directly or as a fraction of alpha_star
double resolve_alpha(const vs::ProblemDims& dims, std::optional<double> alpha,
                     std::optional<double> alpha_frac, double fallback_frac) {
    if (alpha && alpha_frac) {
        throw std::invalid_argument("give either --alpha or --alpha-frac, not both");
    }
    if (alpha) return *alpha;
    const double frac = alpha_frac ? *alpha_frac : fallback_frac;
    return frac * vs::alpha_star(dims);
}

std::string verdict_name(vs::DominanceVerdict v) {
    switch (v) {
        case vs::DominanceVerdict::dominates: return "dominates";
        case vs::DominanceVerdict::violation: return "violation";
        case vs::DominanceVerdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// alpha-star

int run_alpha_star(const DimsOpts& d) {
    const double value = vs::alpha_star({d.p, d.n});
    std::printf("%s\n", fmt_sig12(value).c_str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// risk

struct RiskOpts {
    DimsOpts dims;
    EngineOpts eng;
    std::string estimator = "best-equivariant";
    std::optional<double> alpha;
    std::optional<double> alpha_frac;
    std::string tau_grid = "0:10:1";
    std::string method = "quad";
    std::string out;  // empty -> stdout
    std::string format = "csv";
};

int run_risk(const RiskOpts& opt) {
    const vs::ProblemDims dims{opt.dims.p, opt.dims.n};
    vs::check_dims(dims);
    vs::EstimatorSpec spec = vs::EstimatorSpec::best_equivariant();
    double alpha_used = 0.0;
    if (opt.estimator == "best-equivariant") {
        spec = vs::EstimatorSpec::best_equivariant();
    } else if (opt.estimator == "stein") {
        spec = vs::EstimatorSpec::stein_truncated();
    } else if (opt.estimator == "simple-bayes") {
        alpha_used = resolve_alpha(dims, opt.alpha, opt.alpha_frac, 1.0);
        spec = vs::EstimatorSpec::simple_bayes(alpha_used);
    } else {
        throw std::invalid_argument("unknown --estimator '" + opt.estimator + "'");
    }
    const auto grid = parse_tau_grid(opt.tau_grid);
    const bool monte_carlo = (opt.method == "mc");
    if (!monte_carlo && opt.method != "quad") {
        throw std::invalid_argument("--method must be quad or mc");
    }

    ConfigEcho config = {
        {"estimator", opt.estimator},
        {"p", std::to_string(dims.p)},
        {"n", std::to_string(dims.n)},
        {"alpha", opt.estimator == "simple-bayes" ? fmt17(alpha_used) : "n/a"},
        {"tau-grid", opt.tau_grid},
        {"method", monte_carlo ? "mc" : "quad"},
        {"nodes", std::to_string(opt.eng.nodes)},
        {"tail-tol", fmt17(opt.eng.tail_tol)},
        {"samples", std::to_string(opt.eng.samples)},
        {"seed", std::to_string(opt.eng.seed)},
    };

    std::vector<vs::RiskEstimate> rows;
    bool truncated = false;
    std::string truncation_note;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        try {
            if (monte_carlo) {
                vs::McConfig mc;
                mc.samples = opt.eng.samples;
                mc.seed = {opt.eng.seed, i};  // per-cell stream from the cell index
                rows.push_back(vs::risk_mc(spec, dims, {grid[i]}, mc));
            } else {
                rows.push_back(
                    vs::risk_exact(spec, dims, {grid[i]}, quad_config(opt.eng)));
            }
        } catch (const vs::TruncationError& e) {
            truncated = true;
            truncation_note = e.what();
            break;
        }
    }

    std::ostringstream body;
    if (opt.format == "json") {
        json doc;
        doc["metadata"] = metadata_json("risk", config);
        json table;
        json tau_col = json::array();
        json risk_col = json::array();
        json err_col = json::array();
        json method_col = json::array();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            tau_col.push_back(grid[i]);
            risk_col.push_back(rows[i].value);
            err_col.push_back(rows[i].error_bound);
            method_col.push_back(monte_carlo ? "monte_carlo" : "quadrature");
        }
        table["tau"] = tau_col;
        table["risk"] = risk_col;
        table["error_bound"] = err_col;
        table["method"] = method_col;
        doc["tables"] = json{{"risk", table}};
        doc["verdicts"] = json::object();
        body << doc.dump(2) << "\n";
    } else if (opt.format == "csv") {
        write_comment_header(body, "risk", config);
        body << "tau,risk,error_bound,method\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            body << fmt17(grid[i]) << ',' << fmt17(rows[i].value) << ','
                 << fmt17(rows[i].error_bound) << ','
                 << (monte_carlo ? "monte_carlo" : "quadrature") << "\n";
        }
    } else {
        throw std::invalid_argument("--format must be csv or json");
    }

    if (opt.out.empty()) {
        std::cout << body.str();
    } else if (!write_file(opt.out, body.str())) {
        std::cerr << "error: cannot write " << opt.out << "\n";
        return kExitUsage;
    }
    if (truncated) {
        std::cerr << "warning: partial output, " << truncation_note << "\n";
        return kExitCheckFailed;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// dominance

struct DominanceOpts {
    DimsOpts dims;
    EngineOpts eng;
    std::optional<double> alpha;
    std::optional<double> alpha_frac;
    std::string tau_grid;  // empty -> default grid
    double tol = 1e-8;
    std::string out;
    std::string format = "csv";
};

int run_dominance(const DominanceOpts& opt) {
    const vs::ProblemDims dims{opt.dims.p, opt.dims.n};
    vs::check_dims(dims);
    const double alpha = resolve_alpha(dims, opt.alpha, opt.alpha_frac, 1.0);
    const std::vector<double> grid =
        opt.tau_grid.empty() ? vs::default_tau_grid() : parse_tau_grid(opt.tau_grid);
    const auto report =
        vs::dominance_scan(alpha, dims, grid, quad_config(opt.eng), opt.tol);

    ConfigEcho config = {
        {"p", std::to_string(dims.p)},
        {"n", std::to_string(dims.n)},
        {"alpha", fmt17(alpha)},
        {"alpha-star", fmt17(vs::alpha_star(dims))},
        {"tau-grid", opt.tau_grid.empty() ? "default" : opt.tau_grid},
        {"tol", fmt17(opt.tol)},
        {"nodes", std::to_string(opt.eng.nodes)},
        {"tail-tol", fmt17(opt.eng.tail_tol)},
    };

    std::printf("alpha = %s (alpha* = %s)\n", fmt_sig12(alpha).c_str(),
                fmt_sig12(vs::alpha_star(dims)).c_str());
    for (const auto& cell : report.cells) {
        if (cell.ok) {
            std::printf("tau = %-8g Delta = % .12e  (+- %.2e)\n", cell.tau,
                        cell.delta, cell.error_bound);
        } else {
            std::printf("tau = %-8g Delta = <truncated>\n", cell.tau);
        }
    }
    std::printf("verdict: %s (min Delta = %.12e at tau = %g)\n",
                verdict_name(report.verdict).c_str(), report.min_delta,
                report.argmin_tau);

    if (!opt.out.empty()) {
        std::ostringstream body;
        if (opt.format == "json") {
            json doc;
            doc["metadata"] = metadata_json("dominance", config);
            json table;
            json tau_col = json::array();
            json delta_col = json::array();
            json err_col = json::array();
            for (const auto& cell : report.cells) {
                tau_col.push_back(cell.tau);
                delta_col.push_back(cell.delta);
                err_col.push_back(cell.error_bound);
            }
            table["tau"] = tau_col;
            table["delta"] = delta_col;
            table["error_bound"] = err_col;
            doc["tables"] = json{{"delta_scan", table}};
            json verdict;
            verdict["pass"] = (report.verdict == vs::DominanceVerdict::dominates);
            verdict["operation"] = "dominance_scan";
            verdict["verdict"] = verdict_name(report.verdict);
            verdict["min_delta"] = report.min_delta;
            verdict["argmin_tau"] = report.argmin_tau;
            doc["verdicts"] = json{{"dominance", verdict}};
            body << doc.dump(2) << "\n";
        } else {
            write_comment_header(body, "dominance", config);
            body << "tau,delta,error_bound,ok\n";
            for (const auto& cell : report.cells) {
                body << fmt17(cell.tau) << ',' << fmt17(cell.delta) << ','
                     << fmt17(cell.error_bound) << ',' << (cell.ok ? 1 : 0) << "\n";
            }
        }
        if (!write_file(opt.out, body.str())) {
            std::cerr << "error: cannot write " << opt.out << "\n";
            return kExitUsage;
        }
    }

    switch (report.verdict) {
        case vs::DominanceVerdict::dominates:
            return kExitOk;
        case vs::DominanceVerdict::violation:
            std::cerr << "dominance violated beyond tolerance\n";
            return kExitCheckFailed;
        case vs::DominanceVerdict::inconclusive:
            std::cerr << "scan inconclusive (borderline deficit or truncated cells)\n";
            return kExitCheckFailed;
    }
    return kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOpts {
    std::string suite = "all";
    std::optional<int> p;
    std::optional<int> n;
    std::optional<double> a;
    std::optional<double> alpha;
    std::optional<double> alpha_frac;
    EngineOpts eng;
    std::string out;
};

std::vector<double> monotone_grid() {
    std::vector<double> grid{0.0};
    for (int i = 0; i < 999; ++i) {
        grid.push_back(1e-3 * std::pow(10.0, 5.0 * i / 998.0));
    }
    return grid;
}

std::string cell_tag(const vs::ProblemDims& dims) {
    return "p" + std::to_string(dims.p) + "_n" + std::to_string(dims.n);
}

void append_proof_verdicts(std::vector<VerdictRow>& rows,
                           const vs::ProblemDims& dims, double alpha,
                           const vs::QuadConfig& cfg, std::uint64_t seed) {
    const std::string tag = cell_tag(dims);

    std::vector<double> x_grid;
    for (int i = 1; i <= 999; ++i) x_grid.push_back(i / 1000.0);
    const auto log_bound = vs::audit_log_bound(x_grid);
    rows.push_back({"proof.log_bound", "audit_log_bound", log_bound.passed,
                    log_bound.worst_margin, ""});

    const auto grid = monotone_grid();
    const auto mono = vs::audit_monotone(alpha, grid);
    rows.push_back({"proof.monotone." + tag, "audit_monotone", mono.passed,
                    mono.worst_margin, "alpha=" + fmt17(alpha)});

    const auto sign = vs::audit_kj_sign(200, 1000, {seed, 0});
    rows.push_back({"proof.kj_sign", "audit_kj_sign", sign.passed,
                    sign.worst_margin, ""});

    const auto moment = vs::audit_kj_moment(alpha, dims, 0, 50, cfg);
    rows.push_back({"proof.kj_moment." + tag, "audit_kj_moment", moment.passed,
                    moment.worst_margin, "alpha=" + fmt17(alpha)});

    const auto final_ineq = vs::audit_final_inequality(alpha, dims);
    rows.push_back({"proof.final_ineq." + tag, "audit_final_inequality",
                    final_ineq.passed, final_ineq.worst_margin,
                    "alpha=" + fmt17(alpha)});
}

void append_bayes_verdicts(std::vector<VerdictRow>& rows,
                           const vs::PriorHyper& hyper, const vs::QuadConfig& cfg,
                           std::uint64_t seed) {
    const std::string tag = cell_tag(hyper.dims) + "_a=" + fmt17(hyper.a);
    vs::Rng rng({seed, 17});

    std::vector<std::pair<double, double>> points;
    for (int i = 0; i < 20; ++i) {
        points.push_back({0.1 + 9.9 * rng.uniform(), 0.1 + 9.9 * rng.uniform()});
    }
    const auto ratio = vs::marginal_check(points, hyper, cfg);
    rows.push_back({"bayes.marginal_ratio." + tag, "marginal_check",
                    ratio.max_rel_spread <= 1e-6, 1e-6 - ratio.max_rel_spread,
                    "spread=" + fmt17(ratio.max_rel_spread)});

    double worst_grad = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double x_sq = 0.2 + 6.0 * rng.uniform();
        const double s = 0.2 + 6.0 * rng.uniform();
        const auto [rel_x, rel_s] = vs::gradient_identity_check(x_sq, s, hyper, 1e-5);
        worst_grad = std::max({worst_grad, rel_x, rel_s});
    }
    rows.push_back({"bayes.gradients." + tag, "gradient_identity_check",
                    worst_grad <= 1e-8, 1e-8 - worst_grad, ""});

    double worst_post = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double x_sq = 0.2 + 6.0 * rng.uniform();
        const double s = 0.2 + 6.0 * rng.uniform();
        const auto pc = vs::posterior_estimates_numeric(x_sq, s, hyper, cfg);
        worst_post = std::max(
            {worst_post,
             std::abs(pc.shrink_numeric - pc.shrink_closed) / pc.shrink_closed,
             std::abs(pc.sigma2_numeric - pc.sigma2_closed) / pc.sigma2_closed});
    }
    rows.push_back({"bayes.posterior." + tag, "posterior_estimates_numeric",
                    worst_post <= 1e-5, 1e-5 - worst_post, ""});
}

int run_verify(const VerifyOpts& opt) {
    if (opt.suite != "bayes" && opt.suite != "proof" && opt.suite != "all") {
        throw std::invalid_argument("verify suite must be bayes, proof, or all");
    }
    const vs::QuadConfig cfg = quad_config(opt.eng);
    std::vector<VerdictRow> rows;

    const bool explicit_cell = opt.p.has_value() || opt.n.has_value();
    std::vector<vs::ProblemDims> proof_cells;
    std::vector<vs::PriorHyper> bayes_cells;
    if (explicit_cell) {
        const vs::ProblemDims dims{opt.p.value_or(4), opt.n.value_or(2)};
        vs::check_dims(dims);
        proof_cells.push_back(dims);
        bayes_cells.push_back({opt.a.value_or(0.0), dims});
    } else {
        proof_cells = {{1, 1}, {3, 5}, {4, 2}, {10, 10}};
        bayes_cells = {{-2.0, {4, 2}}, {0.0, {3, 5}}, {1.0, {10, 10}}};
    }

    if (opt.suite == "proof" || opt.suite == "all") {
        for (const auto& dims : proof_cells) {
            const double alpha = resolve_alpha(dims, opt.alpha, opt.alpha_frac, 1.0);
            append_proof_verdicts(rows, dims, alpha, cfg, opt.eng.seed);
        }
    }
    if (opt.suite == "bayes" || opt.suite == "all") {
        for (const auto& hyper : bayes_cells) {
            vs::check_hyper(hyper);
            append_bayes_verdicts(rows, hyper, cfg, opt.eng.seed);
        }
    }

    print_verdicts(rows);
    const bool all_passed =
        std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.passed; });
    std::printf("%zu checks, %s\n", rows.size(), all_passed ? "all passed" : "FAILURES");

    if (!opt.out.empty()) {
        ConfigEcho config = {
            {"suite", opt.suite},
            {"nodes", std::to_string(opt.eng.nodes)},
            {"tail-tol", fmt17(opt.eng.tail_tol)},
            {"seed", std::to_string(opt.eng.seed)},
        };
        json doc;
        doc["metadata"] = metadata_json("verify", config);
        doc["tables"] = json::object();
        doc["verdicts"] = verdicts_json(rows);
        if (!write_file(opt.out, doc.dump(2) + "\n")) {
            std::cerr << "error: cannot write " << opt.out << "\n";
            return kExitUsage;
        }
    }
    return all_passed ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// report

struct ReportOpts {
    std::string out_dir;
    EngineOpts eng;
};

int run_report(const ReportOpts& opt) {
    namespace fs = std::filesystem;
    const fs::path dir(opt.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        std::cerr << "error: cannot create " << dir << ": " << ec.message() << "\n";
        return kExitUsage;
    }

    const vs::QuadConfig cfg = quad_config(opt.eng);
    const std::vector<vs::ProblemDims> cells = {{1, 1}, {3, 5}, {4, 2}, {10, 10}};
    const auto& grid = vs::default_tau_grid();

    ConfigEcho base_config = {
        {"cells", "(1,1) (3,5) (4,2) (10,10)"},
        {"alpha", "alpha-star per cell"},
        {"tau-grid", "default"},
        {"nodes", std::to_string(opt.eng.nodes)},
        {"tail-tol", fmt17(opt.eng.tail_tol)},
    };

    json tables = json::object();
    json verdicts = json::object();
    for (const auto& dims : cells) {
        const double star = vs::alpha_star(dims);
        const std::string tag = cell_tag(dims);

        // risk curves per family
        const std::vector<std::pair<std::string, vs::EstimatorSpec>> families = {
            {"best_equivariant", vs::EstimatorSpec::best_equivariant()},
            {"stein", vs::EstimatorSpec::stein_truncated()},
            {"simple_bayes", vs::EstimatorSpec::simple_bayes(star)},
        };
        for (const auto& [name, spec] : families) {
            ConfigEcho config = base_config;
            config.push_back({"cell", tag});
            config.push_back({"estimator", name});
            config.push_back({"alpha", name == "simple_bayes" ? fmt17(star) : "n/a"});
            std::ostringstream body;
            write_comment_header(body, "report", config);
            body << "tau,risk,error_bound,method\n";
            for (double tau : grid) {
                const auto r = vs::risk_exact(spec, dims, {tau}, cfg);
                body << fmt17(tau) << ',' << fmt17(r.value) << ','
                     << fmt17(r.error_bound) << ",quadrature\n";
            }
            if (!write_file(dir / ("risk_" + tag + "_" + name + ".csv"), body.str())) {
                std::cerr << "error: cannot write risk CSV for " << tag << "\n";
                return kExitUsage;
            }
        }

        // dominance scan and plot-ready delta table
        const auto scan = vs::dominance_scan(star, dims, grid, cfg, 1e-8);
        std::ostringstream plot;
        ConfigEcho config = base_config;
        config.push_back({"cell", tag});
        config.push_back({"alpha", fmt17(star)});
        write_comment_header(plot, "report", config);
        json tau_col = json::array();
        json delta_col = json::array();
        for (const auto& cell : scan.cells) {
            plot << fmt17(cell.tau) << ' ' << fmt17(cell.delta) << "\n";
            tau_col.push_back(cell.tau);
            delta_col.push_back(cell.delta);
        }
        if (!write_file(dir / ("delta_" + tag + ".dat"), plot.str())) {
            std::cerr << "error: cannot write delta table for " << tag << "\n";
            return kExitUsage;
        }
        tables["delta_" + tag] = json{{"tau", tau_col}, {"delta", delta_col}};

        json v;
        v["pass"] = (scan.verdict == vs::DominanceVerdict::dominates);
        v["operation"] = "dominance_scan";
        v["verdict"] = verdict_name(scan.verdict);
        v["alpha"] = star;
        v["min_delta"] = scan.min_delta;
        v["argmin_tau"] = scan.argmin_tau;
        verdicts["dominance_" + tag] = v;
    }

    json doc;
    doc["metadata"] = metadata_json("report", base_config);
    doc["tables"] = tables;
    doc["verdicts"] = verdicts;
    if (!write_file(dir / "summary.json", doc.dump(2) + "\n")) {
        std::cerr << "error: cannot write summary.json\n";
        return kExitUsage;
    }
    std::printf("report written to %s\n", dir.string().c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simple Bayes variance estimation under entropy loss: "
                 "risk engines, dominance threshold, verification suites"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(vs::version));

    DimsOpts star_dims;
    auto* cmd_star = app.add_subcommand("alpha-star",
                                        "Closed-form dominance threshold");
    cmd_star->add_option("--p", star_dims.p, "dimension p")->required()
        ->check(CLI::PositiveNumber);
    cmd_star->add_option("--n", star_dims.n, "degrees of freedom n")->required()
        ->check(CLI::PositiveNumber);

    RiskOpts risk;
    auto* cmd_risk = app.add_subcommand("risk", "Risk curve over a tau grid");
    cmd_risk->add_option("--estimator", risk.estimator,
                         "best-equivariant | stein | simple-bayes");
    cmd_risk->add_option("--p", risk.dims.p, "dimension p")->check(CLI::PositiveNumber);
    cmd_risk->add_option("--n", risk.dims.n, "degrees of freedom n")
        ->check(CLI::PositiveNumber);
    cmd_risk->add_option("--alpha", risk.alpha, "shrinkage alpha");
    cmd_risk->add_option("--alpha-frac", risk.alpha_frac,
                         "alpha as a fraction of alpha*");
    cmd_risk->add_option("--tau-grid", risk.tau_grid, "start:stop:step or comma list");
    cmd_risk->add_option("--method", risk.method, "quad | mc");
    cmd_risk->add_option("--nodes", risk.eng.nodes, "quadrature order");
    cmd_risk->add_option("--tail-tol", risk.eng.tail_tol, "Poisson tail tolerance");
    cmd_risk->add_option("--samples", risk.eng.samples, "Monte Carlo samples");
    cmd_risk->add_option("--seed", risk.eng.seed, "master seed");
    cmd_risk->add_option("--out", risk.out, "output file (default stdout)");
    cmd_risk->add_option("--format", risk.format, "csv | json");

    DominanceOpts dom;
    auto* cmd_dom = app.add_subcommand("dominance", "Dominance scan over tau");
    cmd_dom->add_option("--p", dom.dims.p, "dimension p")->check(CLI::PositiveNumber);
    cmd_dom->add_option("--n", dom.dims.n, "degrees of freedom n")
        ->check(CLI::PositiveNumber);
    cmd_dom->add_option("--alpha", dom.alpha, "shrinkage alpha");
    cmd_dom->add_option("--alpha-frac", dom.alpha_frac,
                        "alpha as a fraction of alpha*");
    cmd_dom->add_option("--tau-grid", dom.tau_grid, "start:stop:step or comma list");
    cmd_dom->add_option("--tol", dom.tol, "violation tolerance");
    cmd_dom->add_option("--nodes", dom.eng.nodes, "quadrature order");
    cmd_dom->add_option("--tail-tol", dom.eng.tail_tol, "Poisson tail tolerance");
    cmd_dom->add_option("--out", dom.out, "report file");
    cmd_dom->add_option("--format", dom.format, "csv | json");

    VerifyOpts verify;
    auto* cmd_verify = app.add_subcommand("verify", "Bayes / proof audit suites");
    cmd_verify->add_option("suite", verify.suite, "bayes | proof | all");
    cmd_verify->add_option("--p", verify.p, "dimension p")->check(CLI::PositiveNumber);
    cmd_verify->add_option("--n", verify.n, "degrees of freedom n")
        ->check(CLI::PositiveNumber);
    cmd_verify->add_option("--a", verify.a, "prior hyperparameter a");
    cmd_verify->add_option("--alpha", verify.alpha, "shrinkage alpha");
    cmd_verify->add_option("--alpha-frac", verify.alpha_frac,
                           "alpha as a fraction of alpha*");
    cmd_verify->add_option("--nodes", verify.eng.nodes, "quadrature order");
    cmd_verify->add_option("--tail-tol", verify.eng.tail_tol,
                           "Poisson tail tolerance");
    cmd_verify->add_option("--seed", verify.eng.seed, "master seed");
    cmd_verify->add_option("--out", verify.out, "JSON report file");

    ReportOpts report;
    auto* cmd_report = app.add_subcommand("report", "Full acceptance-style report");
    cmd_report->add_option("--out-dir", report.out_dir, "output directory")->required();
    cmd_report->add_option("--nodes", report.eng.nodes, "quadrature order");
    cmd_report->add_option("--tail-tol", report.eng.tail_tol,
                           "Poisson tail tolerance");
    cmd_report->add_option("--seed", report.eng.seed, "master seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\nrun with --help for usage\n";
        return kExitUsage;
    }

    try {
        if (cmd_star->parsed()) return run_alpha_star(star_dims);
        if (cmd_risk->parsed()) return run_risk(risk);
        if (cmd_dom->parsed()) return run_dominance(dom);
        if (cmd_verify->parsed()) return run_verify(verify);
        if (cmd_report->parsed()) return run_report(report);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\nrun with --help for usage\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\nrun with --help for usage\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitUsage;
}
